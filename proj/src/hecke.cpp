#include "affkl/hecke.hpp"

#include <sstream>

namespace affkl {

HeckeElement HeckeContext::mult_gen(const HeckeElement& a, size_t i) const {
  const AffElem& s = w_->gen(i);
  HeckeElement out;
  for (auto& [z, c] : a.terms()) {
    AffElem zs = w_->mult(z, s);
    if (w_->length(zs) > w_->length(z)) {
      out.add_term(zs, c);
    } else {
      out.add_term(zs, c);
      out.add_term(z, (LaurentPoly::v_pow(-1) - LaurentPoly::v_pow(1)) * c);
    }
  }
  return out;
}

HeckeElement HeckeContext::mult_std(const HeckeElement& a, const AffElem& y) const {
  auto [om, yp] = w_->coset_split(y);
  // H_x H_{omega u} = H_x H_u' ... with u' the omega-conjugated word; instead
  // use y = (omega) * u and H_{omega u} = H_omega H_u, multiplying on the
  // right: H_x H_omega = H_{x omega}
  // first x * H_omega
  HeckeElement cur;
  for (auto& [z, c] : a.terms()) cur.add_term(w_->mult(z, om), c);
  // conjugated word: omega u omega^{-1} has a word in S; but simpler is
  // H_{omega u} = H_{(omega u omega^{-1})} H_omega; we already multiplied by
  // H_omega, so fold the letters of u conjugated appropriately:
  // x H_omega H_u = x H_omega (product of H_{s_i}). Multiply generator by
  // generator on the right.
  for (int i : w_->lex_word(yp)) cur = mult_gen(cur, (size_t)i);
  return cur;
}

HeckeElement HeckeContext::multiply(const HeckeElement& a, const HeckeElement& b) const {
  HeckeElement out;
  for (auto& [y, c] : b.terms()) {
    HeckeElement part = mult_std(a, y);
    out = out + c * part;
  }
  return out;
}

HeckeElement HeckeContext::left_omega(const AffElem& omega, const HeckeElement& a) const {
  HeckeElement out;
  for (auto& [z, c] : a.terms()) out.add_term(w_->mult(omega, z), c);
  return out;
}

HeckeElement HeckeContext::inverse_of_std(const AffElem& w) const {
  // (H_w)^{-1} for w = omega u: H_w = H_omega H_{s_1} ... H_{s_k}, so the
  // inverse is H_{s_k}^{-1} ... H_{s_1}^{-1} H_{omega^{-1}}
  auto [om, u] = w_->coset_split(w);
  auto word = w_->lex_word(u);
  HeckeElement cur = HeckeElement::std_basis(w_->inverse(om));
  // iterate forward: each step left-multiplies, so the last letter of the
  // word ends up leftmost, giving H_{j_m}^{-1} ... H_{j_1}^{-1} H_{omega^{-1}}
  for (auto it = word.begin(); it != word.end(); ++it) {
    // left multiply by H_s^{-1} = H_s + (v - v^{-1}) H_e
    size_t i = (size_t)*it;
    const AffElem& s = w_->gen(i);
    HeckeElement nxt;
    for (auto& [z, c] : cur.terms()) {
      AffElem sz = w_->mult(s, z);
      if (w_->length(sz) > w_->length(z)) {
        nxt.add_term(sz, c);
      } else {
        nxt.add_term(sz, c);
        nxt.add_term(z, (LaurentPoly::v_pow(-1) - LaurentPoly::v_pow(1)) * c);
      }
    }
    // that computed H_s * cur; we need H_s^{-1} * cur = H_s*cur + (v - v^-1)*cur
    cur = nxt + (LaurentPoly::v_pow(1) - LaurentPoly::v_pow(-1)) * cur;
  }
  return cur;
}

HeckeElement HeckeContext::bar(const HeckeElement& a) const {
  HeckeElement out;
  for (auto& [w, c] : a.terms()) {
    HeckeElement inv = inverse_of_std(w_->inverse(w));
    out = out + c.bar() * inv;
  }
  return out;
}

HeckeElement HeckeContext::kl_gen(size_t i) const {
  HeckeElement b = HeckeElement::std_basis(w_->gen(i));
  b.add_term(w_->identity(), LaurentPoly::v_pow(1));
  return b;
}

HeckeElement HeckeContext::kl_basis(const AffElem& w) const {
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = kl_cache_.find(w);
    if (it != kl_cache_.end()) return it->second;
  }
  auto [om, u] = w_->coset_split(w);
  HeckeElement result;
  if (w_->length(u) == 0) {
    result = HeckeElement::std_basis(w);
  } else {
    auto word = w_->lex_word(u);
    size_t last = (size_t)word.back();
    AffElem uprime = w_->mult(u, w_->gen(last));  // u * s, shorter
    HeckeElement c = mult_kl_gen(kl_basis(uprime), last);
    // subtract lower KL terms so all sub-leading coefficients land in vZ[v]
    for (;;) {
      const AffElem* worst = nullptr;
      long long worst_len = -1;
      for (auto& [y, p] : c.terms()) {
        if (y == u) continue;
        LaurentPoly low;
        for (auto& [e, cc] : p.coeffs())
          if (e <= 0) low.set_coeff(e, cc);
        if (low.is_zero()) continue;
        long long len = w_->length(y);
        if (len > worst_len) {
          worst_len = len;
          worst = &y;
        }
      }
      if (!worst) break;
      AffElem y = *worst;
      LaurentPoly p = c.coeff(y);
      LaurentPoly m;  // bar-invariant correction: low part + mirrored strictly-negative part
      for (auto& [e, cc] : p.coeffs()) {
        if (e < 0) {
          m.set_coeff(e, cc);
          m.set_coeff(-e, m.coeff(-e) + cc);
        } else if (e == 0) {
          m.set_coeff(0, m.coeff(0) + cc);
        }
      }
      c = c - m * kl_basis(y);
    }
    result = left_omega(om, c);
  }
  std::lock_guard<std::mutex> lock(mu_);
  kl_cache_[w] = result;
  return result;
}

std::string HeckeContext::to_string(const HeckeElement& a) const {
  std::ostringstream os;
  bool first = true;
  for (auto& [w, c] : a.terms()) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.str() << ")*H[" << w_->to_string(w) << "]";
  }
  if (first) os << "0";
  return os.str();
}

}  // namespace affkl
