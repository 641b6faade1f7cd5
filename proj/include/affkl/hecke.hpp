#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "affkl/laurent.hpp"
#include "affkl/weyl.hpp"

namespace affkl {

// Finitely supported Z[v, v^{-1}]-combination of standard basis elements H_w.
class HeckeElement {
public:
  HeckeElement() = default;
  static HeckeElement std_basis(const AffElem& w) {
    HeckeElement h;
    h.t_[w] = LaurentPoly::constant(1);
    return h;
  }

  bool is_zero() const { return t_.empty(); }
  const std::map<AffElem, LaurentPoly>& terms() const { return t_; }
  LaurentPoly coeff(const AffElem& w) const {
    auto it = t_.find(w);
    return it == t_.end() ? LaurentPoly() : it->second;
  }
  void add_term(const AffElem& w, const LaurentPoly& p) {
    if (p.is_zero()) return;
    auto& c = t_[w];
    c += p;
    if (c.is_zero()) t_.erase(w);
  }

  friend HeckeElement operator+(const HeckeElement& a, const HeckeElement& b) {
    HeckeElement r = a;
    for (auto& [w, p] : b.t_) r.add_term(w, p);
    return r;
  }
  friend HeckeElement operator-(const HeckeElement& a, const HeckeElement& b) {
    HeckeElement r = a;
    for (auto& [w, p] : b.t_) r.add_term(w, -p);
    return r;
  }
  friend HeckeElement operator*(const LaurentPoly& c, const HeckeElement& a) {
    HeckeElement r;
    for (auto& [w, p] : a.t_) r.add_term(w, c * p);
    return r;
  }
  bool operator==(const HeckeElement& o) const { return t_ == o.t_; }
  bool operator!=(const HeckeElement& o) const { return !(*this == o); }

private:
  std::map<AffElem, LaurentPoly> t_;
};

// Hecke algebra of the extended affine Weyl group, with the bar involution
// and the Kazhdan-Lusztig basis in Soergel normalization (b_s = H_s + v H_e).
class HeckeContext {
public:
  explicit HeckeContext(WeylGroupPtr w) : w_(std::move(w)) {}
  const WeylGroupPtr& group() const { return w_; }

  HeckeElement unit() const { return HeckeElement::std_basis(w_->identity()); }

  // right multiplication by H_s for a Coxeter generator
  HeckeElement mult_gen(const HeckeElement& a, size_t i) const;
  // right multiplication by H_w
  HeckeElement mult_std(const HeckeElement& a, const AffElem& y) const;
  HeckeElement multiply(const HeckeElement& a, const HeckeElement& b) const;
  // left multiplication by H_omega
  HeckeElement left_omega(const AffElem& omega, const HeckeElement& a) const;

  HeckeElement bar(const HeckeElement& a) const;
  HeckeElement kl_basis(const AffElem& w) const;
  // b_s as an element (w must be a Coxeter generator)
  HeckeElement kl_gen(size_t i) const;

  // right multiplication by b_s = H_s + v H_e
  HeckeElement mult_kl_gen(const HeckeElement& a, size_t i) const {
    return mult_gen(a, i) + LaurentPoly::v_pow(1) * a;
  }

  std::string to_string(const HeckeElement& a) const;

private:
  HeckeElement inverse_of_std(const AffElem& w) const;
  WeylGroupPtr w_;
  mutable std::map<AffElem, HeckeElement> kl_cache_;
  mutable std::mutex mu_;
};

}  // namespace affkl
