#pragma once

#include <memory>
#include <vector>

#include "affkl/fraction.hpp"
#include "affkl/hecke.hpp"
#include "affkl/linalg.hpp"
#include "affkl/poly.hpp"

namespace affkl {

// An object of the graded Abe category with a Delta-flag, presented by
// localization data: a list of lines (one per Q-basis vector of M (x) Q,
// labelled by elements of W) and the matrix D whose column i holds the
// left-Q coordinates of the i-th lattice generator in the line basis.
// The right action of r in R on the lattice is D^{-1} diag(w_j(r)) D, with
// polynomial entries.
template <class K>
class Flagged {
public:
  struct Line {
    AffElem w;
    int phi;  // graded degree of the implicit line vector
  };

  RealizationPtr<K> real;
  std::vector<Line> lines;
  std::vector<int> lat_deg;            // graded degrees of the lattice basis
  Mat<Frac<K>> loc;                    // rows: lines, cols: lattice
  HeckeElement ch;                     // Delta-flag character
  bool ch_multiplicative = false;      // lies in the additive closure of
                                       // Bott-Samelson objects

  size_t rank() const { return lat_deg.size(); }

  const Mat<Frac<K>>& loc_inverse() const {
    if (inv_cache_.rows() == 0 && rank() > 0) {
      inv_cache_ = frac_inverse(loc);
      for (size_t i = 0; i < inv_cache_.rows(); ++i)
        for (size_t j = 0; j < inv_cache_.cols(); ++j) inv_cache_(i, j).normalize_forms(*real);
    }
    return inv_cache_;
  }
  void set_loc_inverse(Mat<Frac<K>> inv) const { inv_cache_ = std::move(inv); }

  // flag multiset (element, character shift) read off the character
  std::vector<std::pair<AffElem, int>> flag_multiset() const {
    std::vector<std::pair<AffElem, int>> out;
    for (auto& [w, p] : ch.terms())
      for (auto& [e, c] : p.coeffs())
        for (long long m = 0; m < c; ++m) out.emplace_back(w, e);
    return out;
  }

  static Mat<Frac<K>> frac_inverse(const Mat<Frac<K>>& m) {
    size_t n = m.rows();
    Mat<Frac<K>> a = m, inv(n, n);
    // identity with the right field context
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j)
        if (i == j) {
          // derive a one from some nonzero entry of m
          for (size_t r = 0; r < n; ++r)
            for (size_t c = 0; c < n; ++c)
              if (!m(r, c).is_zero()) {
                Frac<K> f = m(r, c);
                inv(i, j) = f / f;
                goto found;
              }
          throw std::domain_error("frac_inverse: zero matrix");
        found:;
        }
    for (size_t col = 0; col < n; ++col) {
      size_t piv = SIZE_MAX;
      for (size_t i = col; i < n; ++i)
        if (!a(i, col).is_zero()) { piv = i; break; }
      if (piv == SIZE_MAX) throw std::domain_error("frac_inverse: singular localization matrix");
      if (piv != col)
        for (size_t j = 0; j < n; ++j) {
          std::swap(a(piv, j), a(col, j));
          std::swap(inv(piv, j), inv(col, j));
        }
      Frac<K> f = a(col, col).inv();
      for (size_t j = 0; j < n; ++j) {
        a(col, j) *= f;
        inv(col, j) *= f;
      }
      for (size_t i = 0; i < n; ++i) {
        if (i == col || a(i, col).is_zero()) continue;
        Frac<K> g = a(i, col);
        for (size_t j = 0; j < n; ++j) {
          a(i, j) -= g * a(col, j);
          inv(i, j) -= g * inv(col, j);
        }
      }
    }
    return inv;
  }

  void normalize_loc() {
    for (size_t i = 0; i < loc.rows(); ++i)
      for (size_t j = 0; j < loc.cols(); ++j) loc(i, j).normalize_forms(*real);
  }

  // denominator bookkeeping contract: all loc denominators are products of
  // W_f-translates of the alpha_s
  bool denominators_ok() const {
    for (size_t i = 0; i < loc.rows(); ++i)
      for (size_t j = 0; j < loc.cols(); ++j)
        if (!loc(i, j).denominator_in_forms(*real)) return false;
    return true;
  }

private:
  mutable Mat<Frac<K>> inv_cache_;
};

template <class K>
class AbeContext {
public:
  AbeContext(RealizationPtr<K> real, std::shared_ptr<HeckeContext> hecke)
      : real_(std::move(real)), hecke_(std::move(hecke)) {}
  explicit AbeContext(RealizationPtr<K> real)
      : real_(real), hecke_(std::make_shared<HeckeContext>(real->group())) {}

  const RealizationPtr<K>& real() const { return real_; }
  const WeylGroupPtr& group() const { return real_->group(); }
  HeckeContext& hecke() const { return *hecke_; }

  Frac<K> fr(GradedPoly<K> p) const { return Frac<K>(std::move(p)); }
  GradedPoly<K> one_poly() const { return GradedPoly<K>::constant(real_->nvars(), real_->one()); }

  // F_w(n)
  Flagged<K> std_object(const AffElem& w, int n) const {
    Flagged<K> m;
    m.real = real_;
    m.lines.push_back({w, -n});
    m.lat_deg.push_back(-n);
    m.loc = Mat<Frac<K>>(1, 1);
    m.loc(0, 0) = fr(one_poly());
    m.ch = LaurentPoly::v_pow((int)group()->length(w) + n) * HeckeElement::std_basis(w);
    m.ch_multiplicative = group()->length(w) == 0;
    return m;
  }

  // B_s = R (x)_{R^s} R (1) for a finite generator; affine generators are
  // conjugated into place via F_w * B_{s'} * F_{w^{-1}}
  Flagged<K> bs_generator(size_t gen_index) const {
    const auto& W = *group();
    if (gen_index < W.num_finite_gens()) {
      Flagged<K> m;
      m.real = real_;
      AffElem s = W.gen(gen_index);
      m.lines.push_back({W.identity(), 1});
      m.lines.push_back({s, 1});
      m.lat_deg = {-1, 1};
      GradedPoly<K> alpha = real_->alpha(gen_index);
      GradedPoly<K> delta = real_->delta_poly(gen_index);
      GradedPoly<K> sdelta = real_->act_fin(real_->reflection_fin(gen_index), delta);
      m.loc = Mat<Frac<K>>(2, 2);
      m.loc(0, 0) = Frac<K>(one_poly(), alpha);
      m.loc(0, 1) = Frac<K>(delta, alpha);
      m.loc(1, 0) = Frac<K>(one_poly(), alpha);
      m.loc(1, 1) = Frac<K>(sdelta, alpha);
      m.ch = hecke_->kl_gen(gen_index);
      m.ch_multiplicative = true;
      return m;
    }
    auto [w, sp] = W.conjugation_datum(gen_index);
    Flagged<K> inner = bs_generator(sp);
    Flagged<K> out =
        tensor(tensor(std_object(w, 0), inner), std_object(W.inverse(w), 0));
    out.ch = hecke_->kl_gen(gen_index);
    out.ch_multiplicative = true;
    return out;
  }

  Flagged<K> shifted(const Flagged<K>& m, int n) const {
    Flagged<K> out = m;
    for (auto& d : out.lat_deg) d -= n;
    for (auto& l : out.lines) l.phi -= n;
    out.ch = LaurentPoly::v_pow(n) * m.ch;
    return out;
  }

  Flagged<K> tensor(const Flagged<K>& a, const Flagged<K>& b) const {
    Flagged<K> out;
    out.real = real_;
    const auto& W = *group();
    size_t ra = a.rank(), rb = b.rank();
    size_t la = a.lines.size(), lb = b.lines.size();
    for (size_t j = 0; j < la; ++j)
      for (size_t l = 0; l < lb; ++l)
        out.lines.push_back({W.mult(a.lines[j].w, b.lines[l].w), a.lines[j].phi + b.lines[l].phi});
    for (size_t i = 0; i < ra; ++i)
      for (size_t k = 0; k < rb; ++k) out.lat_deg.push_back(a.lat_deg[i] + b.lat_deg[k]);
    out.loc = Mat<Frac<K>>(la * lb, ra * rb);
    for (size_t j = 0; j < la; ++j)
      for (size_t l = 0; l < lb; ++l)
        for (size_t i = 0; i < ra; ++i)
          for (size_t k = 0; k < rb; ++k) {
            if (a.loc(j, i).is_zero() || b.loc(l, k).is_zero()) continue;
            Frac<K> t = a.loc(j, i) * act_frac(a.lines[j].w, b.loc(l, k));
            t.normalize_forms(*real_);
            out.loc(j * lb + l, i * rb + k) = std::move(t);
          }
    out.ch = hecke_->multiply(a.ch, b.ch);
    out.ch_multiplicative = a.ch_multiplicative && b.ch_multiplicative;
    // structured inverse: D^{-1} = (D_a^{-1} (x) I) * blockdiag_j(w_j(D_b^{-1}))
    const Mat<Frac<K>>& ia = a.loc_inverse();
    const Mat<Frac<K>>& ib = b.loc_inverse();
    Mat<Frac<K>> inv(ra * rb, la * lb);
    for (size_t i = 0; i < ra; ++i)
      for (size_t k = 0; k < rb; ++k)
        for (size_t j = 0; j < la; ++j) {
          if (ia(i, j).is_zero()) continue;
          for (size_t l = 0; l < lb; ++l) {
            if (ib(k, l).is_zero()) continue;
            Frac<K> t = ia(i, j) * act_frac(a.lines[j].w, ib(k, l));
            t.normalize_forms(*real_);
            inv(i * rb + k, j * lb + l) += t;
          }
        }
    out.set_loc_inverse(std::move(inv));
    return out;
  }

  Frac<K> act_frac(const AffElem& w, const Frac<K>& f) const {
    if (f.is_zero()) return f;
    if (f.is_polynomial()) return Frac<K>(real_->act(w, f.num()));
    return Frac<K>(real_->act(w, f.num()), real_->act(w, f.den_val()));
  }

  // right action matrix of r on the lattice (polynomiality check surface)
  Mat<GradedPoly<K>> right_action_matrix(const Flagged<K>& m, const GradedPoly<K>& r) const {
    size_t n = m.rank();
    const Mat<Frac<K>>& dinv = m.loc_inverse();
    Mat<GradedPoly<K>> out(n, n, GradedPoly<K>(real_->nvars()));
    for (size_t i = 0; i < n; ++i)
      for (size_t k = 0; k < n; ++k) {
        Frac<K> acc;
        for (size_t j = 0; j < m.lines.size(); ++j) {
          if (dinv(i, j).is_zero() || m.loc(j, k).is_zero()) continue;
          acc += dinv(i, j) * fr(real_->act(m.lines[j].w, r)) * m.loc(j, k);
        }
        acc.normalize_forms(*real_);
        auto p = acc.try_polynomial();
        if (!p)
          throw std::logic_error("right_action_matrix: non-polynomial entry (lattice corrupt)");
        out(i, k) = *p;
      }
    return out;
  }

private:
  RealizationPtr<K> real_;
  std::shared_ptr<HeckeContext> hecke_;
};

}  // namespace affkl
