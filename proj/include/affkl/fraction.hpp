#pragma once

#include "affkl/poly.hpp"

namespace affkl {

// Fraction of polynomials. An empty (zero) denominator slot means 1, which
// avoids manufacturing field constants out of thin air (Zp carries its
// modulus). Localization data of flagged objects only ever needs
// W_f-translates of the alpha_s in denominators; intermediate linear algebra
// may hold general denominators, which normalize away again.
template <class K>
class Frac {
public:
  Frac() = default;
  explicit Frac(GradedPoly<K> num) : num_(std::move(num)), den_(num_.nvars()) {}
  Frac(GradedPoly<K> num, GradedPoly<K> den) : num_(std::move(num)), den_(std::move(den)) {
    light_normalize();
  }

  const GradedPoly<K>& num() const { return num_; }
  size_t nvars() const { return num_.nvars(); }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.is_zero(); }
  const GradedPoly<K>& as_polynomial() const {
    if (!is_polynomial()) throw std::domain_error("Frac: not reduced to a polynomial");
    return num_;
  }
  std::optional<GradedPoly<K>> try_polynomial() const {
    if (is_polynomial()) return num_;
    return num_.divided_by(den_);
  }
  // denominator as an honest polynomial (requires a nonzero fraction)
  GradedPoly<K> den_val() const {
    if (!den_.is_zero()) return den_;
    K c = num_.leading_coeff();
    return GradedPoly<K>::constant(num_.nvars(), c / c);
  }

  friend Frac operator+(const Frac& a, const Frac& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.is_polynomial() && b.is_polynomial()) return Frac(a.num_ + b.num_);
    GradedPoly<K> ad = a.den_val(), bd = b.den_val();
    return Frac(a.num_ * bd + b.num_ * ad, ad * bd);
  }
  friend Frac operator-(const Frac& a, const Frac& b) { return a + (-b); }
  friend Frac operator*(const Frac& a, const Frac& b) {
    if (a.is_zero()) return a;
    if (b.is_zero()) return b;
    if (a.is_polynomial() && b.is_polynomial()) return Frac(a.num_ * b.num_);
    return Frac(a.num_ * b.num_, a.den_val() * b.den_val());
  }
  Frac operator-() const {
    Frac r = *this;
    r.num_ = -r.num_;
    return r;
  }
  Frac inv() const {
    if (num_.is_zero()) throw std::domain_error("Frac: inverse of zero");
    return Frac(den_val(), num_);
  }
  friend Frac operator/(const Frac& a, const Frac& b) { return a * b.inv(); }
  Frac& operator+=(const Frac& b) { *this = *this + b; return *this; }
  Frac& operator-=(const Frac& b) { *this = *this - b; return *this; }
  Frac& operator*=(const Frac& b) { *this = *this * b; return *this; }

  bool operator==(const Frac& o) const {
    if (is_zero()) return o.is_zero();
    if (o.is_zero()) return false;
    return (num_ * o.den_val()) == (o.num_ * den_val());
  }
  bool operator!=(const Frac& o) const { return !(*this == o); }

  // degree of a homogeneous fraction; nullopt for 0
  std::optional<int> degree() const {
    if (num_.is_zero()) return std::nullopt;
    int d = *num_.homogeneous_degree();
    if (!is_polynomial()) d -= *den_.homogeneous_degree();
    return d;
  }

  // normal form: cancel full divisibility, then every registered linear form
  // dividing both numerator and denominator (unique for the fixed registry
  // ordering)
  template <class Reg>
  void normalize_forms(const Reg& realization) {
    if (num_.is_zero() || is_polynomial()) {
      if (num_.is_zero()) den_ = GradedPoly<K>(num_.nvars());
      return;
    }
    if (auto q = num_.divided_by(den_)) {
      num_ = *q;
      den_ = GradedPoly<K>(num_.nvars());
      return;
    }
    for (size_t id = 0; id < realization.num_forms() && !is_polynomial(); ++id) {
      GradedPoly<K> f = realization.form_poly(id);
      for (;;) {
        auto qd = den_.divided_by(f);
        if (!qd) break;
        auto qn = num_.divided_by(f);
        if (!qn) break;
        den_ = *qd;
        num_ = *qn;
        light_normalize();
        if (is_polynomial()) break;
      }
    }
    light_normalize();
  }

  // denominator is a scalar times a product of registered forms
  template <class Reg>
  bool denominator_in_forms(const Reg& realization) const {
    if (is_polynomial()) return true;
    GradedPoly<K> d = den_;
    bool progress = true;
    while (!d.is_constant() && progress) {
      progress = false;
      for (size_t id = 0; id < realization.num_forms(); ++id) {
        if (auto q = d.divided_by(realization.form_poly(id))) {
          d = *q;
          progress = true;
          break;
        }
      }
    }
    return d.is_constant() && !d.is_zero();
  }

  std::string str() const {
    if (is_polynomial()) return num_.str();
    return "(" + num_.str() + ")/(" + den_.str() + ")";
  }

private:
  void light_normalize() {
    if (num_.is_zero() || den_.is_zero()) {
      if (num_.is_zero()) den_ = GradedPoly<K>(num_.nvars());
      return;
    }
    if (den_.is_constant()) {
      num_ = num_.scaled(den_.constant_value().inv());
      den_ = GradedPoly<K>(num_.nvars());
      return;
    }
    K inv = den_.leading_coeff().inv();
    den_ = den_.scaled(inv);
    num_ = num_.scaled(inv);
  }

  GradedPoly<K> num_, den_;
};

}  // namespace affkl
