#pragma once

#include <map>
#include <string>
#include <stdexcept>
#include <cstdint>

namespace affkl {

// Laurent polynomials in v with integer coefficients. v tracks half the
// polynomial grading (degree-2 convention for t), so character exponents are
// plain integers here.
class LaurentPoly {
public:
  LaurentPoly() = default;
  static LaurentPoly constant(long long c) {
    LaurentPoly p;
    if (c) p.c_[0] = c;
    return p;
  }
  static LaurentPoly v_pow(int e, long long c = 1) {
    LaurentPoly p;
    if (c) p.c_[e] = c;
    return p;
  }

  bool is_zero() const { return c_.empty(); }
  long long coeff(int e) const {
    auto it = c_.find(e);
    return it == c_.end() ? 0 : it->second;
  }
  const std::map<int, long long>& coeffs() const { return c_; }
  void set_coeff(int e, long long v) {
    if (v == 0) c_.erase(e); else c_[e] = v;
  }

  int min_exp() const {
    if (is_zero()) throw std::logic_error("LaurentPoly: empty");
    return c_.begin()->first;
  }
  int max_exp() const {
    if (is_zero()) throw std::logic_error("LaurentPoly: empty");
    return c_.rbegin()->first;
  }

  friend LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b) {
    LaurentPoly r = a;
    for (auto& [e, c] : b.c_) r.set_coeff(e, r.coeff(e) + c);
    return r;
  }
  friend LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b) {
    LaurentPoly r = a;
    for (auto& [e, c] : b.c_) r.set_coeff(e, r.coeff(e) - c);
    return r;
  }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    LaurentPoly r;
    for (auto& [e1, c1] : a.c_)
      for (auto& [e2, c2] : b.c_)
        r.set_coeff(e1 + e2, r.coeff(e1 + e2) + c1 * c2);
    return r;
  }
  LaurentPoly operator-() const {
    LaurentPoly r;
    for (auto& [e, c] : c_) r.c_[e] = -c;
    return r;
  }
  LaurentPoly& operator+=(const LaurentPoly& b) { *this = *this + b; return *this; }
  LaurentPoly& operator-=(const LaurentPoly& b) { *this = *this - b; return *this; }

  // v -> v^{-1}
  LaurentPoly bar() const {
    LaurentPoly r;
    for (auto& [e, c] : c_) r.c_[-e] = c;
    return r;
  }
  LaurentPoly shifted(int k) const {
    LaurentPoly r;
    for (auto& [e, c] : c_) r.c_[e + k] = c;
    return r;
  }
  long long eval_at_one() const {
    long long s = 0;
    for (auto& [e, c] : c_) s += c;
    return s;
  }
  // part with exponents >= 1
  LaurentPoly positive_part() const {
    LaurentPoly r;
    for (auto& [e, c] : c_)
      if (e >= 1) r.c_[e] = c;
    return r;
  }
  bool nonneg_coeffs() const {
    for (auto& [e, c] : c_)
      if (c < 0) return false;
    return true;
  }
  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) { return a.c_ == b.c_; }
  friend bool operator!=(const LaurentPoly& a, const LaurentPoly& b) { return !(a == b); }

  std::string str() const {
    if (is_zero()) return "0";
    std::string s;
    for (auto& [e, c] : c_) {
      if (!s.empty() && c > 0) s += "+";
      if (c == -1 && e != 0) s += "-";
      else if (c != 1 || e == 0) s += std::to_string(c);
      if (e != 0) {
        if (c != 1 && c != -1) s += "*";
        s += "v";
        if (e != 1) s += "^" + std::to_string(e);
      }
    }
    return s;
  }

private:
  std::map<int, long long> c_;  // exponent -> coefficient, no zeros stored
};

}  // namespace affkl
