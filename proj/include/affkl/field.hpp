#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <iosfwd>
#include <boost/multiprecision/cpp_int.hpp>

namespace affkl {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

// Prime field with runtime modulus. Elements carry their modulus so that
// values from different sessions cannot be mixed silently.
class Zp {
public:
  Zp() : v_(0), p_(0) {}
  Zp(long long v, uint32_t p) : p_(p) {
    long long r = v % (long long)p;
    if (r < 0) r += p;
    v_ = (uint64_t)r;
  }
  static Zp zero_of(uint32_t p) { return Zp(0, p); }
  static Zp one_of(uint32_t p) { return Zp(1, p); }

  uint32_t modulus() const { return p_; }
  uint64_t rep() const { return v_; }
  bool is_zero() const { return v_ == 0; }

  friend Zp operator+(Zp a, Zp b) {
    harmonize(a, b);
    if (a.p_ == 0) return a;
    uint64_t s = a.v_ + b.v_;
    if (s >= a.p_) s -= a.p_;
    return Zp::raw(s, a.p_);
  }
  friend Zp operator-(Zp a, Zp b) {
    harmonize(a, b);
    if (a.p_ == 0) return a;
    uint64_t s = a.v_ + a.p_ - b.v_;
    if (s >= a.p_) s -= a.p_;
    return Zp::raw(s, a.p_);
  }
  friend Zp operator*(Zp a, Zp b) {
    harmonize(a, b);
    if (a.p_ == 0) return a;
    return Zp::raw((a.v_ * b.v_) % a.p_, a.p_);
  }
  Zp operator-() const { return p_ == 0 ? *this : raw(v_ == 0 ? 0 : p_ - v_, p_); }
  Zp inv() const {
    if (v_ == 0) throw std::domain_error("Zp: inverse of zero");
    // extended Euclid
    long long a = (long long)v_, m = (long long)p_;
    long long x0 = 1, x1 = 0, b = m;
    while (b != 0) {
      long long q = a / b;
      long long t = a - q * b; a = b; b = t;
      t = x0 - q * x1; x0 = x1; x1 = t;
    }
    if (a != 1) throw std::domain_error("Zp: modulus not prime?");
    return Zp(x0, p_);
  }
  friend Zp operator/(Zp a, Zp b) { return a * b.inv(); }
  Zp& operator+=(Zp b) { *this = *this + b; return *this; }
  Zp& operator-=(Zp b) { *this = *this - b; return *this; }
  Zp& operator*=(Zp b) { *this = *this * b; return *this; }
  friend bool operator==(const Zp& a, const Zp& b) {
    return a.v_ == b.v_ && (a.p_ == b.p_ || a.v_ == 0);
  }
  friend bool operator!=(const Zp& a, const Zp& b) { return !(a == b); }
  friend bool operator<(const Zp& a, const Zp& b) { return a.v_ < b.v_; }

  std::string str() const { return std::to_string(v_); }

private:
  static Zp raw(uint64_t v, uint32_t p) { Zp z; z.v_ = v; z.p_ = p; return z; }
  // a default-constructed zero has modulus 0 and adopts its partner's modulus
  static void harmonize(Zp& a, Zp& b) {
    if (a.p_ == 0 && a.v_ == 0) a.p_ = b.p_;
    if (b.p_ == 0 && b.v_ == 0) b.p_ = a.p_;
    if (a.p_ != b.p_) throw std::logic_error("Zp: mixed moduli");
  }
  uint64_t v_;
  uint32_t p_;
};

// Exact rationals (arbitrary precision).
class Rat {
public:
  Rat() : v_(0) {}
  Rat(long long n) : v_(n) {}
  Rat(long long n, long long d) : v_(BigRat(n, d)) {}
  explicit Rat(BigRat v) : v_(std::move(v)) {}

  static Rat zero_of(uint32_t) { return Rat(0); }
  static Rat one_of(uint32_t) { return Rat(1); }
  uint32_t modulus() const { return 0; }
  bool is_zero() const { return v_ == 0; }
  const BigRat& rep() const { return v_; }

  friend Rat operator+(const Rat& a, const Rat& b) { return Rat(a.v_ + b.v_); }
  friend Rat operator-(const Rat& a, const Rat& b) { return Rat(a.v_ - b.v_); }
  friend Rat operator*(const Rat& a, const Rat& b) { return Rat(a.v_ * b.v_); }
  friend Rat operator/(const Rat& a, const Rat& b) {
    if (b.is_zero()) throw std::domain_error("Rat: division by zero");
    return Rat(a.v_ / b.v_);
  }
  Rat operator-() const { return Rat(-v_); }
  Rat inv() const {
    if (is_zero()) throw std::domain_error("Rat: inverse of zero");
    return Rat(BigRat(1) / v_);
  }
  Rat& operator+=(const Rat& b) { v_ += b.v_; return *this; }
  Rat& operator-=(const Rat& b) { v_ -= b.v_; return *this; }
  Rat& operator*=(const Rat& b) { v_ *= b.v_; return *this; }
  friend bool operator==(const Rat& a, const Rat& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rat& a, const Rat& b) { return a.v_ != b.v_; }
  friend bool operator<(const Rat& a, const Rat& b) { return a.v_ < b.v_; }

  std::string str() const { return v_.str(); }

private:
  BigRat v_;
};

// Field descriptor used for runtime dispatch.
struct FieldSpec {
  bool rational = true;
  uint32_t ell = 0;  // prime when !rational

  static FieldSpec rationals() { return FieldSpec{true, 0}; }
  static FieldSpec prime(uint32_t ell) { return FieldSpec{false, ell}; }
  std::string str() const { return rational ? std::string("Q") : std::to_string(ell); }
  bool operator==(const FieldSpec& o) const { return rational == o.rational && ell == o.ell; }
};

inline bool is_prime_u32(uint32_t n) {
  if (n < 2) return false;
  for (uint32_t d = 2; (uint64_t)d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

template <class K> struct field_traits;
template <> struct field_traits<Zp> {
  static Zp zero(uint32_t p) { return Zp::zero_of(p); }
  static Zp one(uint32_t p) { return Zp::one_of(p); }
  static Zp from_int(long long n, uint32_t p) { return Zp(n, p); }
  static constexpr bool is_rational = false;
};
template <> struct field_traits<Rat> {
  static Rat zero(uint32_t) { return Rat(0); }
  static Rat one(uint32_t) { return Rat(1); }
  static Rat from_int(long long n, uint32_t) { return Rat(n); }
  static constexpr bool is_rational = true;
};

// Content normalization: rescale a family of coefficients by a common
// scalar so rationals become coprime integers. Scale-free data (lattice
// generators, line vectors, morphism basis vectors) stays small this way.
inline Rat content_scalar(const std::vector<Rat>& xs) {
  BigInt g = 0, l = 1;
  for (const auto& x : xs) {
    if (x.is_zero()) continue;
    BigInt n = boost::multiprecision::numerator(x.rep());
    BigInt d = boost::multiprecision::denominator(x.rep());
    g = boost::multiprecision::gcd(g, n < 0 ? BigInt(-n) : n);
    l = l / boost::multiprecision::gcd(l, d) * d;
  }
  if (g == 0) return Rat(1);
  return Rat(BigRat(l, g));
}
inline Zp content_scalar(const std::vector<Zp>&) { return Zp(); }

template <class K>
void content_normalize(std::vector<K>& xs) {
  if constexpr (field_traits<K>::is_rational) {
    Rat s = content_scalar(xs);
    for (auto& x : xs)
      if (!x.is_zero()) x *= s;
  }
}

}  // namespace affkl
