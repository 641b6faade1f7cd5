#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "affkl/fraction.hpp"
#include "affkl/poly.hpp"

using namespace affkl;

namespace {
template <class K>
GradedPoly<K> random_poly(const Realization<K>& R, int maxdeg, unsigned& state) {
  auto rnd = [&state]() {
    state = state * 1664525u + 1013904223u;
    return (state >> 16) & 0x7fff;
  };
  GradedPoly<K> p(R.nvars());
  for (int t = 0; t < 6; ++t) {
    Expo e(R.nvars(), 0);
    int total = (int)(rnd() % (unsigned)(maxdeg + 1));
    for (int k = 0; k < total; ++k) e[rnd() % R.nvars()] += 1;
    p.add_term(e, R.from_int((long long)(rnd() % 7) - 3));
  }
  return p;
}
}  // namespace

TEST_CASE("realization validity by type and characteristic") {
  // adjoint-side rank 1: alpha_s = 2 * (fundamental coweight)
  auto adj = WeylGroup::create("A1adj");
  CHECK_NOTHROW(validate_realization<Zp>(adj, FieldSpec::prime(5)));
  CHECK_THROWS_AS(validate_realization<Zp>(adj, FieldSpec::prime(2)), RealizationError);
  CHECK_NOTHROW(validate_realization<Rat>(adj, FieldSpec::rationals()));
  // simply connected side rank 1: delta_s needs 2 invertible
  auto a1 = WeylGroup::create("A1");
  CHECK_THROWS_AS(validate_realization<Zp>(a1, FieldSpec::prime(2)), RealizationError);
  CHECK_NOTHROW(validate_realization<Zp>(a1, FieldSpec::prime(3)));
  // GL2 works at every prime, including 2
  auto gl2 = WeylGroup::create("GL2");
  for (uint32_t ell : {2u, 3u, 5u, 7u}) CHECK_NOTHROW(validate_realization<Zp>(gl2, FieldSpec::prime(ell)));
  // A2 (sc side) works at 2, 3, 5
  auto a2 = WeylGroup::create("A2");
  for (uint32_t ell : {2u, 3u, 5u}) CHECK_NOTHROW(validate_realization<Zp>(a2, FieldSpec::prime(ell)));
  // non-prime ell rejected
  CHECK_THROWS_AS(validate_realization<Zp>(gl2, FieldSpec::prime(4)), std::invalid_argument);
}

TEST_CASE("W-action on R") {
  auto W = WeylGroup::create("A2");
  auto R = validate_realization<Rat>(W, FieldSpec::rationals());
  // act(s, alpha_s) = -alpha_s
  for (size_t i = 0; i < 2; ++i) {
    GradedPoly<Rat> img = R->act_fin(R->reflection_fin(i), R->alpha(i));
    CHECK(img == -R->alpha(i));
  }
  // identity and translations act trivially
  unsigned state = 12345;
  GradedPoly<Rat> p = random_poly(*R, 3, state);
  CHECK(R->act(W->identity(), p) == p);
  CHECK(R->act(W->translation(W->datum()->simple_root(0)), p) == p);
  // group action property on sampled pairs
  const auto& fw = W->finite();
  for (size_t a = 0; a < fw.size(); ++a)
    for (size_t b = 0; b < fw.size(); ++b) {
      GradedPoly<Rat> lhs = R->act_fin(fw.mult(a, b), p);
      GradedPoly<Rat> rhs = R->act_fin(a, R->act_fin(b, p));
      CHECK(lhs == rhs);
    }
}

TEST_CASE("demazure operators") {
  auto W = WeylGroup::create("A2");
  auto R = validate_realization<Rat>(W, FieldSpec::rationals());
  Rat one(1);
  GradedPoly<Rat> unit = GradedPoly<Rat>::constant(R->nvars(), one);
  for (size_t i = 0; i < W->num_gens(); ++i) {
    CHECK(R->demazure(i, unit).is_zero());
    // alpha_s^2 is s-invariant
    CHECK(R->demazure(i, R->alpha(i) * R->alpha(i)).is_zero());
  }
  for (size_t i = 0; i < W->num_finite_gens(); ++i) {
    // demazure(s, delta_s) = 1
    CHECK(R->demazure(i, R->delta_poly(i)) == unit);
  }
  // p = p0 + delta_s p1 with both parts s-invariant (the basis property)
  unsigned state = 777;
  for (size_t i = 0; i < W->num_finite_gens(); ++i) {
    for (int trial = 0; trial < 4; ++trial) {
      GradedPoly<Rat> p = random_poly(*R, 3, state);
      GradedPoly<Rat> p1 = R->demazure(i, p);
      GradedPoly<Rat> p0 = p - R->delta_poly(i) * p1;
      CHECK(R->act_fin(R->reflection_fin(i), p0) == p0);
      CHECK(R->act_fin(R->reflection_fin(i), p1) == p1);
      CHECK(p0 + R->delta_poly(i) * p1 == p);
    }
  }
  // degree drop by 2
  GradedPoly<Rat> q = R->delta_poly(0) * R->delta_poly(0) * R->delta_poly(0);
  GradedPoly<Rat> dq = R->demazure(0, q);
  CHECK(*q.homogeneous_degree() == 6);
  CHECK(*dq.homogeneous_degree() == 4);
}

TEST_CASE("demazure over small prime fields") {
  auto W = WeylGroup::create("GL2");
  auto R = validate_realization<Zp>(W, FieldSpec::prime(2));
  unsigned state = 99;
  for (int trial = 0; trial < 6; ++trial) {
    GradedPoly<Zp> p = random_poly(*R, 4, state);
    for (size_t i = 0; i < W->num_finite_gens(); ++i) {
      GradedPoly<Zp> p1 = R->demazure(i, p);
      GradedPoly<Zp> p0 = p - R->delta_poly(i) * p1;
      CHECK(R->act_fin(R->reflection_fin(i), p0) == p0);
      CHECK(R->act_fin(R->reflection_fin(i), p1) == p1);
    }
  }
}

TEST_CASE("fraction normalization") {
  auto W = WeylGroup::create("A1adj");
  auto R = validate_realization<Rat>(W, FieldSpec::rationals());
  GradedPoly<Rat> a = R->alpha(0);
  // alpha^2 / alpha -> alpha
  Frac<Rat> f(a * a, a);
  f.normalize_forms(*R);
  CHECK(f.is_polynomial());
  CHECK(f.as_polynomial() == a);
  // nondivisible numerator unchanged
  GradedPoly<Rat> unit = GradedPoly<Rat>::constant(1, Rat(1));
  Frac<Rat> g(a + unit, a);
  g.normalize_forms(*R);
  CHECK_FALSE(g.is_polynomial());
  CHECK(g.denominator_in_forms(*R));
  // 0 / alpha -> 0 with trivial denominator
  Frac<Rat> z(GradedPoly<Rat>(1), a);
  z.normalize_forms(*R);
  CHECK(z.is_zero());
  CHECK(z.is_polynomial());
  // exact associativity of fraction arithmetic
  Frac<Rat> x(unit, a), y(a + unit, a * a);
  CHECK((x * y) * g == x * (y * g));
  CHECK((x + y) + g == x + (y + g));
}
