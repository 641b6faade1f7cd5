#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "affkl/hecke.hpp"

using namespace affkl;

namespace {
LaurentPoly V(int e) { return LaurentPoly::v_pow(e); }
}

TEST_CASE("quadratic relation and braid case") {
  auto W = WeylGroup::create("A1");
  HeckeContext H(W);
  AffElem s = W->gen(0);
  // H_s H_s = H_e + (v^{-1} - v) H_s
  HeckeElement hs = HeckeElement::std_basis(s);
  HeckeElement sq = H.multiply(hs, hs);
  CHECK(sq.coeff(W->identity()) == LaurentPoly::constant(1));
  CHECK(sq.coeff(s) == V(-1) - V(1));
  // braid case: l(sw) > l(w) gives H_{sw}
  AffElem s1 = W->gen(1);
  HeckeElement prod = H.multiply(hs, HeckeElement::std_basis(s1));
  CHECK(prod == HeckeElement::std_basis(W->mult(s, s1)));
}

TEST_CASE("omega terms multiply without deformation") {
  auto W = WeylGroup::create("GL2");
  HeckeContext H(W);
  AffElem om = W->omega_rep(W->datum()->class_coords(IntVec{1, 0}));
  HeckeElement a = HeckeElement::std_basis(om);
  HeckeElement b = HeckeElement::std_basis(W->inverse(om));
  CHECK(H.multiply(a, b) == H.unit());
  // H_omega H_w = H_{omega w} on a sample
  AffElem w = W->from_word({0, 1});
  CHECK(H.multiply(a, HeckeElement::std_basis(w)) ==
        HeckeElement::std_basis(W->mult(om, w)));
}

TEST_CASE("bar involution") {
  auto W = WeylGroup::create("A1");
  HeckeContext H(W);
  AffElem s = W->gen(0);
  // bar(v H_e) = v^{-1} H_e
  HeckeElement ve = V(1) * H.unit();
  CHECK(H.bar(ve) == V(-1) * H.unit());
  // bar(H_s) = H_s + (v - v^{-1}) H_e
  HeckeElement bs = H.bar(HeckeElement::std_basis(s));
  CHECK(bs.coeff(s) == LaurentPoly::constant(1));
  CHECK(bs.coeff(W->identity()) == V(1) - V(-1));
  // involutivity on standard basis elements of small length
  auto ball = W->coxeter_ball(4);
  for (const auto& w : ball.elems) {
    HeckeElement h = HeckeElement::std_basis(w);
    CHECK(H.bar(H.bar(h)) == h);
  }
}

TEST_CASE("KL basis") {
  auto W = WeylGroup::create("A1");
  HeckeContext H(W);
  CHECK(H.kl_basis(W->identity()) == H.unit());
  // b_s = H_s + v H_e
  for (size_t i = 0; i < 2; ++i) {
    HeckeElement b = H.kl_basis(W->gen(i));
    CHECK(b.coeff(W->gen(i)) == LaurentPoly::constant(1));
    CHECK(b.coeff(W->identity()) == V(1));
  }
  // b_s b_s = (v + v^{-1}) b_s
  HeckeElement b0 = H.kl_basis(W->gen(0));
  CHECK(H.multiply(b0, b0) == (V(1) + V(-1)) * b0);
  // dihedral: b_w = sum_{y <= w} v^{l(w)-l(y)} H_y
  auto ball = W->coxeter_ball(6);
  for (size_t i = 0; i < ball.elems.size(); ++i) {
    HeckeElement b = H.kl_basis(ball.elems[i]);
    for (size_t j = 0; j < ball.elems.size(); ++j) {
      LaurentPoly c = b.coeff(ball.elems[j]);
      bool leq = W->bruhat_leq(ball.elems[j], ball.elems[i]);
      if (leq)
        CHECK(c == V((int)(ball.lengths[i] - ball.lengths[j])));
      else
        CHECK(c.is_zero());
    }
    // bar invariance and positivity
    CHECK(H.bar(b) == b);
    for (auto& [y, c] : b.terms()) CHECK(c.nonneg_coeffs());
  }
}

TEST_CASE("KL basis in affine A2 is bar invariant with positive coefficients") {
  auto W = WeylGroup::create("A2");
  HeckeContext H(W);
  auto ball = W->coxeter_ball(4);
  for (const auto& w : ball.elems) {
    HeckeElement b = H.kl_basis(w);
    CHECK(H.bar(b) == b);
    CHECK(b.coeff(w) == LaurentPoly::constant(1));
    for (auto& [y, c] : b.terms()) {
      CHECK(c.nonneg_coeffs());
      if (y != w) {
        CHECK(W->bruhat_leq(y, w));
        CHECK(c.coeff(0) == 0);
        CHECK(c.min_exp() >= 1);
      }
    }
  }
}

TEST_CASE("KL basis respects omega twisting") {
  auto W = WeylGroup::create("GL2");
  HeckeContext H(W);
  AffElem om = W->omega_rep(W->datum()->class_coords(IntVec{1, 0}));
  AffElem w = W->from_word({0, 1, 0});
  HeckeElement bw = H.kl_basis(w);
  HeckeElement bo = H.kl_basis(W->mult(om, w));
  CHECK(bo == H.left_omega(om, bw));
  CHECK(H.bar(bo) == bo);
}
