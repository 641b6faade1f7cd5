#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "affkl/decompose.hpp"

using namespace affkl;

namespace {

template <class K>
DecomposeSession<K> make_session(const char* label, FieldSpec field, uint64_t seed = 0) {
  auto W = WeylGroup::create(label);
  return DecomposeSession<K>(AbeContext<K>(validate_realization<K>(W, field)), seed);
}

}  // namespace

TEST_CASE("end0 dimensions") {
  auto s = make_session<Rat>("A1", FieldSpec::rationals());
  const auto& ctx = s.ctx();
  const auto& W = *ctx.group();
  // end0(F_w) is 1-dimensional
  auto fe = ctx.std_object(W.from_word({0, 1}), 0);
  CHECK(end0(ctx, fe).dimension() == 1);
  // end0(B_s) is 1-dimensional
  auto bs = ctx.bs_generator(0);
  auto alg = end0(ctx, bs);
  CHECK(alg.dimension() == 1);
  // end0(B_s * B_s) contains two orthogonal idempotents
  auto bb = ctx.tensor(bs, bs);
  auto alg2 = end0(ctx, bb);
  CHECK(alg2.dimension() >= 2);
  // (the two shifted copies also admit degree-2 cross maps)
  // the object is decomposable, so locality sampling must reject it, while
  // the indecomposable B_s passes
  auto rep = end0_locality(ctx, bb, alg2, 0);
  CHECK_FALSE(rep.local_split);
  auto rep1 = end0_locality(ctx, bs, alg, 0);
  CHECK(rep1.local_split);
}

TEST_CASE("split B_s and B_s * B_s") {
  auto s = make_session<Rat>("A1", FieldSpec::rationals());
  const auto& ctx = s.ctx();
  const auto& W = *ctx.group();
  // split(B_s) = [B_s]
  auto parts = s.split(ctx.bs_generator(0));
  REQUIRE(parts.size() == 1);
  CHECK(parts[0].label == W.gen(0));
  CHECK(parts[0].shift == 0);
  // split(B_s * B_s) = B_s(-1) + B_s(+1)
  auto parts2 = s.split(ctx.tensor(ctx.bs_generator(0), ctx.bs_generator(0)));
  REQUIRE(parts2.size() == 2);
  std::multiset<int> shifts{parts2[0].shift, parts2[1].shift};
  CHECK(shifts == std::multiset<int>{-1, 1});
  for (auto& p : parts2) CHECK(p.label == W.gen(0));
}

TEST_CASE("conjugated B_s splits to the affine generator") {
  auto s = make_session<Rat>("A1", FieldSpec::rationals());
  const auto& ctx = s.ctx();
  const auto& W = *ctx.group();
  size_t aff = W.num_gens() - 1;
  auto [w, sp] = W.conjugation_datum(aff);
  Flagged<Rat> m = ctx.tensor(ctx.tensor(ctx.std_object(w, 0), ctx.bs_generator(sp)),
                              ctx.std_object(W.inverse(w), 0));
  // override bookkeeping as in bs_generator: the character of this object is
  // the conjugated one
  m.ch = ctx.hecke().kl_gen(aff);
  m.ch_multiplicative = true;
  auto parts = s.split(std::move(m));
  REQUIRE(parts.size() == 1);
  CHECK(parts[0].label == W.gen(aff));
  // and it is isomorphic to the registry's B_{s_aff}
  const Flagged<Rat>& baff = s.indecomposable(W.gen(aff));
  auto maps = hom_graded(ctx, parts[0].object, baff, 0);
  bool invertible = false;
  for (auto& f : maps)
    if (invert_morphism(ctx, baff, f)) invertible = true;
  CHECK(invertible);
}

TEST_CASE("rationals-mode characters match classical KL (dihedral)") {
  auto s = make_session<Rat>("A1", FieldSpec::rationals());
  auto table = lkl_table(s, "A1", 4);
  HeckeContext H(s.ctx().group());
  for (const auto& w : table.elements) {
    HeckeElement b = H.kl_basis(w);
    for (const auto& y : table.elements) {
      CHECK(table.entry(y, w) == b.coeff(y));
    }
    // bar invariance of the computed character
    HeckeElement ch = s.character(w);
    CHECK(H.bar(ch) == ch);
  }
}

TEST_CASE("rationals-mode A2 table at small bound matches classical KL") {
  auto s = make_session<Rat>("A2", FieldSpec::rationals());
  auto table = lkl_table(s, "A2", 3);
  HeckeContext H(s.ctx().group());
  for (const auto& w : table.elements) {
    HeckeElement b = H.kl_basis(w);
    for (const auto& y : table.elements) CHECK(table.entry(y, w) == b.coeff(y));
  }
}

TEST_CASE("prime field table: A1 type at ell = 3") {
  auto s = make_session<Zp>("A1", FieldSpec::prime(3));
  auto table = lkl_table(s, "A1", 4);
  const auto& W = *s.ctx().group();
  HeckeContext H(s.ctx().group());
  for (const auto& w : table.elements) {
    // normalization and support triangularity
    CHECK(table.entry(w, w) == LaurentPoly::constant(1));
    for (const auto& y : table.elements) {
      LaurentPoly p = table.entry(y, w);
      if (!p.is_zero()) {
        CHECK(W.bruhat_leq(y, w));
        CHECK(p.nonneg_coeffs());
      }
    }
    HeckeElement ch = s.character(w);
    CHECK(H.bar(ch) == ch);
  }
}

TEST_CASE("GL2 at ell = 2: table exists and is bar invariant") {
  auto s = make_session<Zp>("GL2", FieldSpec::prime(2));
  auto table = lkl_table(s, "GL2", 3);
  HeckeContext H(s.ctx().group());
  for (const auto& w : table.elements) {
    CHECK(table.entry(w, w) == LaurentPoly::constant(1));
    HeckeElement ch = s.character(w);
    CHECK(H.bar(ch) == ch);
  }
}

TEST_CASE("reduced word independence") {
  auto s = make_session<Rat>("A2", FieldSpec::rationals());
  const auto& W = *s.ctx().group();
  auto ball = W.coxeter_ball(3);
  for (size_t i = 0; i < ball.elems.size(); ++i) {
    if (ball.lengths[i] < 2) continue;
    HeckeElement ref = s.character(ball.elems[i]);
    for (auto& word : W.all_reduced_words(ball.elems[i])) {
      CHECK(s.character_via_word(ball.elems[i], word) == ref);
    }
  }
}

TEST_CASE("tilting table") {
  auto s = make_session<Rat>("A1", FieldSpec::rationals());
  auto table = lkl_table(s, "A1", 3);
  auto tt = tilting_table(table);
  const auto& W = *s.ctx().group();
  AffElem w3 = W.from_word({0, 1, 0});
  for (const auto& y : table.elements) {
    long long expect = W.bruhat_leq(y, w3) ? 1 : 0;
    auto it = tt.find({y, w3});
    long long got = it == tt.end() ? 0 : it->second;
    CHECK(got == expect);
  }
  // diagonal ones and triangularity
  for (auto& [key, val] : tt) {
    if (key.first == key.second) CHECK(val == 1);
    CHECK(W.bruhat_leq(key.first, key.second));
  }
}

TEST_CASE("hom dimension check") {
  auto s = make_session<Rat>("A1", FieldSpec::rationals());
  const auto& W = *s.ctx().group();
  // (e, e): 1 = 1
  auto r = hom_dimension_check(s, W.identity(), W.identity());
  CHECK(r.equal);
  CHECK(r.rank == 1);
  // (s, s): 2 = 1^2 + 1^2
  auto r2 = hom_dimension_check(s, W.gen(0), W.gen(0));
  CHECK(r2.equal);
  CHECK(r2.rank == 2);
  // distinct generators share only z = e
  auto r3 = hom_dimension_check(s, W.gen(0), W.gen(1));
  CHECK(r3.equal);
  CHECK(r3.rank == 1);
  // length 2
  auto r4 = hom_dimension_check(s, W.from_word({0, 1}), W.from_word({0, 1}));
  CHECK(r4.equal);
}

TEST_CASE("symmetry under inversion") {
  auto s = make_session<Rat>("A2", FieldSpec::rationals());
  auto table = lkl_table(s, "A2", 3);
  const auto& W = *s.ctx().group();
  for (const auto& w : table.elements)
    for (const auto& y : table.elements)
      CHECK(table.entry(y, w) == table.entry(W.inverse(y), W.inverse(w)));
}

TEST_CASE("stratum parallel table equals serial table") {
  auto s1 = make_session<Rat>("A1", FieldSpec::rationals());
  auto s2 = make_session<Rat>("A1", FieldSpec::rationals());
  auto t1 = lkl_table(s1, "A1", 4, 1);
  auto t2 = lkl_table(s2, "A1", 4, 3);
  CHECK(t1.entries == t2.entries);
}
