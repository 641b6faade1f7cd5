#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "affkl/abe_hom.hpp"
#include "affkl/abe_split.hpp"

using namespace affkl;

namespace {

template <class K>
AbeContext<K> make_ctx(const char* label, FieldSpec field) {
  auto W = WeylGroup::create(label);
  return AbeContext<K>(validate_realization<K>(W, field));
}

template <class K>
void check_polynomial_right_action(const AbeContext<K>& ctx, const Flagged<K>& m) {
  for (size_t v = 0; v < ctx.real()->nvars(); ++v) {
    auto var = GradedPoly<K>::variable(ctx.real()->nvars(), v, ctx.real()->one());
    CHECK_NOTHROW((void)ctx.right_action_matrix(m, var));
  }
}

}  // namespace

TEST_CASE("standard objects") {
  auto ctx = make_ctx<Rat>("A1", FieldSpec::rationals());
  const auto& W = *ctx.group();
  Flagged<Rat> fe = ctx.std_object(W.identity(), 0);
  CHECK(fe.rank() == 1);
  CHECK(fe.ch == HeckeElement::std_basis(W.identity()));
  // translation twist: single flag component at t(lambda)
  AffElem tl = W.translation(W.datum()->simple_root(0));
  Flagged<Rat> ft = ctx.std_object(tl, 0);
  CHECK(ft.lines.size() == 1);
  CHECK(ft.lines[0].w == tl);
  // grading shift
  Flagged<Rat> f3 = ctx.std_object(tl, 3);
  CHECK(f3.lat_deg[0] == -3);
  CHECK(ctx.shifted(ft, 3).lat_deg == f3.lat_deg);
  CHECK(ctx.shifted(ft, 3).ch == f3.ch);
  check_polynomial_right_action(ctx, ft);
}

TEST_CASE("B_s localization data") {
  auto ctx = make_ctx<Rat>("A1", FieldSpec::rationals());
  Flagged<Rat> bs = ctx.bs_generator(0);
  CHECK(bs.rank() == 2);
  CHECK(bs.lat_deg == std::vector<int>{-1, 1});
  // flag character b_s = H_s + v H_e
  CHECK(bs.ch == ctx.hecke().kl_gen(0));
  CHECK(bs.denominators_ok());
  check_polynomial_right_action(ctx, bs);
  // right action of delta on 1 (x) 1 lands on the second lattice vector
  GradedPoly<Rat> delta = ctx.real()->delta_poly(0);
  auto ad = ctx.right_action_matrix(bs, delta);
  CHECK(ad(1, 0) == ctx.one_poly());
  CHECK(ad(0, 0).is_zero());
}

TEST_CASE("affine B_s via conjugation") {
  for (const char* label : {"A1", "GL2"}) {
    auto ctx = make_ctx<Rat>(label, FieldSpec::rationals());
    const auto& W = *ctx.group();
    size_t aff = W.num_gens() - 1;
    Flagged<Rat> bs = ctx.bs_generator(aff);
    CHECK(bs.rank() == 2);
    CHECK(bs.ch == ctx.hecke().kl_gen(aff));
    // flag lines: e and the affine reflection
    std::multiset<std::string> labels;
    for (auto& l : bs.lines) labels.insert(W.to_string(l.w));
    CHECK(labels.count(W.to_string(W.identity())) == 1);
    CHECK(labels.count(W.to_string(W.gen(aff))) == 1);
    check_polynomial_right_action(ctx, bs);
    CHECK(bs.denominators_ok());
  }
}

TEST_CASE("tensor: units and F-group law") {
  auto ctx = make_ctx<Rat>("A1", FieldSpec::rationals());
  const auto& W = *ctx.group();
  AffElem s = W.gen(0);
  Flagged<Rat> fs = ctx.std_object(s, 0);
  Flagged<Rat> fsinv = ctx.std_object(W.inverse(s), 0);
  Flagged<Rat> prod = ctx.tensor(fs, fsinv);
  CHECK(prod.lines.size() == 1);
  CHECK(prod.lines[0].w == W.identity());
  // F_e * M = M up to equal data
  Flagged<Rat> bs = ctx.bs_generator(0);
  Flagged<Rat> ebs = ctx.tensor(ctx.std_object(W.identity(), 0), bs);
  CHECK(ebs.lat_deg == bs.lat_deg);
  CHECK(ebs.ch == bs.ch);
  CHECK(ebs.loc == bs.loc);
}

TEST_CASE("B_s * B_s flag data") {
  auto ctx = make_ctx<Rat>("A1", FieldSpec::rationals());
  const auto& W = *ctx.group();
  Flagged<Rat> bs = ctx.bs_generator(0);
  Flagged<Rat> bb = ctx.tensor(bs, bs);
  CHECK(bb.rank() == 4);
  // flag multiset {e, e, s, s} with shifts realizing (v + v^{-1}) b_s
  auto fm = bb.flag_multiset();
  std::multiset<std::pair<std::string, int>> got;
  for (auto& [w, k] : fm) got.insert({W.to_string(w), k});
  std::multiset<std::pair<std::string, int>> expect{
      {W.to_string(W.identity()), 0},
      {W.to_string(W.identity()), 2},
      {W.to_string(W.gen(0)), 1},
      {W.to_string(W.gen(0)), -1}};
  CHECK(got == expect);
  check_polynomial_right_action(ctx, bb);
  CHECK(bb.denominators_ok());
}

TEST_CASE("hom spaces: dimensions") {
  auto ctx = make_ctx<Rat>("A1", FieldSpec::rationals());
  const auto& W = *ctx.group();
  Flagged<Rat> fe = ctx.std_object(W.identity(), 0);
  // End^0(F_e) is one dimensional
  auto endfe = hom_graded(ctx, fe, fe, 0);
  CHECK(endfe.size() == 1);
  // distinct group elements admit no morphisms in any degree
  Flagged<Rat> fs = ctx.std_object(W.gen(0), 0);
  for (int d = -4; d <= 4; d += 2) CHECK(hom_graded(ctx, fe, fs, d).empty());
  // End^0(B_s) is one dimensional (indecomposable)
  Flagged<Rat> bs = ctx.bs_generator(0);
  auto endbs = hom_graded(ctx, bs, bs, 0);
  CHECK(endbs.size() == 1);
  // Hom^bullet(B_s, B_s) has total rank 2 over R
  auto rep = hom_total_rank(ctx, bs, bs);
  CHECK(rep.rank == 2);
  CHECK(rep.complete);
  // composition closes
  auto one = hom_graded(ctx, bs, bs, 2);
  for (auto& f : one) {
    Morphism<Rat> ff = compose(f, endbs[0]);
    CHECK(ff.deg == 2);
  }
}

TEST_CASE("hom spaces over small prime fields") {
  auto ctx = make_ctx<Zp>("GL2", FieldSpec::prime(2));
  Flagged<Zp> bs = ctx.bs_generator(0);
  CHECK(hom_graded(ctx, bs, bs, 0).size() == 1);
  auto rep = hom_total_rank(ctx, bs, bs);
  CHECK(rep.rank == 2);
  CHECK(rep.complete);
}

TEST_CASE("exactness witnesses for B_s") {
  auto ctx = make_ctx<Rat>("A1", FieldSpec::rationals());
  const auto& W = *ctx.group();
  Flagged<Rat> bs = ctx.bs_generator(0);
  // first sequence: F-unit twist into B_s, then onto the s-twist
  Flagged<Rat> sub = ctx.std_object(W.identity(), -1);
  Flagged<Rat> quot = ctx.std_object(W.gen(0), 1);
  auto incs = hom_graded(ctx, sub, bs, 0);
  auto prjs = hom_graded(ctx, bs, quot, 0);
  REQUIRE(incs.size() == 1);
  REQUIRE(prjs.size() == 1);
  Morphism<Rat> comp = compose(prjs[0], incs[0]);
  for (size_t i = 0; i < comp.mat.rows(); ++i)
    for (size_t j = 0; j < comp.mat.cols(); ++j) CHECK(comp.mat(i, j).is_zero());
  // the surjection has rank 1, so its kernel has rank 1 over R
  size_t rank = 0;
  for (size_t j = 0; j < prjs[0].mat.cols(); ++j)
    if (!prjs[0].mat(0, j).is_zero()) { rank = 1; break; }
  CHECK(rank == 1);
  CHECK(bs.rank() - rank == 1);
  // second sequence with the roles of e and s swapped
  Flagged<Rat> sub2 = ctx.std_object(W.gen(0), -1);
  Flagged<Rat> quot2 = ctx.std_object(W.identity(), 1);
  auto incs2 = hom_graded(ctx, sub2, bs, 0);
  auto prjs2 = hom_graded(ctx, bs, quot2, 0);
  REQUIRE(incs2.size() == 1);
  REQUIRE(prjs2.size() == 1);
  Morphism<Rat> comp2 = compose(prjs2[0], incs2[0]);
  for (size_t i = 0; i < comp2.mat.rows(); ++i)
    for (size_t j = 0; j < comp2.mat.cols(); ++j) CHECK(comp2.mat(i, j).is_zero());
}

TEST_CASE("switch duality") {
  auto ctx = make_ctx<Rat>("A1", FieldSpec::rationals());
  const auto& W = *ctx.group();
  // switch(F_w) = F_{w^{-1}}
  AffElem w = W.from_word({0, 1});
  Flagged<Rat> fw = ctx.std_object(w, 0);
  Flagged<Rat> sw = switch_object(ctx, fw);
  CHECK(sw.lines[0].w == W.inverse(w));
  // switch(B_s) = B_s: invertible degree-0 morphism exists both ways
  Flagged<Rat> bs = ctx.bs_generator(0);
  Flagged<Rat> sbs = switch_object(ctx, bs);
  CHECK(sbs.ch == bs.ch);
  auto maps = hom_graded(ctx, sbs, bs, 0);
  REQUIRE(maps.size() == 1);
  CHECK(invert_morphism(ctx, bs, maps[0]).has_value());
  // switch is involutive up to isomorphism
  Flagged<Rat> ssbs = switch_object(ctx, sbs);
  auto maps2 = hom_graded(ctx, ssbs, bs, 0);
  REQUIRE(maps2.size() == 1);
  CHECK(invert_morphism(ctx, bs, maps2[0]).has_value());
  // hom dimension invariance under simultaneous switch
  Flagged<Rat> bb = ctx.tensor(bs, bs);
  Flagged<Rat> sbb = switch_object(ctx, bb);
  for (int d : {-2, 0, 2})
    CHECK(hom_graded(ctx, bb, bs, d).size() == hom_graded(ctx, sbb, sbs, d).size());
}

TEST_CASE("switch reverses tensor products") {
  auto ctx = make_ctx<Rat>("A1", FieldSpec::rationals());
  Flagged<Rat> b0 = ctx.bs_generator(0), b1 = ctx.bs_generator(1);
  Flagged<Rat> mn = ctx.tensor(b0, b1);
  Flagged<Rat> smn = switch_object(ctx, mn);
  Flagged<Rat> rev = ctx.tensor(switch_object(ctx, b1), switch_object(ctx, b0));
  CHECK(smn.ch == rev.ch);
  auto maps = hom_graded(ctx, smn, rev, 0);
  bool found = false;
  for (auto& f : maps)
    if (invert_morphism(ctx, rev, f)) { found = true; break; }
  CHECK(found);
}

TEST_CASE("tensor associativity with invertible comparison") {
  auto ctx = make_ctx<Rat>("A1", FieldSpec::rationals());
  Flagged<Rat> b0 = ctx.bs_generator(0), b1 = ctx.bs_generator(1);
  Flagged<Rat> left = ctx.tensor(ctx.tensor(b0, b1), b0);
  Flagged<Rat> right = ctx.tensor(b0, ctx.tensor(b1, b0));
  CHECK(left.lat_deg == right.lat_deg);
  CHECK(left.ch == right.ch);
  auto maps = hom_graded(ctx, left, right, 0);
  bool found = false;
  for (auto& f : maps)
    if (invert_morphism(ctx, right, f)) { found = true; break; }
  CHECK(found);
}

TEST_CASE("flag multiset of Bott-Samelson objects matches subword products") {
  auto ctx = make_ctx<Rat>("A2", FieldSpec::rationals());
  const auto& W = *ctx.group();
  std::vector<int> word{0, 1, 2};
  Flagged<Rat> m = ctx.std_object(W.identity(), 0);
  for (int i : word) m = ctx.tensor(m, ctx.bs_generator((size_t)i));
  std::multiset<std::string> flag_elems;
  for (auto& [w, k] : m.flag_multiset()) flag_elems.insert(W.to_string(w));
  std::multiset<std::string> expect;
  for (int mask = 0; mask < 8; ++mask) {
    AffElem x = W.identity();
    for (size_t t = 0; t < word.size(); ++t)
      if (mask & (1 << t)) x = W.mult(x, W.gen((size_t)word[t]));
    expect.insert(W.to_string(x));
  }
  CHECK(flag_elems == expect);
}
