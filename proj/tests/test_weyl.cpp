#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "affkl/weyl.hpp"

using namespace affkl;

TEST_CASE("root data basics") {
  auto a1 = RootDatum::build("A1");
  CHECK(dot(a1->simple_root(0), a1->simple_coroot(0)) == 2);
  CHECK(a1->positive_roots().size() == 1);

  auto a2 = RootDatum::build("A2");
  CHECK(a2->cartan(0, 0) == 2);
  CHECK(a2->cartan(0, 1) == -1);
  CHECK(a2->cartan(1, 0) == -1);
  CHECK(a2->positive_roots().size() == 3);

  auto b2 = RootDatum::build("B2");
  CHECK(b2->positive_roots().size() == 4);
  // affine generator uses the maximal short root
  const auto& beta = b2->max_short_roots().at(0);
  CHECK(beta.root == IntVec{1, 0});

  auto g2 = RootDatum::build("G2");
  CHECK(g2->positive_roots().size() == 6);

  CHECK_THROWS_AS(RootDatum::build("E8"), std::invalid_argument);
}

TEST_CASE("finite Weyl enumeration") {
  CHECK(WeylGroup::create("A1")->finite().size() == 2);
  CHECK(WeylGroup::create("A2")->finite().size() == 6);
  CHECK(WeylGroup::create("B2")->finite().size() == 8);
  auto g2 = WeylGroup::create("G2");
  CHECK(g2->finite().size() == 12);
  // longest element of A2 has length 3
  auto a2 = WeylGroup::create("A2");
  CHECK(a2->finite().word(a2->finite().longest()).size() == 3);
  // lex-least reduced words: closed under multiplication, word recomputation agrees
  for (size_t id = 0; id < a2->finite().size(); ++id) {
    AffElem w = a2->finite_elem(id);
    auto word = a2->lex_word(w);
    std::vector<int> stored(a2->finite().word(id).begin(), a2->finite().word(id).end());
    CHECK(word == stored);
  }
}

TEST_CASE("group law in W") {
  auto W = WeylGroup::create("A1");
  IntVec alpha = W->datum()->simple_root(0);
  // t(a) t(b) = t(a+b)
  AffElem t1 = W->translation(alpha);
  CHECK(W->mult(t1, t1) == W->translation(vec_scale(alpha, 2)));
  // v t(l) v^{-1} = t(v(l))
  AffElem s = W->gen(0);
  AffElem conj = W->conjugate(s, t1);
  CHECK(conj == W->translation(vec_neg(alpha)));
  // oracle for (s t(alpha))^2 by direct composition: s t(a) s t(a) =
  // t(s(a)) t(a) = t(s(a) + a) = t(0) = e
  AffElem sta = W->mult(s, t1);
  CHECK(W->mult(sta, sta) == W->identity());
  // associativity on sampled triples and inverses
  auto ball = W->coxeter_ball(4);
  for (const auto& a : ball.elems)
    for (const auto& b : ball.elems) {
      CHECK(W->mult(W->mult(a, b), a) == W->mult(a, W->mult(b, a)));
      CHECK(W->mult(a, W->inverse(a)) == W->identity());
    }
}

TEST_CASE("length formula vs BFS word distance") {
  for (const char* label : {"A1", "A2", "GL2"}) {
    auto W = WeylGroup::create(label);
    long long bound = std::string(label) == "A2" ? 5 : 7;
    auto ball = W->coxeter_ball(bound);
    for (size_t i = 0; i < ball.elems.size(); ++i) {
      CHECK(W->length(ball.elems[i]) == ball.lengths[i]);
    }
    // omega parts do not change length
    for (const auto& om : W->omega_window(2)) {
      for (size_t i = 0; i < std::min<size_t>(ball.elems.size(), 20); ++i) {
        CHECK(W->length(W->mult(om, ball.elems[i])) == ball.lengths[i]);
        CHECK(W->length(W->mult(ball.elems[i], om)) == ball.lengths[i]);
      }
    }
  }
  // t(alpha) has length 2 in affine A1
  auto W = WeylGroup::create("A1");
  CHECK(W->length(W->translation(W->datum()->simple_root(0))) == 2);
}

TEST_CASE("simple reflections") {
  auto a1 = WeylGroup::create("A1");
  CHECK(a1->num_gens() == 2);
  for (size_t i = 0; i < a1->num_gens(); ++i) CHECK(a1->length(a1->gen(i)) == 1);
  auto a2 = WeylGroup::create("A2");
  CHECK(a2->num_gens() == 3);
  for (size_t i = 0; i < a2->num_gens(); ++i) CHECK(a2->length(a2->gen(i)) == 1);
  auto b2 = WeylGroup::create("B2");
  // affine generator t(beta) s_beta with beta the maximal short root
  AffElem aff = b2->gen(2);
  CHECK(b2->length(aff) == 1);
  const auto& beta = b2->datum()->max_short_roots()[0];
  AffElem expect = b2->mult(b2->translation(beta.root), [&] {
    // s_beta: conjugate of some simple; find by matrix equality through gens
    for (size_t id = 0; id < b2->finite().size(); ++id) {
      AffElem cand{id, IntVec(2, 0)};
      if (b2->mult(b2->translation(beta.root), cand) == aff) return cand;
    }
    return b2->identity();
  }());
  CHECK(expect == aff);
}

TEST_CASE("omega group") {
  // adjoint-style data with X* = root lattice: trivial Omega (G2)
  auto g2 = WeylGroup::create("G2");
  auto omg = g2->omega_window(2);
  CHECK(omg.size() == 1);
  CHECK(omg[0] == g2->identity());

  // A1 (simply connected side): Omega = Z/2
  auto a1 = WeylGroup::create("A1");
  auto oma = a1->omega_window(1);
  CHECK(oma.size() == 2);
  for (const auto& om : oma) {
    CHECK(a1->length(om) == 0);
    // conjugation permutes S
    for (size_t i = 0; i < a1->num_gens(); ++i)
      CHECK(a1->length(a1->conjugate(om, a1->gen(i))) == 1);
  }

  // GL2: infinite cyclic Omega; window contains nontrivial elements, closed
  // under products that stay in the window
  auto gl2 = WeylGroup::create("GL2");
  auto omw = gl2->omega_window(2);
  CHECK(omw.size() > 3);
  std::set<AffElem> inwin(omw.begin(), omw.end());
  for (const auto& a : omw)
    for (const auto& b : omw) {
      AffElem ab = gl2->mult(a, b);
      CHECK(gl2->length(ab) == 0);
      bool small = std::all_of(ab.lam.begin(), ab.lam.end(),
                               [](long long x) { return std::llabs(x) <= 2; });
      if (small) CHECK(inwin.count(ab) == 1);
    }
}

TEST_CASE("bruhat order") {
  auto W = WeylGroup::create("A1");
  auto ball = W->coxeter_ball(4);
  AffElem e = W->identity();
  AffElem s0s1s0 = W->from_word({0, 1, 0});
  CHECK(W->bruhat_leq(e, s0s1s0));
  CHECK(W->bruhat_leq(s0s1s0, s0s1s0));
  CHECK_FALSE(W->bruhat_leq(s0s1s0, W->gen(0)));
  // partial order properties on the ball
  for (const auto& a : ball.elems)
    for (const auto& b : ball.elems) {
      bool ab = W->bruhat_leq(a, b), ba = W->bruhat_leq(b, a);
      if (ab && ba) CHECK(a == b);
      if (ab)
        for (const auto& c : ball.elems)
          if (W->bruhat_leq(b, c)) CHECK(W->bruhat_leq(a, c));
    }
  // independence of the reduced word used for w
  auto a2 = WeylGroup::create("A2");
  auto ball2 = a2->coxeter_ball(5);
  for (size_t i = 0; i < ball2.elems.size(); ++i) {
    if (ball2.lengths[i] > 4) continue;
    auto words = a2->all_reduced_words(ball2.elems[i]);
    for (size_t j = 0; j < ball2.elems.size(); j += 7) {
      bool ref = a2->bruhat_leq_via_word(ball2.elems[j], words[0]);
      for (auto& w : words) CHECK(a2->bruhat_leq_via_word(ball2.elems[j], w) == ref);
    }
  }
  // distinct Omega cosets are incomparable
  auto gl2 = WeylGroup::create("GL2");
  AffElem om = gl2->omega_rep(gl2->datum()->class_coords(IntVec{1, 0}));
  CHECK_THROWS_AS((void)gl2->bruhat_leq(gl2->identity(), om), IncomparableError);
}

TEST_CASE("conjugation datum for affine reflections") {
  for (const char* label : {"A1", "A2", "GL2", "GL3", "B2", "G2"}) {
    auto W = WeylGroup::create(label);
    size_t aff = W->num_gens() - 1;
    auto [w, sp] = W->conjugation_datum(aff);
    AffElem s = W->gen(aff);
    CHECK(W->conjugate(w, W->gen(sp)) == s);
    CHECK(W->length(W->mult(w, W->gen(sp))) == W->length(w) + 1);
    // conjugating back
    CHECK(W->conjugate(W->inverse(w), s) == W->gen(sp));
  }
  // adjoint A1 datum genuinely lacks the required weight
  auto adj = WeylGroup::create("A1adj");
  CHECK_THROWS_AS((void)adj->conjugation_datum(1, 6), std::runtime_error);
}

TEST_CASE("serialization round trip") {
  for (const char* label : {"A1", "GL2"}) {
    auto W = WeylGroup::create(label);
    auto ball = W->coxeter_ball(4);
    for (const auto& om : W->omega_window(1))
      for (const auto& u : ball.elems) {
        AffElem w = W->mult(om, u);
        CHECK(W->parse(W->to_string(w)) == w);
      }
  }
}
