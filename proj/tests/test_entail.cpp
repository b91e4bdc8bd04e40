#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "npr/entail.hpp"

using namespace npr;
using npr::testing::GridOracle;

namespace {

KnowledgeBase igor_a1() {
  return parse_kb("atoms D F; P(F | D) = 0.6; P(D) = 0.3;");
}

KnowledgeBase igor_a2() {
  return parse_kb("atoms D F; P(F | D) = 0.6; P(D) = 0.3; P(F | !D) = 0.2;");
}

// Independent check: smallest/largest q such that the rows stay feasible
// once P(X|Y) is clamped to that side, with P(Y) held barely positive.
double bisect_bound(const ConstraintSet& cs, const Conditional& q, bool lower) {
  const WorldTable& t = *cs.table;
  WorldSet given = satisfying_set(q.given, t);
  WorldSet both = satisfying_set(q.target, t) & given;
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 40; ++it) {
    double mid = 0.5 * (lo + hi);
    auto rows = cs.rows;
    lp::LinearConstraint clamp;
    clamp.coeffs.assign(t.world_count(), 0.0);
    for (size_t w = 0; w < t.world_count(); ++w) {
      if (both.test(w)) clamp.coeffs[w] += 1.0;
      if (given.test(w)) clamp.coeffs[w] -= mid;
    }
    clamp.rel = lower ? Rel::LE : Rel::GE;
    clamp.rhs = 0.0;
    rows.push_back(clamp);
    lp::LinearConstraint pos;
    pos.coeffs.assign(t.world_count(), 0.0);
    for (size_t w = 0; w < t.world_count(); ++w)
      if (given.test(w)) pos.coeffs[w] = 1.0;
    pos.rel = Rel::GE;
    pos.rhs = 1e-6;
    rows.push_back(pos);
    bool ok = lp::feasible(rows, static_cast<int>(t.world_count()));
    if (lower) {
      (ok ? hi : lo) = mid;
    } else {
      (ok ? lo : hi) = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("linearize: conditional and unconditional row shapes") {
  KnowledgeBase kb = parse_kb("atoms D F; P(F | D) >= 0.6; P(D) = 0.3;");
  WorldTable t(kb.atoms);
  auto r1 = linearize(kb.hard[0], t);
  CHECK(r1.rel == Rel::GE);
  CHECK(r1.rhs == 0.0);
  // world order (!D!F, D!F, !D F, D F)
  CHECK(r1.coeffs == std::vector<double>{0.0, -0.6, 0.0, 0.4});
  auto r2 = linearize(kb.hard[1], t);
  CHECK(r2.rel == Rel::EQ);
  CHECK(r2.rhs == doctest::Approx(0.3));
  CHECK(r2.coeffs == std::vector<double>{0.0, 1.0, 0.0, 1.0});
}

TEST_CASE("linearize: empty conditioning event yields a vacuous row") {
  KnowledgeBase kb = parse_kb("atoms A; P(A | A & !A) = 0.7;");
  WorldTable t(kb.atoms);
  auto r = linearize(kb.hard[0], t);
  for (double c : r.coeffs) CHECK(c == 0.0);
  CHECK(r.rhs == 0.0);
  ConstraintSet cs = assemble(kb, t);
  CHECK(consistent(cs));
}

TEST_CASE("consistent") {
  {
    KnowledgeBase kb = igor_a1();
    WorldTable t(kb.atoms);
    CHECK(consistent(assemble(kb, t)));
  }
  {
    KnowledgeBase kb = parse_kb("atoms A; P(A) = 0.3; P(A) = 0.5;");
    WorldTable t(kb.atoms);
    CHECK_FALSE(consistent(assemble(kb, t)));
  }
  {
    KnowledgeBase kb = parse_kb("atoms A B;");
    WorldTable t(kb.atoms);
    CHECK(consistent(assemble(kb, t)));
  }
}

TEST_CASE("bound: bar-fight bases") {
  {
    KnowledgeBase kb = igor_a1();
    WorldTable t(kb.atoms);
    ConstraintSet cs = assemble(kb, t);
    Bound b = bound(cs, Conditional{parse_sentence("F", kb.atoms)});
    REQUIRE(b.defined);
    CHECK(b.lower == doctest::Approx(0.18).epsilon(1e-9));
    CHECK(b.upper == doctest::Approx(0.88).epsilon(1e-9));
  }
  {
    KnowledgeBase kb = igor_a2();
    WorldTable t(kb.atoms);
    ConstraintSet cs = assemble(kb, t);
    Bound b = bound(cs, Conditional{parse_sentence("F", kb.atoms)});
    REQUIRE(b.defined);
    CHECK(b.lower == doctest::Approx(0.32).epsilon(1e-9));
    CHECK(b.upper == doctest::Approx(0.32).epsilon(1e-9));
  }
  {
    KnowledgeBase kb = parse_kb("atoms A;");
    WorldTable t(kb.atoms);
    Bound b = bound(assemble(kb, t), Conditional{parse_sentence("A", kb.atoms)});
    REQUIRE(b.defined);
    CHECK(b.lower == doctest::Approx(0.0));
    CHECK(b.upper == doctest::Approx(1.0));
  }
}

TEST_CASE("bound: undefined exactly when the given event cannot have mass") {
  KnowledgeBase kb = parse_kb("atoms A B; P(B) = 0;");
  WorldTable t(kb.atoms);
  ConstraintSet cs = assemble(kb, t);
  Bound b = bound(cs, Conditional{parse_sentence("A", kb.atoms),
                                  parse_sentence("B", kb.atoms)});
  CHECK_FALSE(b.defined);
  Bound ok = bound(cs, Conditional{parse_sentence("A", kb.atoms),
                                   parse_sentence("!B", kb.atoms)});
  CHECK(ok.defined);
}

TEST_CASE("entails_certain") {
  std::vector<Atom> atoms = {{"S"}, {"C"}, {"N"}, {"T"}};
  KnowledgeBase kb = parse_kb("atoms S C N T; P(S -> C) = 1;");
  WorldTable t(kb.atoms);
  ConstraintSet cs = assemble(kb, t);
  CHECK(entails_certain(cs, parse_sentence("N & T -> N", atoms)));
  CHECK(entails_certain(cs, parse_sentence("S -> C", atoms)));
  CHECK_FALSE(entails_certain(cs, parse_sentence("S", atoms)));
  KnowledgeBase empty = parse_kb("atoms A;");
  WorldTable te(empty.atoms);
  CHECK_FALSE(entails_certain(assemble(empty, te),
                              parse_sentence("A", empty.atoms)));
}

TEST_CASE("point_value") {
  KnowledgeBase kb = parse_kb("atoms L N T; P(L | N) = 0.1;");
  WorldTable t(kb.atoms);
  ConstraintSet cs = assemble(kb, t);
  auto v = point_value(cs, Conditional{parse_sentence("L", kb.atoms),
                                       parse_sentence("N", kb.atoms)});
  REQUIRE(v);
  CHECK(*v == doctest::Approx(0.1).epsilon(1e-7));
  auto none = point_value(cs, Conditional{parse_sentence("L", kb.atoms),
                                          parse_sentence("N & T", kb.atoms)});
  CHECK_FALSE(none);
  auto one = point_value(cs, Conditional{Sentence::truth(), Sentence::truth()});
  REQUIRE(one);
  CHECK(*one == doctest::Approx(1.0));
}

TEST_CASE("monotonicity: bounds nest when constraints are added") {
  std::mt19937 rng(21);
  for (int trial = 0; trial < 40; ++trial) {
    auto anchored = npr::testing::random_anchored_kb(rng, 3, 2);
    KnowledgeBase b1 = anchored.kb;
    KnowledgeBase b2 = b1;
    WorldTable t(b1.atoms);
    b2.hard.push_back(npr::testing::anchored_constraint(rng, b1.atoms, t,
                                                        anchored.anchor));
    ConstraintSet c1 = assemble(b1, t), c2 = assemble(b2, t);
    REQUIRE(consistent(c2));
    for (int qi = 0; qi < 5; ++qi) {
      Conditional q{npr::testing::random_sentence(rng, b1.atoms),
                    npr::testing::random_sentence(rng, b1.atoms)};
      Bound w1 = bound(c1, q);
      Bound w2 = bound(c2, q);
      if (!w1.defined) {
        CHECK_FALSE(w2.defined);
        continue;
      }
      if (!w2.defined) continue;
      CHECK(w2.lower >= w1.lower - 1e-6);
      CHECK(w2.upper <= w1.upper + 1e-6);
    }
  }
}

TEST_CASE("grid-oracle equivalence on small random KBs") {
  std::mt19937 rng(23);
  for (int trial = 0; trial < 15; ++trial) {
    auto anchored = npr::testing::random_anchored_kb(rng, 2, 2);
    WorldTable t(anchored.kb.atoms);
    ConstraintSet cs = assemble(anchored.kb, t);
    REQUIRE(consistent(cs));
    GridOracle oracle(cs.rows, t.world_count(), 50);
    for (int qi = 0; qi < 4; ++qi) {
      Conditional q{npr::testing::random_sentence(rng, anchored.kb.atoms),
                    qi % 2 ? Sentence::truth()
                           : npr::testing::random_sentence(rng, anchored.kb.atoms)};
      Bound lpb = bound(cs, q);
      auto gb = oracle.bound(satisfying_set(q.target, t) &
                                 satisfying_set(q.given, t),
                             satisfying_set(q.given, t));
      if (!lpb.defined || !gb.defined) continue;
      CHECK(std::abs(lpb.lower - gb.lower) <= 0.02);
      CHECK(std::abs(lpb.upper - gb.upper) <= 0.02);
    }
  }
}

TEST_CASE("bisection cross-check of the fractional transformation") {
  KnowledgeBase kb = igor_a1();
  WorldTable t(kb.atoms);
  ConstraintSet cs = assemble(kb, t);
  SUBCASE("unconditional") {
    Conditional q{parse_sentence("F", kb.atoms)};
    Bound b = bound(cs, q);
    CHECK(std::abs(b.lower - bisect_bound(cs, q, true)) <= 1e-5);
    CHECK(std::abs(b.upper - bisect_bound(cs, q, false)) <= 1e-5);
  }
  SUBCASE("conditional with positive given") {
    Conditional q{parse_sentence("F", kb.atoms), parse_sentence("D v F", kb.atoms)};
    Bound b = bound(cs, q);
    REQUIRE(b.defined);
    CHECK(std::abs(b.lower - bisect_bound(cs, q, true)) <= 1e-5);
    CHECK(std::abs(b.upper - bisect_bound(cs, q, false)) <= 1e-5);
  }
}

TEST_CASE("complement coherence") {
  std::mt19937 rng(27);
  for (int trial = 0; trial < 20; ++trial) {
    auto anchored = npr::testing::random_anchored_kb(rng, 3, 2);
    WorldTable t(anchored.kb.atoms);
    ConstraintSet cs = assemble(anchored.kb, t);
    Sentence x = npr::testing::random_sentence(rng, anchored.kb.atoms);
    Sentence y = npr::testing::random_sentence(rng, anchored.kb.atoms);
    Bound pos = bound(cs, Conditional{x, y});
    Bound neg = bound(cs, Conditional{Sentence::negate(x), y});
    CHECK(pos.defined == neg.defined);
    if (pos.defined) {
      CHECK(neg.lower == doctest::Approx(1.0 - pos.upper).epsilon(1e-6));
      CHECK(neg.upper == doctest::Approx(1.0 - pos.lower).epsilon(1e-6));
    }
  }
}

TEST_CASE("bound throws on an infeasible base") {
  KnowledgeBase kb = parse_kb("atoms A; P(A) = 0.3; P(A) = 0.5;");
  WorldTable t(kb.atoms);
  ConstraintSet cs = assemble(kb, t);
  CHECK_THROWS_AS(bound(cs, Conditional{parse_sentence("A", kb.atoms)}),
                  InconsistentBase);
}
