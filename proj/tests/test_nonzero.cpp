#include <doctest.h>

#include "raq/fixtures.hpp"
#include "raq/nonzero.hpp"
#include "support.hpp"

using namespace raq;
using namespace raq::test;

namespace {

// Shortest n with a nonzero output on 0^n, by running the automaton itself.
std::optional<std::size_t> shortest_constant_word(const Raq& a, std::size_t limit) {
  std::vector<Rational> w;
  for (std::size_t n = 0; n <= limit; ++n) {
    if (is_nonzero_witness(a, w)) return n;
    w.push_back(0);
  }
  return std::nullopt;
}

}  // namespace

TEST_SUITE("decision_nonzero") {
  TEST_CASE("small-model bound formula") {
    Raq mn = load_fixture("min.raq");
    // |Q|(k+l+1)·2^k·(k+1)! = 2·2·2·2
    CHECK(small_model_bound_raq(mn) == 16);
    Raq sum = load_fixture("sum.raq");
    CHECK(small_model_bound_raq(sum) == 2);
  }

  TEST_CASE("fixtures with nonzero outputs") {
    for (const char* name : {"min.raq", "sum.raq", "pcp_a13.raq", "count_above.raq", "second_largest.raq"}) {
      CAPTURE(name);
      Raq a = load_fixture(name);
      NonZeroVerdict v = nonzero_exptime(a);
      CHECK(v.answer);
      REQUIRE(v.witness);
      CHECK(is_nonzero_witness(a, *v.witness));
      NonZeroVerdict b = nonzero_brute(a, 6);
      CHECK(b.answer);
      REQUIRE(b.witness);
      CHECK(is_nonzero_witness(a, *b.witness));
      CHECK(b.witness->size() <= v.witness->size());
    }
  }

  TEST_CASE("always-zero corpus") {
    for (const auto& [why, a] : always_zero_instances()) {
      CAPTURE(why);
      CHECK_FALSE(nonzero_exptime(a).answer);
      Raq r = constants_to_registers(a);
      NonZeroVerdict b = nonzero_brute(r, small_model_bound_raq(r));
      CHECK_FALSE(b.answer);
      if (classify(a).copyless) CHECK_FALSE(nonzero_copyless(a).answer);
    }
  }

  TEST_CASE("exptime procedure against brute force on random automata") {
    std::mt19937 rng(41);
    int positives = 0, negatives = 0, exact = 0;
    for (int trial = 0; trial < 150; ++trial) {
      Raq a = random_raq(rng);
      CAPTURE(serialize_raq(a));
      NonZeroVerdict v = nonzero_exptime(a);
      if (v.answer) {
        REQUIRE(v.witness);
        CHECK(is_nonzero_witness(a, *v.witness));
      }
      Raq r = constants_to_registers(a);
      try {
        NonZeroVerdict b = nonzero_brute(r, small_model_bound_raq(r), {30'000});
        CHECK(b.answer == v.answer);
        ++exact;
      } catch (const ResourceError&) {
        NonZeroVerdict b = nonzero_brute(a, 3, {200'000});
        if (b.answer) CHECK(v.answer);
      }
      (v.answer ? positives : negatives)++;
    }
    CHECK(positives > 0);
    CHECK(negatives > 0);
    CHECK(exact > 0);
  }

  TEST_CASE("copyless procedure agrees on copyless automata") {
    std::mt19937 rng(42);
    RandomRaqParams p;
    p.copyless = true;
    int compared = 0;
    for (int trial = 0; trial < 120; ++trial) {
      Raq a = random_raq(rng, p);
      CAPTURE(serialize_raq(a));
      REQUIRE(classify(a).copyless);
      NonZeroVerdict v = nonzero_exptime(a);
      try {
        NonZeroVerdict c = nonzero_copyless(a, {0, 100'000});
        CHECK(c.answer == v.answer);
        if (c.witness) CHECK(is_nonzero_witness(a, *c.witness));
        ++compared;
      } catch (const ResourceError&) {
      }
    }
    CHECK(compared >= 60);
  }

  TEST_CASE("copyless procedure rejects copying updates") {
    CHECK_THROWS_AS(nonzero_copyless(load_fixture("pcp_a13.raq")), UsageError);
  }

  TEST_CASE("invariant and non-zero reduce to each other") {
    std::mt19937 rng(43);
    for (int trial = 0; trial < 60; ++trial) {
      Raq a = random_raq(rng);
      bool nonzero = nonzero_exptime(a).answer;
      InvariantInstance inst = nonzero_to_invariant(a);
      NonZeroVerdict violated = invariant_raq(inst.automaton, inst.state, inst.space);
      CHECK(violated.answer == nonzero);
      if (violated.witness) {
        std::vector<Configuration> frontier{initial_configuration(inst.automaton)};
        for (const auto& d : *violated.witness) {
          std::vector<Configuration> next;
          for (const auto& c : frontier)
            for (auto& c2 : step(inst.automaton, c, d)) next.push_back(std::move(c2));
          frontier = std::move(next);
        }
        bool outside = std::any_of(frontier.begin(), frontier.end(), [&](const Configuration& c) {
          return c.state == inst.state && !inst.space.contains(c.values);
        });
        CHECK(outside);
      }
    }
  }

  TEST_CASE("invariant of the sum fixture") {
    Raq sum = load_fixture("sum.raq");
    QAffineSpace origin = QAffineSpace::point(qvector({0}));
    CHECK(invariant_raq(sum, "q", origin).answer);
    CHECK_FALSE(invariant_raq(sum, "q", QAffineSpace::full(1)).answer);
  }

  TEST_CASE("counter family witnesses grow with the counter") {
    for (int k = 0; k <= 2; ++k)
      for (int l = 1; l <= 2; ++l)
        for (int n = 0; n <= 1; ++n) {
          CAPTURE(k);
          CAPTURE(l);
          CAPTURE(n);
          Raq a = tightness_raq(k, l, n);
          auto expected = shortest_constant_word(a, 64);
          REQUIRE(expected);
          NonZeroVerdict b = nonzero_brute(a, 64);
          REQUIRE(b.witness);
          CHECK(b.witness->size() == *expected);
          CHECK(nonzero_exptime(a).answer);
        }
  }
}
