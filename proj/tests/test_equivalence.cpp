#include <doctest.h>

#include "raq/equivalence.hpp"
#include "support.hpp"

using namespace raq;
using namespace raq::test;

namespace {

Raq random_deterministic(std::mt19937& rng) {
  for (;;) {
    Raq a = random_raq(rng);
    if (classify(a).deterministic) return a;
  }
}

bool is_permutation_of(std::vector<Rational> a, std::vector<Rational> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

}  // namespace

TEST_SUITE("decision_equiv") {
  TEST_CASE("commutativity of the aggregate fixtures") {
    for (std::string name : {"min.raq", "sum.raq", "count_above.raq", "count_max.raq"}) {
      CAPTURE(name);
      CHECK(commutative(load_fixture(name)).commutative);
    }
    Raq first = load_fixture("first_element.raq");
    CommutativityVerdict v = commutative(first);
    CHECK_FALSE(v.commutative);
    REQUIRE(v.counterexample);
    const auto& [w1, w2] = *v.counterexample;
    CHECK(is_permutation_of(w1, w2));
    CHECK(run(first, w1) != run(first, w2));
    REQUIRE(v.outputs);
    CHECK(v.outputs->first == run(first, w1));
    CHECK(v.outputs->second == run(first, w2));
  }

  TEST_CASE("equivalence of fixtures") {
    Raq mn = load_fixture("min.raq"), first = load_fixture("first_element.raq");
    CHECK(equivalent(mn, mn).equivalent);
    CHECK(equivalent(mn, parse_raq(serialize_raq(mn))).equivalent);
    EquivVerdict v = equivalent(mn, first);
    CHECK_FALSE(v.equivalent);
    REQUIRE(v.counterexample);
    CHECK(run(mn, *v.counterexample) != run(first, *v.counterexample));
    CHECK_THROWS_AS(equivalent(mn, load_fixture("reach/count_above_le.raq")), UsageError);
  }

  TEST_CASE("product difference of an automaton with itself is zero") {
    std::mt19937 rng(51);
    for (int trial = 0; trial < 40; ++trial) {
      Raq a = complete(random_deterministic(rng));
      Raq d = product_difference(a, a);
      for (int s = 0; s < 10; ++s) {
        auto w = random_word(rng, uniform(rng, 0, 5), 2);
        auto out = run(d, w);
        CHECK(out == (run(a, w).empty() ? std::set<Rational>{} : std::set<Rational>{0}));
      }
    }
  }

  TEST_CASE("completion keeps outputs and adds no new ones") {
    std::mt19937 rng(52);
    for (int trial = 0; trial < 40; ++trial) {
      Raq a = random_deterministic(rng);
      Raq c = complete(a);
      CHECK(classify(c).complete);
      Raq z = complete(a, true);
      for (int s = 0; s < 10; ++s) {
        auto w = random_word(rng, uniform(rng, 0, 4), 2);
        auto expected = run(a, w);
        CHECK(run(c, w) == expected);
        auto with_sink = run(z, w);
        CHECK((with_sink == expected || (expected.empty() && with_sink == std::set<Rational>{0})));
      }
    }
  }

  TEST_CASE("letter permutations match their definition exhaustively") {
    std::mt19937 rng(53);
    std::vector<Raq> cases{load_fixture("first_element.raq"), load_fixture("count_max.raq")};
    for (int i = 0; i < 8; ++i) cases.push_back(random_deterministic(rng));
    for (const Raq& a : cases) {
      Raq p1 = permute_pi1(a), p2 = permute_pi2(a);
      CHECK(classify(p1).deterministic);
      CHECK(classify(p2).deterministic);
      auto letters = default_letters(a);
      if (letters.size() > 5) letters.resize(5);
      for (std::size_t len = 0; len <= 4; ++len)
        for_each_word(letters, len, [&](const std::vector<Rational>& w) {
          if (w.size() < 2) {
            CHECK(run(p1, w).empty());
            CHECK(run(p2, w).empty());
            return;
          }
          CHECK(run(p1, w) == run(a, swap_first_two(w)));
          CHECK(run(p2, w) == run(a, rotate_first_to_end(w)));
        });
    }
  }

  TEST_CASE("permutation helpers") {
    std::vector<Rational> w{1, 2, 3};
    CHECK(swap_first_two(w) == std::vector<Rational>{2, 1, 3});
    CHECK(rotate_first_to_end(w) == std::vector<Rational>{2, 3, 1});
  }

  TEST_CASE("decisions against word enumeration on random automata") {
    std::mt19937 rng(54);
    int refuted = 0;
    for (int trial = 0; trial < 60; ++trial) {
      Raq a = random_deterministic(rng);
      CAPTURE(serialize_raq(a));
      CommutativityVerdict c = commutative(a);
      CommutativityVerdict brute = commutative_brute(a, 4);
      if (!brute.commutative) CHECK_FALSE(c.commutative);
      if (!c.commutative) {
        REQUIRE(c.counterexample);
        CHECK(is_permutation_of(c.counterexample->first, c.counterexample->second));
        CHECK(run(a, c.counterexample->first) != run(a, c.counterexample->second));
        ++refuted;
      }
    }
    CHECK(refuted > 0);
  }

  TEST_CASE("equivalence against sampling on random pairs") {
    std::mt19937 rng(55);
    int equal = 0, differ = 0;
    for (int trial = 0; trial < 60; ++trial) {
      Raq a = random_deterministic(rng);
      Raq b = coin(rng) ? a : random_deterministic(rng);
      EquivVerdict v = equivalent(a, b);
      if (v.equivalent) {
        ++equal;
        for (int s = 0; s < 20; ++s) {
          auto w = random_word(rng, uniform(rng, 0, 4), 2);
          CHECK(run(a, w) == run(b, w));
        }
      } else {
        ++differ;
        REQUIRE(v.counterexample);
        CHECK(run(a, *v.counterexample) != run(b, *v.counterexample));
      }
    }
    CHECK(equal > 0);
    CHECK(differ > 0);
  }
}
