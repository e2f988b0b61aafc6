#include <doctest.h>

#include "raq/affine_program.hpp"
#include "support.hpp"

using namespace raq;
using namespace raq::test;

namespace {

std::optional<QAffineSpace> hull_of(const std::set<QVector, VectorLess>& points) {
  if (points.empty()) return std::nullopt;
  QAffineSpace s = QAffineSpace::point(*points.begin());
  for (const auto& v : points) s.extend(v);
  return s;
}

}  // namespace

TEST_SUITE("affine_program") {
  TEST_CASE("hull of a counter program") {
    AffineProgram p;
    p.n = 2;
    p.add_state("s");
    QAffineMap inc = QAffineMap::identity(2);
    inc.offset = qvector({1, 2});
    p.transitions.push_back({0, inc, 0});
    KarrResult r = karr(p, qvector({0, 0}));
    REQUIRE(r.hull[0]);
    CHECK(r.hull[0]->dim() == 1);
    CHECK(r.hull[0]->contains(qvector({5, 10})));
    CHECK_FALSE(r.hull[0]->contains(qvector({1, 1})));
    CHECK(r.generators[0].size() == 2);
  }

  TEST_CASE("Karr's hull equals the hull of short paths") {
    std::mt19937 rng(31);
    int exact = 0;
    for (int trial = 0; trial < 120; ++trial) {
      auto [p, u0] = random_ap(rng);
      KarrResult r = karr(p, u0);
      std::size_t bound = small_model_bound_ap(p);
      std::vector<std::set<QVector, VectorLess>> brute;
      bool complete = true;
      try {
        brute = brute_reachable(p, u0, bound, {20'000});
      } catch (const ResourceError&) {
        complete = false;
        brute = brute_reachable(p, u0, 4, {200'000});
      }
      for (std::size_t s = 0; s < p.states.size(); ++s) {
        CAPTURE(trial);
        CAPTURE(s);
        auto h = hull_of(brute[s]);
        CHECK(h.has_value() == r.hull[s].has_value());
        if (!h || !r.hull[s]) continue;
        CHECK(r.hull[s]->includes(*h));
        if (complete) CHECK(*h == *r.hull[s]);
      }
      exact += complete;
    }
    CHECK(exact >= 60);
  }

  TEST_CASE("generators are bounded, span the hull and replay along their provenance") {
    std::mt19937 rng(32);
    for (int trial = 0; trial < 120; ++trial) {
      auto [p, u0] = random_ap(rng);
      KarrResult r = karr(p, u0);
      for (std::size_t s = 0; s < p.states.size(); ++s) {
        const auto& gens = r.generators[s];
        CHECK(gens.size() <= static_cast<std::size_t>(p.n) + 1);
        if (!r.hull[s]) {
          CHECK(gens.empty());
          continue;
        }
        REQUIRE_FALSE(gens.empty());
        CHECK(QAffineSpace::from_points(std::span<const QVector>(gens)) == *r.hull[s]);
        for (std::size_t g = 0; g < gens.size(); ++g) {
          auto path = r.path_to(p, static_cast<int>(s), static_cast<int>(g));
          QVector v = u0;
          int at = p.initial;
          for (int t : path) {
            REQUIRE(p.transitions[t].source == at);
            v = p.transitions[t].map(v);
            at = p.transitions[t].target;
          }
          CHECK(at == static_cast<int>(s));
          CHECK(same_entries(v, gens[g]));
        }
      }
    }
  }

  TEST_CASE("invariant check agrees with the hull") {
    std::mt19937 rng(33);
    for (int trial = 0; trial < 80; ++trial) {
      auto [p, u0] = random_ap(rng);
      KarrResult r = karr(p, u0);
      for (std::size_t s = 0; s < p.states.size(); ++s) {
        QAffineSpace h = QAffineSpace::point(u0);
        if (coin(rng)) h.extend(QVector(QVector::Unit(p.n, 0) + u0));
        bool expected = !r.hull[s] || h.includes(*r.hull[s]);
        CHECK(invariant_holds(p, u0, static_cast<int>(s), h) == expected);
        CHECK(invariant_holds(p, u0, static_cast<int>(s), QAffineSpace::full(p.n)));
      }
    }
  }

  TEST_CASE("unreachable states have no hull") {
    AffineProgram p;
    p.n = 1;
    p.add_state("a");
    p.add_state("b");
    KarrResult r = karr(p, qvector({1}));
    CHECK(r.hull[0]);
    CHECK_FALSE(r.hull[1]);
  }
}
