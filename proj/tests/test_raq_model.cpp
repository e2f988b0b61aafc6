#include <doctest.h>

#include "raq/automaton.hpp"
#include "raq/nonzero.hpp"
#include "support.hpp"

using namespace raq;
using namespace raq::test;

TEST_SUITE("raq_model") {
  TEST_CASE("aggregate fixtures compute their aggregates") {
    Raq mn = load_fixture("min.raq"), second = load_fixture("second_largest.raq");
    Raq above = load_fixture("count_above.raq"), cmax = load_fixture("count_max.raq");
    std::mt19937 rng(21);
    for (int trial = 0; trial < 40; ++trial) {
      auto w = random_word(rng, uniform(rng, 0, 7), 3);
      CHECK(run(mn, w) == min_oracle(w));
      CHECK(run(second, w) == second_largest_oracle(w));
      CHECK(run(above, w) == count_above_oracle(w, 0));
      CHECK(run(cmax, w) == count_max_oracle(w));
    }
  }

  TEST_CASE("documented examples") {
    CHECK(run(load_fixture("min.raq"), {5, 2, 7}) == std::set<Rational>{2});
    CHECK(run(load_fixture("pcp_a13.raq"), {1, 2}) == std::set<Rational>{0});
    CHECK(run(load_fixture("sum.raq"), {Rational(1) / 2, 3}) == std::set<Rational>{Rational(7) / 2});
    CHECK(run(load_fixture("first_element.raq"), {4, 1, 9}) == std::set<Rational>{4});
  }

  TEST_CASE("nondeterministic runs collect every output") {
    Raq a = parse_raq(R"({
      "states": ["q0"], "initial": "q0", "finals": ["q0"], "k": 0, "l": 1,
      "transitions": [{"source": "q0", "target": "q0", "guard": true, "assign": {"y1": "y1 + cur"}},
                      {"source": "q0", "target": "q0", "guard": true}],
      "outputs": {"q0": "y1"}})");
    CHECK(run(a, {1, 2}) == std::set<Rational>{0, 1, 2, 3});
  }

  TEST_CASE("every fixture round-trips through the file format") {
    for (const char* name : {"min.raq", "second_largest.raq", "count_above.raq", "count_max.raq", "first_element.raq",
                             "sum.raq", "pcp_a13.raq", "reach/count_above_le.raq", "reach/cancelling_corner.raq",
                             "reach/min_minus_three.raq"}) {
      CAPTURE(name);
      Raq a = load_fixture(name);
      Raq b = parse_raq(serialize_raq(a));
      CHECK(same_automaton(a, b));
      CHECK(serialize_raq(b) == serialize_raq(a));
    }
    std::mt19937 rng(22);
    for (int trial = 0; trial < 40; ++trial) {
      Raq a = random_raq(rng);
      CHECK(same_automaton(a, parse_raq(serialize_raq(a))));
    }
  }

  TEST_CASE("classification of the fixtures") {
    Classification pcp = classify(load_fixture("pcp_a13.raq"));
    CHECK_FALSE(pcp.copyless);
    CHECK(pcp.non_strict);
    CHECK(pcp.deterministic);
    CHECK_FALSE(pcp.complete);
    Classification mn = classify(load_fixture("min.raq"));
    CHECK(mn.deterministic);
    CHECK(mn.complete);
    CHECK(mn.copyless);
    CHECK_FALSE(mn.non_strict);
    CHECK_FALSE(mn.read_only[0]);
    Classification above = classify(load_fixture("count_above.raq"));
    CHECK(above.read_only[0]);
    Classification le = classify(load_fixture("reach/count_above_le.raq"));
    CHECK_FALSE(le.deterministic);
    CHECK(le.non_strict);
  }

  TEST_CASE("moving constants into registers keeps every run") {
    std::mt19937 rng(23);
    for (int trial = 0; trial < 60; ++trial) {
      Raq a = random_raq(rng);
      Raq b = constants_to_registers(a);
      for (const auto& t : b.transitions) {
        std::set<Rational> cs;
        collect_constants(t.guard, cs);
        CHECK(cs.empty());
        CHECK(is_zero(t.update.data_offset));
      }
      for (int w = 0; w < 10; ++w) {
        auto word = random_word(rng, uniform(rng, 0, 4), 2);
        CHECK(run(a, word) == run(b, word));
      }
    }
  }

  TEST_CASE("single-output normalisation shifts outputs by one letter") {
    std::mt19937 rng(24);
    for (int trial = 0; trial < 60; ++trial) {
      Raq a = random_raq(rng);
      Raq b = normalize_single_output(a);
      CHECK(has_single_output(b));
      if (has_single_output(a)) {
        CHECK(same_automaton(a, b));
        continue;
      }
      for (int w = 0; w < 8; ++w) {
        auto word = random_word(rng, uniform(rng, 0, 4), 2);
        auto extended = word;
        extended.push_back(random_rational(rng));
        CHECK(run(b, extended) == run(a, word));
      }
    }
  }

  TEST_CASE("guard syntax") {
    std::vector<std::string> names{"x1", "x2"};
    Guard g = parse_guard("x1 >= cur > x2", names);
    CHECK(eval_guard(g, std::vector<Rational>{3, 1}, Rational(2)));
    CHECK(eval_guard(g, std::vector<Rational>{3, 1}, Rational(3)));
    CHECK_FALSE(eval_guard(g, std::vector<Rational>{3, 1}, Rational(1)));
    Guard h = parse_guard("!(cur = 1/2) || x1 != x2", names);
    CHECK(parse_guard(to_string(h, names), names) == h);
    CHECK_THROWS_AS(parse_guard("cur <=", names), UsageError);
    CHECK_THROWS_AS(parse_guard("z < cur", names), UsageError);
  }

  TEST_CASE("guard satisfiability agrees with sampling") {
    std::mt19937 rng(25);
    RandomRaqParams p;
    for (int trial = 0; trial < 150; ++trial) {
      Guard g = random_guard(rng, 2, p);
      bool sampled = false;
      std::vector<Rational> pool{-2, -1, Rational(-1) / 2, 0, Rational(1) / 2, 1, 2};
      for (const auto& x1 : pool)
        for (const auto& x2 : pool)
          for (const auto& c : pool) sampled = sampled || eval_guard(g, std::vector<Rational>{x1, x2}, c);
      // Constants are in {-1, 0, 1}, so the pool realises every order type.
      CHECK(guard_satisfiable(g) == sampled);
    }
  }

  TEST_CASE("file errors name the line") {
    std::string text = "{\n  \"states\": [\"q0\"],\n  \"initial\": \"q9\",\n  \"finals\": [],\n  \"k\": 0,\n  \"l\": 0,\n"
                       "  \"transitions\": [],\n  \"outputs\": {}\n}\n";
    try {
      parse_raq(text);
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() > 0);
    }
    try {
      parse_raq("{\"states\": [\"q0\"], \"initial\": \"q0\",\n \"finals\": [\"q0\"], \"k\": 1, \"l\": 0,\n"
                "\"transitions\": [{\"source\": \"q0\", \"target\": \"q0\", \"guard\": \"cur < z\"}],\n"
                "\"outputs\": {\"q0\": \"x1\"}}");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
    }
    CHECK_THROWS_AS(parse_raq("{ not json"), ParseError);
  }
}
