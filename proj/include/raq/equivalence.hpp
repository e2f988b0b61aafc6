#pragma once

// Equivalence and commutativity of deterministic automata, both reduced to
// the non-zero problem on a product automaton.

#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "raq/automaton.hpp"
#include "raq/nonzero.hpp"

namespace raq {

// Adds a sink state reached under the negation of each state's guards. With
// sink_final_zero the sink is final with output 0. Automata that are already
// complete come back unchanged.
Raq complete(const Raq& a, bool sink_final_zero = false);

// States are the reachable pairs; a pair is final when either component is.
// The output is ζ1 - ζ2 when both are final and 1 otherwise.
Raq product_difference(const Raq& a1, const Raq& a2);

struct EquivVerdict {
  bool equivalent = false;
  std::optional<std::vector<Rational>> counterexample;
  std::optional<std::pair<std::set<Rational>, std::set<Rational>>> outputs;
  NonZeroStats stats;
};
// Both automata must be deterministic.
EquivVerdict equivalent(const Raq& a1, const Raq& a2);

// A(w) for |w| ≥ 2 and no output on shorter words.
Raq restrict_to_long_words(const Raq& a);

// Swap of the first two letters, and rotation of the first letter to the end.
std::vector<Rational> swap_first_two(std::span<const Rational> w);
std::vector<Rational> rotate_first_to_end(std::span<const Rational> w);

// A1(w) = A(π1(w)) and A2(w) = A(π2(w)) for |w| ≥ 2; no output on shorter
// words. Deterministic inputs give deterministic results.
Raq permute_pi1(const Raq& a);
Raq permute_pi2(const Raq& a);

struct CommutativityVerdict {
  bool commutative = false;
  std::optional<std::pair<std::vector<Rational>, std::vector<Rational>>> counterexample;
  std::optional<std::pair<std::set<Rational>, std::set<Rational>>> outputs;
  NonZeroStats stats;
};
// a must be deterministic.
CommutativityVerdict commutative(const Raq& a);

// Tries every word of length 2..max_len over `letters` (default: the
// representatives around the automaton's constants) against both generators
// of the symmetric group. Can only refute.
CommutativityVerdict commutative_brute(const Raq& a, std::size_t max_len, std::vector<Rational> letters = {});
std::vector<Rational> default_letters(const Raq& a);

}  // namespace raq
