#pragma once

// The non-zero problem: does some word make the automaton output a value
// other than 0? Decided by translating to an affine program over the
// orderings of the control variables and running Karr's fixpoint, with a
// bounded brute-force search and the copyless procedure as alternatives.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "raq/affine_program.hpp"
#include "raq/automaton.hpp"
#include "raq/ordering.hpp"

namespace raq {

// AP state (q, φ): φ is a total preorder on X ∪ {cur}, cur being element k.
struct OrderedApState {
  std::string state;
  Preorder ordering;
};

// Value substituted for cur on an AP transition: coeffs·x + constant.
struct CurSubstitution {
  QVector coeffs;
  Rational constant;
};

struct ApTranslation {
  AffineProgram program;
  QVector u0;
  // Per AP state; empty for the entry state that fans out to every
  // ordering of u0 extended with a position for cur.
  std::vector<std::optional<OrderedApState>> origin;
  std::vector<int> raq_transition;  // per AP transition, -1 on entry edges
  std::vector<CurSubstitution> substitution;
};

// Guards must be constant-free (see constants_to_registers). Only orderings
// reachable in the ordering abstraction get an AP state.
ApTranslation raq_to_ap(const Raq& a);

struct NonZeroStats {
  std::size_t ap_states = 0;
  std::size_t ap_transitions = 0;
  std::size_t explored = 0;             // configurations or abstract states visited
  std::map<int, std::size_t> hull_dims;  // hull dimension -> number of AP states
};

struct NonZeroVerdict {
  bool answer = false;
  std::optional<std::vector<Rational>> witness;
  std::string method;
  std::size_t bound_used = 0;
  NonZeroStats stats;
};

// |Q|(k+l+1)·2^k·(k+1)!, saturating at SIZE_MAX.
std::size_t small_model_bound_raq(const Raq& a);

NonZeroVerdict nonzero_exptime(const Raq& a);

struct BruteOptions {
  std::size_t cap = 2'000'000;  // distinct configurations
};
// Breadth-first search over words of length ≤ max_len whose letters are the
// finitely many representatives relative to the stored control values.
// Finds a shortest witness.
NonZeroVerdict nonzero_brute(const Raq& a, std::size_t max_len, const BruteOptions& options = {});

// Letters worth trying next given the current control values.
std::vector<Rational> candidate_letters(std::span<const Rational> control);

struct CopylessOptions {
  std::size_t max_depth = 0;  // 0: use small_model_bound_raq
  std::size_t cap = 2'000'000;
};
// Requires a copyless data update on every transition.
NonZeroVerdict nonzero_copyless(const Raq& a, const CopylessOptions& options = {});

// Is some configuration reachable at `state` outside h? Decided through the
// reduction to the non-zero problem; a witness ends in such a configuration.
NonZeroVerdict invariant_raq(const Raq& a, const std::string& state, const QAffineSpace& h);
Raq invariant_to_nonzero(const Raq& a, const std::string& state, const QAffineSpace& h);

struct InvariantInstance {
  Raq automaton;
  std::string state;
  QAffineSpace space;
};
// Non-zero holds for a iff the instance's invariant is violated.
InvariantInstance nonzero_to_invariant(const Raq& a);

// run(a, w) contains a nonzero value.
bool is_nonzero_witness(const Raq& a, std::span<const Rational> w);

}  // namespace raq
