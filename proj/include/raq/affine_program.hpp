#pragma once

// Affine programs: finite graphs whose edges carry affine maps on Q^n, and
// Karr's fixpoint computing the affine hull of the reachable vectors at each
// state.

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "raq/exactq.hpp"

namespace raq {

struct ApTransition {
  int source = 0;
  QAffineMap map;
  int target = 0;
};

struct AffineProgram {
  std::vector<std::string> states;
  int initial = 0;
  int n = 0;
  std::vector<ApTransition> transitions;

  int add_state(std::string name);
  int state_index(const std::string& name) const;  // throws when unknown
  std::vector<std::vector<int>> outgoing() const;
  void validate() const;
};

// How a generator was found: the transition taken and the generator of the
// transition's source state it was applied to. The seed u0 has transition -1.
struct Provenance {
  int transition = -1;
  int parent = -1;
};

struct KarrResult {
  std::vector<std::optional<QAffineSpace>> hull;  // empty optional: unreachable
  std::vector<std::vector<QVector>> generators;   // at most n+1 per state
  std::vector<std::vector<Provenance>> provenance;
  std::size_t applications = 0;                   // transition images computed

  // Transitions leading from the initial state to generator g of state s.
  std::vector<int> path_to(const AffineProgram& p, int s, int g) const;
};

KarrResult karr(const AffineProgram& p, const QVector& u0);

// V_P(state) ⊆ h
bool invariant_holds(const AffineProgram& p, const QVector& u0, int state, const QAffineSpace& h);

// (n+1)·|S|
std::size_t small_model_bound_ap(const AffineProgram& p);

struct BruteReachOptions {
  std::size_t cap = 200'000;  // distinct (state, vector) pairs
};
// All vectors reachable along paths of length ≤ max_len, per state.
std::vector<std::set<QVector, VectorLess>> brute_reachable(const AffineProgram& p, const QVector& u0,
                                                           std::size_t max_len,
                                                           const BruteReachOptions& options = {});

}  // namespace raq
