#pragma once

// Existential Presburger queries over the transition counts of a finite
// graph: linear constraints, flow balance, connectivity of the used
// transitions (via distance variables), and one disjunctive target.

#include <optional>
#include <string>
#include <vector>

#include "raq/ilp.hpp"

namespace raq {

// The used transitions must form a path from `initial` to `final` (with
// repeated cycles). distance_var[s] is the variable witnessing that state s
// is reached from `initial`.
struct FlowNetwork {
  struct Edge {
    int source;
    int target;
    int var;
  };
  int states = 0;
  int initial = 0;
  int final = 0;
  std::vector<Edge> edges;
  std::vector<int> distance_var;
};

struct PresburgerQuery {
  std::vector<std::string> names;               // every variable is an integer
  std::vector<LinearConstraint> constraints;    // conjunction
  std::vector<std::vector<std::vector<LinearConstraint>>> disjunctions;  // each: one alternative holds
  std::optional<FlowNetwork> network;           // flow and connectivity over count variables

  int add_variable(std::string name);
};

// Flow balance of the network as linear constraints (family "flow") plus
// non-negativity of every variable (family "nonneg").
void add_flow_constraints(PresburgerQuery& q);

struct Nfa {
  int states = 0;
  int initial = 0;
  int final = 0;
  std::vector<std::pair<int, int>> transitions;  // (source, target)
};
// Satisfied exactly by the Parikh images (count per transition) of the paths
// from initial to final. Count variables are 0..|transitions|-1.
PresburgerQuery parikh_formula(const Nfa& a);

// Checks an assignment of all variables, distances included, literally.
bool holds_literally(const PresburgerQuery& q, const std::vector<Integer>& values);
// Checks the count variables only; distances are existentially quantified and
// decided by a search from the initial state over the used transitions.
bool holds_for_counts(const PresburgerQuery& q, const std::vector<Integer>& values);
// Fills the distance variables of a count assignment by breadth-first search
// (unreached states get 0).
std::vector<Integer> with_distances(const PresburgerQuery& q, std::vector<Integer> values);

// QF_LIA script with one named assertion per constraint family.
std::string to_smtlib(const PresburgerQuery& q);

struct QuerySolution {
  bool sat = false;
  std::vector<Integer> values;  // distances filled in when sat
  std::size_t nodes = 0;
};
// Branch-and-bound over each disjunct combination; connectivity is enforced
// by lazy cuts on integral points. Throws ResourceError past the node cap.
QuerySolution solve_query(const PresburgerQuery& q, const IlpOptions& options = {});

}  // namespace raq
