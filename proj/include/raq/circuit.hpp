#pragma once

// Division-free arithmetic circuits without indeterminates, and their
// compilation into automata whose only possible output is the circuit value.

#include <string>
#include <string_view>
#include <vector>

#include "raq/automaton.hpp"

namespace raq {

struct CircuitNode {
  enum class Kind { constant, plus, minus, times };
  std::string id;
  Kind kind = Kind::constant;
  Integer value;  // constants only
};

// Edge from `from` into `to`; every internal node has one left and one right
// incoming edge.
struct CircuitEdge {
  std::string from;
  std::string to;
  bool left = true;
};

struct Circuit {
  std::vector<CircuitNode> nodes;
  std::vector<CircuitEdge> edges;
  std::string output;

  int node_index(const std::string& id) const;  // throws UsageError when unknown
  // Throws UsageError unless ids are unique, constants have no incoming
  // edges, internal nodes have exactly one left and one right incoming edge,
  // the graph is acyclic and `output` is the only node without outgoing edges.
  void validate() const;
  std::size_t constant_count() const;
};

Integer eval_circuit(const Circuit& c);

// Rewrites u = a - b as u = a + (b × (-1)).
Circuit desugar_minus(const Circuit& c);

// Control variables x_e and z_e for every edge (constant nodes carry a
// self-loop edge), plus two read-only registers holding 0 and 1 that the
// updates copy from. One state per node plus a final state.
Raq compile_ac(const Circuit& c);

// Follows the automaton with the letter 0 until a final configuration is
// reached and returns its output. Throws std::logic_error when no final
// configuration is found within max_steps.
Rational evaluate_compiled(const Raq& a, std::size_t max_steps = 10'000'000);

// Outputs p^n on every word of length n and nothing on other words:
// ⌈log2 n⌉ bits count down from n - 1 while y, starting at p, is multiplied
// by p. Two extra read-only registers hold 0 and 1.
Raq build_power_raq(const Integer& p, unsigned n);

Circuit parse_circuit(std::string_view text);
Circuit load_circuit(const std::string& path);
std::string serialize_circuit(const Circuit& c);

}  // namespace raq
