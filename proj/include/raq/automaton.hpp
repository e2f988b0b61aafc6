#pragma once

// Register automata over the rationals: control variables X that may only
// copy values and take part in guards, data variables Y updated by affine
// maps, and a linear output function on each final state.

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "raq/exactq.hpp"
#include "raq/guard.hpp"

namespace raq {

// Control part: new x_i is old x_{control_source[i]}, or cur when the source
// equals k. Data part: new y = B (x, y, cur) + b with B of size l × (k+l+1).
struct Reassignment {
  std::vector<int> control_source;
  QMatrix data_matrix;
  QVector data_offset;

  static Reassignment identity(int k, int l);
  // The k × (k+1) 0-1 matrix form of control_source.
  QMatrix control_matrix() const;
  bool operator==(const Reassignment&) const;
};

struct Transition {
  std::string source;
  Guard guard = Guard::top();
  std::string target;
  Reassignment update;
  bool operator==(const Transition&) const = default;
};

// ζ(x, y) = a·x + b·y + c
struct OutputFunction {
  QVector control_coeffs;
  QVector data_coeffs;
  Rational constant;

  static OutputFunction zero(int k, int l);
  Rational operator()(const QVector& values) const;  // values = (x, y)
  bool operator==(const OutputFunction&) const;
};

struct Raq {
  std::vector<std::string> states;
  std::string initial;
  std::vector<std::string> finals;
  int k = 0;
  int l = 0;
  QVector initial_values;  // (x, y), length k + l
  std::vector<Transition> transitions;
  std::map<std::string, OutputFunction> outputs;  // one per final state
  std::vector<std::string> control_names;         // optional display aliases
  std::vector<std::string> data_names;

  int n() const { return k + l; }
  bool is_final(const std::string& q) const;
  int state_index(const std::string& q) const;  // throws when unknown
  // Indices into `transitions`, grouped by source state index.
  std::vector<std::vector<int>> outgoing() const;
  std::vector<std::string> control_labels() const;  // aliases or x1..xk
  std::string describe(int transition) const;       // "#i source -> target"

  // Throws UsageError describing the first structural problem found.
  void validate() const;
};

struct Configuration {
  std::string state;
  QVector values;

  bool operator<(const Configuration& o) const;
  bool operator==(const Configuration& o) const;
};

Configuration initial_configuration(const Raq& a);
// New values after firing `update` on `values` with input `cur` (guard not checked).
QVector apply_update(const Reassignment& update, int k, const QVector& values, const Rational& cur);
std::vector<Configuration> step(const Raq& a, const Configuration& c, const Rational& cur);

struct RunOptions {
  std::size_t frontier_cap = 1'000'000;
};
// Output set A(w); throws ResourceError past the frontier cap.
std::set<Rational> run(const Raq& a, std::span<const Rational> word, const RunOptions& options = {});
std::set<Rational> run(const Raq& a, std::initializer_list<Rational> word);

struct Classification {
  bool deterministic = false;
  bool complete = false;
  bool copyless = false;
  bool non_strict = false;
  std::vector<bool> read_only;  // per control variable
};
Classification classify(const Raq& a);

// Index of the first transition whose data update is not copyless, if any.
std::optional<int> first_non_copyless(const Raq& a);
// Index of the first transition whose guard uses negation or a strict atom.
std::optional<int> first_strict(const Raq& a);

// One fresh final state whose output is y1; every old final state q gets a
// transition (q, true) → q_f writing ζ(q) into y1. The new transition consumes
// one letter, so the result outputs A(w) on every word w·d.
Raq normalize_single_output(const Raq& a);
bool has_single_output(const Raq& a);

// Every constant in a guard or a nonzero data offset becomes a fresh
// read-only control variable holding it (one per distinct value). Runs are
// unchanged.
Raq constants_to_registers(const Raq& a);

// Automata are built and compared structurally; this renames states by
// prefixing them, keeping everything else.
Raq prefix_states(const Raq& a, const std::string& prefix);

// Append control or data variables (initial value given), padding matrices.
Raq add_control_variables(const Raq& a, std::span<const Rational> initial, std::span<const std::string> names = {});
Raq add_data_variables(const Raq& a, std::span<const Rational> initial, std::span<const std::string> names = {});

}  // namespace raq
