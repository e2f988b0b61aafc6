#pragma once

// Zero-reachability for copyless automata with non-strict guards: A(w) ∋ 0
// for some word w. The automaton is refined so that each state knows the
// order of its control values; a rational VASS then follows two corner points
// of the polyhedron of inputs along a path and accumulates the output at both.
// Zero is reachable iff some path has one corner with output ≤ 0 and the
// other with output ≥ 0. The path condition becomes an existential Presburger
// query over transition counts.

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "raq/automaton.hpp"
#include "raq/ordering.hpp"
#include "raq/presburger.hpp"

namespace raq {

// A finite rational or ±∞.
struct ExtendedRational {
  enum class Tag { neg_infinity, finite, pos_infinity };
  Tag tag = Tag::finite;
  Rational value;

  static ExtendedRational neg_infinity() { return {Tag::neg_infinity, Rational(0)}; }
  static ExtendedRational pos_infinity() { return {Tag::pos_infinity, Rational(0)}; }
  static ExtendedRational finite(Rational v) { return {Tag::finite, std::move(v)}; }

  bool operator<(const ExtendedRational& o) const {
    if (tag != o.tag) return tag < o.tag;
    return value < o.value;
  }
  bool operator==(const ExtendedRational&) const = default;
};
std::string to_string(const ExtendedRational& v);

// finite + neg·(−∞) + pos·(+∞), where all −∞ of one corner stand for one
// common value below every constant and all +∞ for one above.
struct Symbolic {
  Rational finite, neg, pos;

  static Symbolic of(const ExtendedRational& v, const Rational& coeff);
  Symbolic& operator+=(const Symbolic& o);
  bool operator==(const Symbolic&) const = default;
  bool has_infinity() const { return neg != 0 || pos != 0; }
};
std::string to_string(const Symbolic& s);

// Shape of a normalised guard over the classes z_1 < ... < z_m of the
// source preorder (indices 0-based): cur = z_c, cur ≤ z_1, z_c ≤ cur ≤ z_{c+1},
// or z_m ≤ cur.
enum class GuardForm { equal, below, between, above };

struct ReachNormalization {
  Raq automaton;                       // registers appended after the original control variables
  int original_k = 0;
  std::vector<Rational> constants;     // register original_k + i holds constants[i]
  std::vector<Preorder> preorder;      // order of the control values in each state
  std::vector<int> origin_state;       // original state index per state
  std::vector<int> origin_transition;  // original transition index per transition
  std::vector<GuardForm> form;
  std::vector<int> form_class;
};

// Requires a copyless automaton with non-strict guards (UsageError naming the
// first offending transition otherwise). Every constant of the guards and of
// the initial control values, and 0, gets a read-only register; each state is
// paired with the preorder of the control values and each guard is replaced by
// the closure of one placement of cur relative to that preorder. The result
// has the same output on every word.
ReachNormalization normalize_for_reach(const Raq& a);

struct QvassTransition {
  int source = 0;
  std::array<Symbolic, 2> update;
  int target = 0;
  int automaton_transition = -1;  // normalised transition, -1 for start and end
};

// Dimension 2: the output accumulated at each of the two corners.
struct Qvass {
  std::vector<std::string> states;
  int initial = 0;
  int final = 0;
  std::vector<QvassTransition> transitions;
  Rational c_min, c_max;           // least and greatest register constant
  std::size_t explored_states = 0;  // before pruning states that cannot reach final
};

struct QvassOptions {
  std::size_t state_cap = 200000;
};
Qvass build_qvass(const ReachNormalization& n, const QvassOptions& options = {});

// Count variable i belongs to Q-VASS transition i; then one distance variable
// per state. The target is (C1 ≤ 0 ≤ C2) ∨ (C2 ≤ 0 ≤ C1), with each side
// split by the sign of its infinite parts.
PresburgerQuery reach_query(const Qvass& v);

struct ReachOptions {
  std::size_t node_cap = 20000;
  std::size_t state_cap = 200000;
};

struct ReachStats {
  std::size_t normalized_states = 0;
  std::size_t normalized_transitions = 0;
  std::size_t qvass_states = 0;
  std::size_t qvass_transitions = 0;
  std::size_t query_variables = 0;
  std::size_t solver_nodes = 0;
};

struct ReachVerdict {
  bool reachable = false;
  // Count of each Q-VASS transition on an accepted path, keyed by a readable label.
  std::optional<std::map<std::string, Integer>> certificate;
  std::vector<Integer> model;  // full assignment of the query when reachable
  ReachStats stats;
};

struct ReachPipeline {
  ReachNormalization normalization;
  Qvass qvass;
  PresburgerQuery query;
};
ReachPipeline reach_pipeline(const Raq& a, const ReachOptions& options = {});
ReachVerdict reach_zero(const Raq& a, const ReachOptions& options = {});

std::string transition_label(const Qvass& v, const ReachNormalization& n, int t);

}  // namespace raq
