#pragma once

// Oracles, random generators and fixture helpers shared by the unit tests and
// the acceptance binary.

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "raq/affine_program.hpp"
#include "raq/automaton.hpp"
#include "raq/circuit.hpp"
#include "raq/io.hpp"
#include "raq/presburger.hpp"

namespace raq::test {

inline std::string fixture(const std::string& name) { return std::string(FIXTURE_DIR) + "/" + name; }
inline Raq load_fixture(const std::string& name) { return load_raq(fixture(name)); }

inline bool same_automaton(const Raq& a, const Raq& b) {
  if (a.states != b.states || a.initial != b.initial || a.finals != b.finals || a.k != b.k || a.l != b.l) return false;
  if (!same_entries(a.initial_values, b.initial_values)) return false;
  return a.transitions == b.transitions && a.outputs == b.outputs;
}

inline int uniform(std::mt19937& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
inline bool coin(std::mt19937& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

// Rationals with small numerators and denominators, so repeats are common.
inline Rational random_rational(std::mt19937& rng, int range = 6) {
  int den = uniform(rng, 1, 3);
  return Rational(uniform(rng, -range * den, range * den)) / den;
}

inline std::vector<Rational> random_word(std::mt19937& rng, std::size_t len, int range = 6) {
  std::vector<Rational> w;
  for (std::size_t i = 0; i < len; ++i) w.push_back(random_rational(rng, range));
  return w;
}

// Direct computations of the aggregate fixtures.
inline std::set<Rational> min_oracle(const std::vector<Rational>& w) {
  if (w.empty()) return {};
  return {*std::min_element(w.begin(), w.end())};
}

inline std::set<Rational> second_largest_oracle(std::vector<Rational> w) {
  if (w.size() < 2) return {};
  std::sort(w.begin(), w.end(), std::greater<>());
  return {w[1]};
}

inline std::set<Rational> count_above_oracle(const std::vector<Rational>& w, const Rational& m) {
  return {Rational(std::count_if(w.begin(), w.end(), [&](const Rational& d) { return d > m; }))};
}

inline std::set<Rational> count_max_oracle(const std::vector<Rational>& w) {
  if (w.empty()) return {};
  Rational m = *std::max_element(w.begin(), w.end());
  return {Rational(std::count(w.begin(), w.end(), m))};
}

// Every word of exactly `len` letters over `letters`.
inline void for_each_word(const std::vector<Rational>& letters, std::size_t len,
                          const std::function<void(const std::vector<Rational>&)>& f) {
  std::vector<std::size_t> idx(len, 0);
  std::vector<Rational> w(len);
  for (;;) {
    for (std::size_t i = 0; i < len; ++i) w[i] = letters[idx[i]];
    f(w);
    std::size_t i = 0;
    while (i < len && ++idx[i] == letters.size()) idx[i++] = 0;
    if (i == len) return;
  }
}

struct RandomRaqParams {
  int max_k = 2;
  int max_l = 2;
  int max_states = 4;
  bool copyless = false;
  bool non_strict = false;
  bool guard_constants = true;
};

inline Operand random_operand(std::mt19937& rng, int k, bool constants) {
  int choice = uniform(rng, 0, k + (constants ? 1 : 0));
  if (choice < k) return Operand::x(choice);
  if (choice == k) return Operand::current();
  return Operand::constant(Rational(uniform(rng, -1, 1)));
}

inline Guard random_atom(std::mt19937& rng, int k, const RandomRaqParams& p) {
  Operand a = random_operand(rng, k, p.guard_constants);
  Operand b = random_operand(rng, k, p.guard_constants);
  int kind = uniform(rng, 0, p.non_strict ? 1 : 2);
  if (kind == 0) return Guard::le(a, b);
  if (kind == 1) return Guard::eq(a, b);
  return Guard::lt(a, b);
}

inline Guard random_guard(std::mt19937& rng, int k, const RandomRaqParams& p) {
  if (coin(rng, 0.3)) return Guard::top();
  Guard g = random_atom(rng, k, p);
  if (coin(rng, 0.3)) g = coin(rng) ? Guard::conj({g, random_atom(rng, k, p)}) : Guard::disj({g, random_atom(rng, k, p)});
  if (!p.non_strict && coin(rng, 0.15)) g = Guard::negate(g);
  return g;
}

inline Raq random_raq(std::mt19937& rng, const RandomRaqParams& p = {}) {
  Raq a;
  a.k = uniform(rng, 0, p.max_k);
  a.l = uniform(rng, p.copyless ? 0 : 1, p.max_l);
  int m = uniform(rng, 1, p.max_states);
  for (int i = 0; i < m; ++i) a.states.push_back("q" + std::to_string(i));
  a.initial = "q0";
  for (const auto& s : a.states)
    if (coin(rng, 0.4)) a.finals.push_back(s);
  if (a.finals.empty()) a.finals.push_back(a.states[uniform(rng, 0, m - 1)]);
  a.initial_values = QVector::Zero(a.k + a.l);
  for (int i = 0; i < a.k + a.l; ++i) a.initial_values[i] = uniform(rng, -1, 1);
  int count = uniform(rng, 1, 4);
  for (int t = 0; t < count; ++t) {
    Transition tr{a.states[uniform(rng, 0, m - 1)], random_guard(rng, a.k, p), a.states[uniform(rng, 0, m - 1)],
                  Reassignment::identity(a.k, a.l)};
    for (int i = 0; i < a.k; ++i) {
      int c = uniform(rng, 0, 9);
      if (c < 3) tr.update.control_source[i] = a.k;
      else if (c == 3) tr.update.control_source[i] = uniform(rng, 0, a.k - 1);
    }
    QMatrix& b = tr.update.data_matrix;
    std::vector<int> sources(a.l);
    for (int j = 0; j < a.l; ++j) sources[j] = j;
    std::shuffle(sources.begin(), sources.end(), rng);
    for (int r = 0; r < a.l; ++r) {
      if (p.copyless) {
        b.row(r).segment(a.k, a.l).setZero();
        if (coin(rng, 0.8)) b(r, a.k + sources[r]) = 1;
      } else {
        for (int j = 0; j < a.l; ++j)
          if (coin(rng, 0.3)) b(r, a.k + j) = uniform(rng, -1, 2);
      }
      for (int i = 0; i < a.k; ++i)
        if (coin(rng, 0.25)) b(r, i) = uniform(rng, -1, 1);
      if (coin(rng, 0.35)) b(r, a.k + a.l) = uniform(rng, -1, 2);
      if (coin(rng, 0.25)) tr.update.data_offset[r] = uniform(rng, -1, 1);
    }
    a.transitions.push_back(std::move(tr));
  }
  for (const auto& f : a.finals) {
    OutputFunction z = OutputFunction::zero(a.k, a.l);
    for (int i = 0; i < a.k; ++i)
      if (coin(rng, 0.3)) z.control_coeffs[i] = uniform(rng, -1, 1);
    for (int j = 0; j < a.l; ++j)
      if (coin(rng, 0.6)) z.data_coeffs[j] = uniform(rng, -1, 2);
    if (coin(rng, 0.2)) z.constant = uniform(rng, -1, 1);
    a.outputs[f] = z;
  }
  a.validate();
  return a;
}

// Automata whose output is 0 on every word, each for a different reason.
inline std::vector<std::pair<std::string, Raq>> always_zero_instances() {
  auto parse = [](const std::string& text) { return parse_raq(text); };
  std::vector<std::pair<std::string, Raq>> out;
  out.emplace_back("constant zero output", parse(R"({
    "states": ["q0"], "initial": "q0", "finals": ["q0"], "k": 1, "l": 1, "u0": [3, 0],
    "transitions": [{"source": "q0", "target": "q0", "guard": "cur <= x1", "assign": {"y1": "x1 + 1"}}],
    "outputs": {"q0": "0"}})"));
  out.emplace_back("unreachable final", parse(R"({
    "states": ["q0", "q1"], "initial": "q0", "finals": ["q1"], "k": 1, "l": 1, "u0": [2, 1],
    "transitions": [{"source": "q0", "target": "q0", "guard": "cur = x1", "assign": {"y1": "2*y1"}},
                    {"source": "q0", "target": "q1", "guard": "cur < x1 && cur > x1"}],
    "outputs": {"q1": "y1"}})"));
  out.emplace_back("data never written", parse(R"({
    "states": ["q0", "q1"], "initial": "q0", "finals": ["q1"], "k": 0, "l": 2,
    "transitions": [{"source": "q0", "target": "q1", "guard": true, "assign": {"y2": "y2 + cur"}},
                    {"source": "q1", "target": "q1", "guard": true}],
    "outputs": {"q1": "y1"}})"));
  out.emplace_back("equal stored inputs", parse(R"({
    "states": ["q0", "q1"], "initial": "q0", "finals": ["q1"], "k": 2, "l": 0,
    "transitions": [{"source": "q0", "target": "q1", "guard": "cur = 0 || cur = 1", "assign": {"x1": "cur", "x2": "cur"}},
                    {"source": "q1", "target": "q1", "guard": "cur = 0 || cur = 1", "assign": {"x1": "cur", "x2": "cur"}}],
    "outputs": {"q1": "x1 - x2"}})"));
  out.emplace_back("twin accumulators", parse(R"({
    "states": ["q0"], "initial": "q0", "finals": ["q0"], "k": 0, "l": 2,
    "transitions": [{"source": "q0", "target": "q0", "guard": true, "assign": {"y1": "y1 + cur", "y2": "y2 + cur"}}],
    "outputs": {"q0": "y1 - y2"}})"));
  out.emplace_back("difference of equal controls", parse(R"({
    "states": ["q0"], "initial": "q0", "finals": ["q0"], "k": 2, "l": 1,
    "transitions": [{"source": "q0", "target": "q0", "guard": true, "assign": {"x1": "cur", "x2": "cur", "y1": "y1 + x1 - x2"}}],
    "outputs": {"q0": "y1"}})"));
  out.emplace_back("reset data", parse(R"({
    "states": ["q0", "q1"], "initial": "q0", "finals": ["q1"], "k": 1, "l": 1, "u0": [0, 0],
    "transitions": [{"source": "q0", "target": "q0", "guard": "cur <= x1", "assign": {"y1": "0"}},
                    {"source": "q0", "target": "q1", "guard": "cur >= x1", "assign": {"y1": "0"}}],
    "outputs": {"q1": "y1"}})"));
  out.emplace_back("input equals stored value", parse(R"({
    "states": ["q0"], "initial": "q0", "finals": ["q0"], "k": 1, "l": 1, "u0": [1, 0],
    "transitions": [{"source": "q0", "target": "q0", "guard": "cur = x1", "assign": {"y1": "y1 + cur - x1"}}],
    "outputs": {"q0": "y1"}})"));
  return out;
}

struct RandomApParams {
  int max_n = 3;
  int max_states = 4;
};

inline std::pair<AffineProgram, QVector> random_ap(std::mt19937& rng, const RandomApParams& p = {}) {
  AffineProgram ap;
  ap.n = uniform(rng, 1, p.max_n);
  int s = uniform(rng, 1, p.max_states);
  for (int i = 0; i < s; ++i) ap.add_state("s" + std::to_string(i));
  int count = uniform(rng, 1, 5);
  for (int t = 0; t < count; ++t) {
    QAffineMap f = QAffineMap::identity(ap.n);
    if (coin(rng, 0.7))
      for (int r = 0; r < ap.n; ++r)
        for (int c = 0; c < ap.n; ++c)
          if (coin(rng, 0.4)) f.matrix(r, c) = uniform(rng, -1, 2);
    for (int r = 0; r < ap.n; ++r)
      if (coin(rng, 0.4)) f.offset[r] = uniform(rng, -2, 2);
    ap.transitions.push_back({uniform(rng, 0, s - 1), std::move(f), uniform(rng, 0, s - 1)});
  }
  QVector u0 = QVector::Zero(ap.n);
  for (int i = 0; i < ap.n; ++i) u0[i] = uniform(rng, -1, 1);
  ap.validate();
  return {ap, u0};
}

// Random valid circuit with at most max_nodes nodes.
inline Circuit random_circuit(std::mt19937& rng, int max_nodes = 8) {
  for (;;) {
    Circuit c;
    int constants = uniform(rng, 1, 3);
    int internal = uniform(rng, 1, max_nodes - constants);
    for (int i = 0; i < constants; ++i)
      c.nodes.push_back({"c" + std::to_string(i), CircuitNode::Kind::constant, Integer(uniform(rng, -3, 3))});
    std::vector<int> unused;
    for (int i = 0; i < constants; ++i) unused.push_back(i);
    for (int i = 0; i < internal; ++i) {
      int id = static_cast<int>(c.nodes.size());
      auto kind = std::array{CircuitNode::Kind::plus, CircuitNode::Kind::minus, CircuitNode::Kind::times}[uniform(rng, 0, 2)];
      c.nodes.push_back({"u" + std::to_string(i), kind, Integer(0)});
      int operands[2];
      for (int& o : operands) {
        if (!unused.empty() && coin(rng, 0.7)) {
          int pick = uniform(rng, 0, static_cast<int>(unused.size()) - 1);
          o = unused[pick];
          unused.erase(unused.begin() + pick);
        } else {
          o = uniform(rng, 0, id - 1);
          unused.erase(std::remove(unused.begin(), unused.end(), o), unused.end());
        }
      }
      c.edges.push_back({c.nodes[operands[0]].id, c.nodes[id].id, true});
      c.edges.push_back({c.nodes[operands[1]].id, c.nodes[id].id, false});
      unused.push_back(id);
    }
    if (unused.size() != 1) continue;
    c.output = c.nodes[unused.front()].id;
    c.validate();
    return c;
  }
}

inline Nfa random_nfa(std::mt19937& rng, int max_states = 4, int max_transitions = 6) {
  Nfa a;
  a.states = uniform(rng, 1, max_states);
  a.initial = 0;
  a.final = uniform(rng, 0, a.states - 1);
  int count = uniform(rng, 1, max_transitions);
  for (int t = 0; t < count; ++t) a.transitions.emplace_back(uniform(rng, 0, a.states - 1), uniform(rng, 0, a.states - 1));
  return a;
}

// Parikh vectors of the paths from initial to final with at most max_total
// transitions, by depth-first enumeration of the paths themselves.
inline std::set<std::vector<int>> brute_parikh(const Nfa& a, int max_total) {
  std::set<std::vector<int>> out;
  std::vector<int> counts(a.transitions.size(), 0);
  std::function<void(int, int)> walk = [&](int s, int used) {
    if (s == a.final) out.insert(counts);
    if (used == max_total) return;
    for (std::size_t t = 0; t < a.transitions.size(); ++t)
      if (a.transitions[t].first == s) {
        ++counts[t];
        walk(a.transitions[t].second, used + 1);
        --counts[t];
      }
  };
  walk(a.initial, 0);
  return out;
}

// Every vector of `n` naturals with sum ≤ max_total.
inline void for_each_count_vector(std::size_t n, int max_total, const std::function<void(const std::vector<int>&)>& f) {
  std::vector<int> v(n, 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
    if (i == n) {
      f(v);
      return;
    }
    for (int c = 0; c <= left; ++c) {
      v[i] = c;
      rec(i + 1, left - c);
    }
    v[i] = 0;
  };
  rec(0, max_total);
}

// Minimal SMT-LIB checker: balanced parentheses, known commands, every
// symbol in a term either declared or a known operator, and named
// assertions with distinct names.
inline bool smt_well_formed(const std::string& text, std::string* why = nullptr) {
  auto fail = [&](const std::string& m) {
    if (why) *why = m;
    return false;
  };
  std::vector<std::string> tokens;
  for (std::size_t i = 0; i < text.size();) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '(' || c == ')') {
      tokens.emplace_back(1, c);
      ++i;
    } else if (c == ';') {
      while (i < text.size() && text[i] != '\n') ++i;
    } else {
      std::size_t j = i;
      while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j])) && text[j] != '(' && text[j] != ')')
        ++j;
      tokens.push_back(text.substr(i, j - i));
      i = j;
    }
  }
  struct Node {
    std::string atom;
    std::vector<Node> list;
    bool is_list = false;
  };
  std::size_t pos = 0;
  std::function<bool(Node&)> parse = [&](Node& n) -> bool {
    if (pos >= tokens.size()) return false;
    if (tokens[pos] == ")") return false;
    if (tokens[pos] != "(") {
      n.atom = tokens[pos++];
      return true;
    }
    ++pos;
    n.is_list = true;
    while (pos < tokens.size() && tokens[pos] != ")") {
      n.list.emplace_back();
      if (!parse(n.list.back())) return false;
    }
    if (pos >= tokens.size()) return false;
    ++pos;
    return true;
  };
  std::vector<Node> commands;
  while (pos < tokens.size()) {
    commands.emplace_back();
    if (!parse(commands.back()) || !commands.back().is_list) return fail("unbalanced or bare top-level token");
  }
  std::set<std::string> declared, names;
  const std::set<std::string> ops{"and", "or", "not", "=>", "=", "<=", ">=", "<", ">", "+", "-", "*", "true", "false", "!"};
  std::function<bool(const Node&)> term = [&](const Node& n) -> bool {
    if (!n.is_list) {
      const std::string& a = n.atom;
      if (std::all_of(a.begin(), a.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) return true;
      return declared.count(a) || a == "true" || a == "false";
    }
    if (n.list.empty() || n.list.front().is_list || !ops.count(n.list.front().atom)) return false;
    if (n.list.front().atom == "!") {
      if (n.list.size() != 4 || n.list[2].atom != ":named" || n.list[3].is_list) return false;
      if (!names.insert(n.list[3].atom).second) return false;
      return term(n.list[1]);
    }
    for (std::size_t i = 1; i < n.list.size(); ++i)
      if (!term(n.list[i])) return false;
    return n.list.size() >= 2;
  };
  bool logic = false, check = false;
  for (const auto& c : commands) {
    if (c.list.empty() || c.list.front().is_list) return fail("empty command");
    const std::string& head = c.list.front().atom;
    if (head == "set-option") continue;
    if (head == "set-logic") {
      logic = c.list.size() == 2 && c.list[1].atom == "QF_LIA";
      if (!logic) return fail("logic is not QF_LIA");
    } else if (head == "declare-const") {
      if (c.list.size() != 3 || c.list[1].is_list || c.list[2].atom != "Int") return fail("bad declare-const");
      if (!declared.insert(c.list[1].atom).second) return fail("duplicate declaration " + c.list[1].atom);
    } else if (head == "assert") {
      if (c.list.size() != 2 || !term(c.list[1])) return fail("bad assertion");
    } else if (head == "check-sat") {
      check = true;
    } else if (head != "get-model") {
      return fail("unknown command " + head);
    }
  }
  if (!logic || !check) return fail("missing set-logic or check-sat");
  return true;
}

}  // namespace raq::test
