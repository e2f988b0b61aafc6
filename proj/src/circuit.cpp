#include "raq/circuit.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "raq/io.hpp"

namespace raq {

int Circuit::node_index(const std::string& id) const {
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].id == id) return static_cast<int>(i);
  throw UsageError("unknown circuit node '" + id + "'");
}

std::size_t Circuit::constant_count() const {
  return std::count_if(nodes.begin(), nodes.end(), [](const CircuitNode& n) { return n.kind == CircuitNode::Kind::constant; });
}

void Circuit::validate() const {
  std::set<std::string> ids;
  for (const auto& n : nodes)
    if (!ids.insert(n.id).second) throw UsageError("duplicate circuit node '" + n.id + "'");
  node_index(output);
  std::vector<int> left(nodes.size(), 0), right(nodes.size(), 0), out_degree(nodes.size(), 0);
  for (const auto& e : edges) {
    int to = node_index(e.to);
    ++out_degree[node_index(e.from)];
    if (nodes[to].kind == CircuitNode::Kind::constant) throw UsageError("constant node '" + e.to + "' has an incoming edge");
    ++(e.left ? left : right)[to];
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].kind != CircuitNode::Kind::constant && (left[i] != 1 || right[i] != 1))
      throw UsageError("node '" + nodes[i].id + "' needs exactly one left and one right incoming edge");
    bool is_output = nodes[i].id == output;
    if (is_output && out_degree[i] != 0) throw UsageError("output node '" + output + "' has outgoing edges");
    if (!is_output && out_degree[i] == 0) throw UsageError("node '" + nodes[i].id + "' is a second output node");
  }
  // Kahn's algorithm; leftovers lie on a cycle.
  std::vector<int> indegree(nodes.size(), 0);
  for (const auto& e : edges) ++indegree[node_index(e.to)];
  std::vector<int> ready;
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (indegree[i] == 0) ready.push_back(static_cast<int>(i));
  std::size_t done = 0;
  while (!ready.empty()) {
    int u = ready.back();
    ready.pop_back();
    ++done;
    for (const auto& e : edges)
      if (e.from == nodes[u].id && --indegree[node_index(e.to)] == 0) ready.push_back(node_index(e.to));
  }
  if (done != nodes.size()) throw UsageError("circuit has a cycle");
}

Integer eval_circuit(const Circuit& c) {
  c.validate();
  std::vector<std::optional<Integer>> memo(c.nodes.size());
  std::vector<std::array<int, 2>> inputs(c.nodes.size(), {-1, -1});
  for (const auto& e : c.edges) inputs[c.node_index(e.to)][e.left ? 0 : 1] = c.node_index(e.from);
  auto value = [&](auto& self, int u) -> Integer {
    if (memo[u]) return *memo[u];
    const CircuitNode& n = c.nodes[u];
    Integer v;
    if (n.kind == CircuitNode::Kind::constant) {
      v = n.value;
    } else {
      Integer a = self(self, inputs[u][0]), b = self(self, inputs[u][1]);
      v = n.kind == CircuitNode::Kind::plus ? Integer(a + b) : n.kind == CircuitNode::Kind::minus ? Integer(a - b) : Integer(a * b);
    }
    memo[u] = v;
    return v;
  };
  return value(value, c.node_index(c.output));
}

Circuit desugar_minus(const Circuit& c) {
  c.validate();
  Circuit r = c;
  std::set<std::string> ids;
  for (const auto& n : c.nodes) ids.insert(n.id);
  auto fresh = [&](std::string base) {
    while (ids.count(base)) base += "'";
    ids.insert(base);
    return base;
  };
  for (std::size_t i = 0, count = r.nodes.size(); i < count; ++i) {
    if (r.nodes[i].kind != CircuitNode::Kind::minus) continue;
    r.nodes[i].kind = CircuitNode::Kind::plus;
    std::string id = r.nodes[i].id;
    std::string neg = fresh(id + ".neg"), scaled = fresh(id + ".scaled");
    r.nodes.push_back({neg, CircuitNode::Kind::constant, Integer(-1)});
    r.nodes.push_back({scaled, CircuitNode::Kind::times, Integer(0)});
    auto right = std::find_if(r.edges.begin(), r.edges.end(), [&](const CircuitEdge& e) { return e.to == id && !e.left; });
    std::string operand = right->from;
    right->from = scaled;
    r.edges.push_back({operand, scaled, true});
    r.edges.push_back({neg, scaled, false});
  }
  r.validate();
  return r;
}

Raq compile_ac(const Circuit& input) {
  Circuit c = desugar_minus(input);
  using Kind = CircuitNode::Kind;
  int nv = static_cast<int>(c.nodes.size());

  // Real edges first, then one self-loop per constant node.
  struct Edge {
    int from, to;
    bool left;
  };
  std::vector<Edge> edges;
  for (const auto& e : c.edges) edges.push_back({c.node_index(e.from), c.node_index(e.to), e.left});
  std::vector<std::vector<int>> incoming(nv), outgoing(nv);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    incoming[edges[e].to].push_back(static_cast<int>(e));
    outgoing[edges[e].from].push_back(static_cast<int>(e));
  }
  std::vector<int> loop(nv, -1);
  for (int u = 0; u < nv; ++u)
    if (c.nodes[u].kind == Kind::constant) {
      loop[u] = static_cast<int>(edges.size());
      incoming[u].push_back(loop[u]);
      edges.push_back({u, u, true});
    }
  // Left and right incoming edge of every internal node.
  auto in_edge = [&](int u, bool left) {
    for (int e : incoming[u])
      if (edges[e].left == left) return e;
    throw std::logic_error("compile_ac: missing incoming edge");
  };

  int m = static_cast<int>(edges.size());
  int k = 2 * m + 2, c0 = 2 * m, c1 = 2 * m + 1;
  auto xe = [](int e) { return 2 * e; };
  auto ze = [](int e) { return 2 * e + 1; };
  // Without plus nodes every value only ever scales the running product, so
  // all nodes share one data variable.
  bool multiplicative = std::none_of(c.nodes.begin(), c.nodes.end(), [](const CircuitNode& n) { return n.kind == Kind::plus; });
  std::vector<int> y(nv), y_left(nv, -1), y_right(nv, -1);
  int l = multiplicative ? 1 : 0;
  for (int u = 0; u < nv; ++u) {
    y[u] = multiplicative ? 0 : l++;
    if (c.nodes[u].kind == Kind::plus) {
      y_left[u] = l++;
      y_right[u] = l++;
    }
  }

  Raq a;
  a.k = k;
  a.l = l;
  a.initial_values = QVector::Zero(k + l);
  a.initial_values[c1] = 1;
  for (int j = 0; j < l; ++j) a.initial_values[k + j] = 1;
  for (const auto& n : c.nodes) a.states.push_back("q_" + n.id);
  std::string qf = "q_f";
  while (std::find(a.states.begin(), a.states.end(), qf) != a.states.end()) qf += "'";
  a.states.push_back(qf);
  int out = c.node_index(c.output);
  a.initial = a.states[out];
  a.finals = {qf};

  auto is = [&](int var, int reg) { return Guard::eq(Operand::x(var), Operand::x(reg)); };
  auto identity = [&] { return Reassignment::identity(k, l); };
  auto copy_data = [&](Reassignment& r, int to, std::vector<int> from) {
    r.data_matrix.row(to).setZero();
    for (int f : from) r.data_matrix(to, k + f) += 1;
  };
  // Value a node hands to its parent.
  auto result_vars = [&](int u) {
    return c.nodes[u].kind == Kind::plus ? std::vector<int>{y_left[u], y_right[u]} : std::vector<int>{y[u]};
  };
  auto done = [&](int u) {
    if (c.nodes[u].kind == Kind::constant) return is(xe(loop[u]), c1);
    return Guard::conj({is(xe(in_edge(u, true)), c1), is(xe(in_edge(u, false)), c1)});
  };
  auto descend = [&](int u, int e, Guard g) {
    int v = edges[e].from;
    Reassignment r = identity();
    r.control_source[ze(e)] = c1;
    for (int in : incoming[v]) r.control_source[xe(in)] = c0;
    copy_data(r, y[v], {y[u]});
    a.transitions.push_back({a.states[u], std::move(g), a.states[v], std::move(r)});
  };

  a.transitions.push_back({a.states[out], done(out), qf, identity()});
  for (int u = 0; u < nv; ++u) {
    const CircuitNode& n = c.nodes[u];
    if (n.kind == Kind::constant) {
      Reassignment r = identity();
      r.control_source[xe(loop[u])] = c1;
      r.data_matrix(y[u], k + y[u]) = Rational(n.value);
      a.transitions.push_back({a.states[u], is(xe(loop[u]), c0), a.states[u], std::move(r)});
    } else {
      int e1 = in_edge(u, true), e2 = in_edge(u, false);
      descend(u, e1, is(xe(e1), c0));
      descend(u, e2, Guard::conj({is(xe(e1), c1), is(xe(e2), c0)}));
    }
    for (int e : outgoing[u]) {
      if (edges[e].to == u) continue;
      int v = edges[e].to;
      Reassignment r = identity();
      r.control_source[ze(e)] = c0;
      r.control_source[xe(e)] = c1;
      int slot = c.nodes[v].kind == Kind::plus ? (edges[e].left ? y_left[v] : y_right[v]) : y[v];
      copy_data(r, slot, result_vars(u));
      a.transitions.push_back({a.states[u], Guard::conj({done(u), is(ze(e), c1)}), a.states[v], std::move(r)});
    }
  }
  OutputFunction z = OutputFunction::zero(k, l);
  for (int j : result_vars(out)) z.data_coeffs[j] = 1;
  a.outputs[qf] = z;
  a.validate();
  return a;
}

Rational evaluate_compiled(const Raq& a, std::size_t max_steps) {
  a.validate();
  std::vector<Configuration> stack{initial_configuration(a)};
  std::set<Configuration> seen{stack.front()};
  for (std::size_t steps = 0; !stack.empty(); ++steps) {
    if (steps > max_steps) break;
    Configuration cfg = std::move(stack.back());
    stack.pop_back();
    if (auto it = a.outputs.find(cfg.state); it != a.outputs.end()) return it->second(cfg.values);
    for (auto& next : step(a, cfg, Rational(0)))
      if (seen.insert(next).second) stack.push_back(std::move(next));
  }
  throw std::logic_error("evaluate_compiled: no final configuration reached");
}

Raq build_power_raq(const Integer& p, unsigned n) {
  if (p < 1 || n < 1) throw UsageError("build_power_raq: p and n must be positive");
  int bits = 0;
  while ((1u << bits) < n) ++bits;
  int k = bits + 2, c0 = bits, c1 = bits + 1;
  Raq a;
  a.k = k;
  a.l = 1;
  a.states = {"q0", "q1"};
  a.initial = "q0";
  a.finals = {"q1"};
  a.initial_values = QVector::Zero(k + 1);
  for (int i = 0; i < bits; ++i) a.initial_values[i] = ((n - 1) >> i) & 1u;
  a.initial_values[c1] = 1;
  a.initial_values[k] = Rational(p);
  auto is = [&](int var, int reg) { return Guard::eq(Operand::x(var), Operand::x(reg)); };

  std::vector<Guard> zero;
  for (int i = 0; i < bits; ++i) zero.push_back(is(i, c0));
  a.transitions.push_back({"q0", zero.empty() ? Guard::top() : Guard::conj(zero), "q1", Reassignment::identity(k, 1)});
  // Decrement: the lowest set bit clears and every bit below it becomes 1.
  for (int i = 0; i < bits; ++i) {
    std::vector<Guard> g{is(i, c1)};
    Reassignment r = Reassignment::identity(k, 1);
    for (int j = 0; j < i; ++j) {
      g.push_back(is(j, c0));
      r.control_source[j] = c1;
    }
    r.control_source[i] = c0;
    r.data_matrix(0, k) = Rational(p);
    a.transitions.push_back({"q0", Guard::conj(g), "q0", std::move(r)});
  }
  OutputFunction z = OutputFunction::zero(k, 1);
  z.data_coeffs[0] = 1;
  a.outputs["q1"] = z;
  a.control_names.clear();
  for (int i = 0; i < bits; ++i) a.control_names.push_back("b" + std::to_string(i + 1));
  a.control_names.push_back("zero");
  a.control_names.push_back("one");
  a.validate();
  return a;
}

namespace {

CircuitNode::Kind parse_kind(const JsonSource& src, const Json& v, const std::string& pointer) {
  static const std::map<std::string, CircuitNode::Kind> kinds = {
      {"constant", CircuitNode::Kind::constant}, {"const", CircuitNode::Kind::constant},
      {"plus", CircuitNode::Kind::plus},         {"+", CircuitNode::Kind::plus},
      {"minus", CircuitNode::Kind::minus},       {"-", CircuitNode::Kind::minus},
      {"times", CircuitNode::Kind::times},       {"*", CircuitNode::Kind::times}};
  auto it = kinds.find(src.string(v, pointer));
  if (it == kinds.end()) src.fail(pointer, "unknown node kind (expected constant, plus, minus or times)");
  return it->second;
}

const char* kind_name(CircuitNode::Kind k) {
  switch (k) {
    case CircuitNode::Kind::constant: return "constant";
    case CircuitNode::Kind::plus: return "plus";
    case CircuitNode::Kind::minus: return "minus";
    case CircuitNode::Kind::times: return "times";
  }
  return "?";
}

}  // namespace

Circuit parse_circuit(std::string_view text) {
  JsonSource src(text);
  const Json& root = src.root();
  Circuit c;
  const Json& nodes = src.field(root, "", "nodes");
  if (!nodes.is_array()) src.fail("/nodes", "expected an array");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    std::string p = "/nodes/" + std::to_string(i);
    CircuitNode n;
    n.id = src.string(src.field(nodes[i], p, "id"), p + "/id");
    n.kind = parse_kind(src, src.field(nodes[i], p, "kind"), p + "/kind");
    if (n.kind == CircuitNode::Kind::constant) {
      const Json& v = src.field(nodes[i], p, "value");
      Rational r = src.rational(v, p + "/value");
      if (!is_integer(r)) src.fail(p + "/value", "constants must be integers");
      n.value = numerator(r);
    }
    c.nodes.push_back(std::move(n));
  }
  const Json& edges = src.field(root, "", "edges");
  if (!edges.is_array()) src.fail("/edges", "expected an array");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    std::string p = "/edges/" + std::to_string(i);
    CircuitEdge e;
    e.from = src.string(src.field(edges[i], p, "from"), p + "/from");
    e.to = src.string(src.field(edges[i], p, "to"), p + "/to");
    std::string slot = src.string(src.field(edges[i], p, "slot"), p + "/slot");
    if (slot != "left" && slot != "right") src.fail(p + "/slot", "slot must be \"left\" or \"right\"");
    e.left = slot == "left";
    c.edges.push_back(std::move(e));
  }
  c.output = src.string(src.field(root, "", "output"), "/output");
  try {
    c.validate();
  } catch (const ParseError&) {
    throw;
  } catch (const UsageError& e) {
    throw ParseError(e.what(), src.line_of("/edges"));
  }
  return c;
}

Circuit load_circuit(const std::string& path) {
  std::string text = read_file(path);
  try {
    return parse_circuit(text);
  } catch (const ParseError& e) {
    throw ParseError(path, e);
  }
}

std::string serialize_circuit(const Circuit& c) {
  Json j;
  j["nodes"] = Json::array();
  for (const auto& n : c.nodes) {
    Json node{{"id", n.id}, {"kind", kind_name(n.kind)}};
    if (n.kind == CircuitNode::Kind::constant) node["value"] = rational_json(Rational(n.value));
    j["nodes"].push_back(std::move(node));
  }
  j["edges"] = Json::array();
  for (const auto& e : c.edges) j["edges"].push_back({{"from", e.from}, {"to", e.to}, {"slot", e.left ? "left" : "right"}});
  j["output"] = c.output;
  return j.dump(2) + "\n";
}

}  // namespace raq
