#include "raq/presburger.hpp"

#include <deque>
#include <sstream>

namespace raq {

int PresburgerQuery::add_variable(std::string name) {
  names.push_back(std::move(name));
  return static_cast<int>(names.size()) - 1;
}

void add_flow_constraints(PresburgerQuery& q) {
  for (int v = 0; v < static_cast<int>(q.names.size()); ++v)
    q.constraints.push_back({{{v, Integer(1)}}, Relation::ge, Integer(0), "nonneg"});
  if (!q.network) return;
  const FlowNetwork& g = *q.network;
  std::vector<LinearConstraint> balance(g.states);
  for (int s = 0; s < g.states; ++s) {
    balance[s].rel = Relation::eq;
    balance[s].family = "flow";
    balance[s].rhs = Integer((s == g.final ? 1 : 0) - (s == g.initial ? 1 : 0));
  }
  for (const auto& e : g.edges) {
    if (e.source == e.target) continue;
    balance[e.target].terms.emplace_back(e.var, Integer(1));
    balance[e.source].terms.emplace_back(e.var, Integer(-1));
  }
  q.constraints.insert(q.constraints.end(), balance.begin(), balance.end());
}

PresburgerQuery parikh_formula(const Nfa& a) {
  PresburgerQuery q;
  FlowNetwork g;
  g.states = a.states;
  g.initial = a.initial;
  g.final = a.final;
  for (std::size_t t = 0; t < a.transitions.size(); ++t)
    g.edges.push_back({a.transitions[t].first, a.transitions[t].second, q.add_variable("t" + std::to_string(t))});
  for (int s = 0; s < a.states; ++s) g.distance_var.push_back(q.add_variable("d" + std::to_string(s)));
  q.network = std::move(g);
  add_flow_constraints(q);
  return q;
}

namespace {

bool constraints_hold(const PresburgerQuery& q, const std::vector<Integer>& values) {
  for (const auto& c : q.constraints)
    if (!c.holds(values)) return false;
  for (const auto& d : q.disjunctions) {
    bool any = false;
    for (const auto& alt : d) {
      bool all = true;
      for (const auto& c : alt) all = all && c.holds(values);
      if (all) {
        any = true;
        break;
      }
    }
    if (!any) return false;
  }
  return true;
}

std::vector<bool> used_states(const FlowNetwork& g, const std::vector<Integer>& values) {
  std::vector<bool> used(g.states, false);
  for (const auto& e : g.edges)
    if (values[e.var] > 0) used[e.source] = used[e.target] = true;
  return used;
}

// -1 for states not reached over used transitions.
std::vector<long> bfs_distances(const FlowNetwork& g, const std::vector<Integer>& values) {
  std::vector<long> dist(g.states, -1);
  std::vector<std::vector<int>> succ(g.states);
  for (const auto& e : g.edges)
    if (values[e.var] > 0) succ[e.source].push_back(e.target);
  dist[g.initial] = 0;
  std::deque<int> queue{g.initial};
  while (!queue.empty()) {
    int s = queue.front();
    queue.pop_front();
    for (int t : succ[s])
      if (dist[t] < 0) {
        dist[t] = dist[s] + 1;
        queue.push_back(t);
      }
  }
  return dist;
}

}  // namespace

bool holds_literally(const PresburgerQuery& q, const std::vector<Integer>& values) {
  if (!constraints_hold(q, values)) return false;
  if (!q.network) return true;
  const FlowNetwork& g = *q.network;
  if (values[g.distance_var[g.initial]] != 0) return false;
  for (int s = 0; s < g.states; ++s) {
    if (s == g.initial) continue;
    Integer in = 0;
    bool justified = false;
    for (const auto& e : g.edges) {
      if (e.target != s) continue;
      in += values[e.var];
      if (values[e.var] > 0 && values[g.distance_var[s]] == values[g.distance_var[e.source]] + 1) justified = true;
    }
    if (in > 0 && !justified) return false;
  }
  return true;
}

bool holds_for_counts(const PresburgerQuery& q, const std::vector<Integer>& values) {
  if (!q.network) return constraints_hold(q, values);
  return holds_literally(q, with_distances(q, values));
}

std::vector<Integer> with_distances(const PresburgerQuery& q, std::vector<Integer> values) {
  if (!q.network) return values;
  const FlowNetwork& g = *q.network;
  auto dist = bfs_distances(g, values);
  for (int s = 0; s < g.states; ++s) values[g.distance_var[s]] = Integer(std::max(dist[s], 0L));
  return values;
}

namespace {

std::string smt_int(const Integer& v) { return v < 0 ? "(- " + (-v).str() + ")" : v.str(); }

std::string smt_sum(const std::vector<std::string>& parts) {
  if (parts.empty()) return "0";
  if (parts.size() == 1) return parts.front();
  std::string s = "(+";
  for (const auto& p : parts) s += " " + p;
  return s + ")";
}

std::string smt_junction(const char* op, const std::vector<std::string>& parts) {
  if (parts.empty()) return std::string(op) == "and" ? "true" : "false";
  if (parts.size() == 1) return parts.front();
  std::string s = std::string("(") + op;
  for (const auto& p : parts) s += " " + p;
  return s + ")";
}

std::string smt_constraint(const PresburgerQuery& q, const LinearConstraint& c) {
  std::vector<std::string> parts;
  for (const auto& [v, k] : c.terms) parts.push_back(k == 1 ? q.names[v] : "(* " + smt_int(k) + " " + q.names[v] + ")");
  const char* op = c.rel == Relation::le ? "<=" : c.rel == Relation::eq ? "=" : ">=";
  return std::string("(") + op + " " + smt_sum(parts) + " " + smt_int(c.rhs) + ")";
}

}  // namespace

std::string to_smtlib(const PresburgerQuery& q) {
  std::ostringstream out;
  out << "(set-option :produce-models true)\n(set-logic QF_LIA)\n";
  for (const auto& n : q.names) out << "(declare-const " << n << " Int)\n";
  std::vector<std::string> families;
  std::vector<std::vector<std::string>> bodies;
  for (const auto& c : q.constraints) {
    std::size_t f = 0;
    while (f < families.size() && families[f] != c.family) ++f;
    if (f == families.size()) {
      families.push_back(c.family.empty() ? "constraint" : c.family);
      bodies.emplace_back();
    }
    bodies[f].push_back(smt_constraint(q, c));
  }
  for (std::size_t f = 0; f < families.size(); ++f)
    out << "(assert (! " << smt_junction("and", bodies[f]) << " :named " << families[f] << "))\n";
  if (q.network) {
    const FlowNetwork& g = *q.network;
    std::vector<std::string> parts{"(= " + q.names[g.distance_var[g.initial]] + " 0)"};
    for (int s = 0; s < g.states; ++s) {
      if (s == g.initial) continue;
      std::vector<std::string> in, why;
      for (const auto& e : g.edges) {
        if (e.target != s) continue;
        in.push_back(q.names[e.var]);
        why.push_back("(and (> " + q.names[e.var] + " 0) (= " + q.names[g.distance_var[s]] + " (+ " +
                      q.names[g.distance_var[e.source]] + " 1)))");
      }
      if (in.empty()) continue;
      parts.push_back("(=> (> " + smt_sum(in) + " 0) " + smt_junction("or", why) + ")");
    }
    out << "(assert (! " << smt_junction("and", parts) << " :named connectivity))\n";
  }
  for (std::size_t d = 0; d < q.disjunctions.size(); ++d) {
    std::vector<std::string> alts;
    for (const auto& alt : q.disjunctions[d]) {
      std::vector<std::string> conj;
      for (const auto& c : alt) conj.push_back(smt_constraint(q, c));
      alts.push_back(smt_junction("and", conj));
    }
    out << "(assert (! " << smt_junction("or", alts) << " :named target" << (d == 0 ? "" : "_" + std::to_string(d))
        << "))\n";
  }
  out << "(check-sat)\n(get-model)\n";
  return out.str();
}

QuerySolution solve_query(const PresburgerQuery& q, const IlpOptions& options) {
  int n = static_cast<int>(q.names.size());
  LazyBranching lazy;
  if (q.network) {
    const FlowNetwork& g = *q.network;
    lazy = [&g](const std::vector<Integer>& x) {
      std::vector<std::vector<LinearConstraint>> alternatives;
      auto used = used_states(g, x);
      auto dist = bfs_distances(g, x);
      std::vector<bool> cut(g.states, false);
      bool any = false;
      for (int s = 0; s < g.states; ++s)
        if (used[s] && dist[s] < 0) cut[s] = any = true;
      if (!any) return alternatives;
      LinearConstraint idle{{}, Relation::le, Integer(0), "connectivity"};
      LinearConstraint enter{{}, Relation::ge, Integer(1), "connectivity"};
      for (const auto& e : g.edges) {
        if (cut[e.source] || cut[e.target]) idle.terms.emplace_back(e.var, Integer(1));
        if (!cut[e.source] && cut[e.target]) enter.terms.emplace_back(e.var, Integer(1));
      }
      alternatives.push_back({idle});
      if (!enter.terms.empty()) alternatives.push_back({enter});
      return alternatives;
    };
  }

  QuerySolution out;
  std::vector<std::size_t> choice(q.disjunctions.size(), 0);
  for (const auto& d : q.disjunctions)
    if (d.empty()) return out;
  for (;;) {
    std::vector<LinearConstraint> rows = q.constraints;
    for (std::size_t d = 0; d < choice.size(); ++d) {
      const auto& alt = q.disjunctions[d][choice[d]];
      rows.insert(rows.end(), alt.begin(), alt.end());
    }
    IlpResult r = solve_ilp(n, std::move(rows), options, lazy);
    out.nodes += r.nodes;
    if (r.feasible) {
      out.sat = true;
      out.values = with_distances(q, std::move(r.x));
      return out;
    }
    std::size_t d = 0;
    while (d < choice.size() && ++choice[d] == q.disjunctions[d].size()) choice[d++] = 0;
    if (d == choice.size()) return out;
  }
}

}  // namespace raq
