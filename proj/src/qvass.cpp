// Two-corner rational VASS for zero-reachability and its Presburger query.
//
// A corner assignment η maps each control variable to an index into
// (−∞, constants..., +∞) and is monotone in the state's preorder. Along a path
// η1 and η2 follow two corners of the input polyhedron; placing cur in a gap
// lets each corner take either endpoint of the gap. π records, for every data
// variable, which final data variable its current value ends up in (0 when it
// is dropped), so the output can be accumulated as the values are created.

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <tuple>

#include "raq/reach.hpp"

namespace raq {

namespace {

struct Key {
  int state;
  int final_origin;
  std::vector<int> eta1, eta2, pi;

  auto tie() const { return std::tie(state, final_origin, eta1, eta2, pi); }
  bool operator<(const Key& o) const { return tie() < o.tie(); }
};

std::string join(const std::vector<std::string>& parts) {
  std::string s = "[";
  for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? "," : "") + parts[i];
  return s + "]";
}

}  // namespace

Qvass build_qvass(const ReachNormalization& n, const QvassOptions& options) {
  const Raq& a = n.automaton;
  int k = a.k, l = a.l;
  int nc = static_cast<int>(n.constants.size());
  auto ext = [&](int e) {
    if (e == 0) return ExtendedRational::neg_infinity();
    if (e == nc + 1) return ExtendedRational::pos_infinity();
    return ExtendedRational::finite(n.constants[e - 1]);
  };
  auto outgoing = a.outgoing();
  std::vector<int> target(a.transitions.size());
  for (std::size_t t = 0; t < a.transitions.size(); ++t) target[t] = a.state_index(a.transitions[t].target);

  // stored_in[t][i]: data variable receiving old y_i under transition t, or -1.
  std::vector<std::vector<int>> stored_in(a.transitions.size(), std::vector<int>(l, -1));
  for (std::size_t t = 0; t < a.transitions.size(); ++t)
    for (int i = 0; i < l; ++i)
      for (int r = 0; r < l; ++r)
        if (a.transitions[t].update.data_matrix(r, k + i) == 1) stored_in[t][i] = r;

  std::map<int, const OutputFunction*> final_output;
  for (std::size_t s = 0; s < a.states.size(); ++s)
    if (auto it = a.outputs.find(a.states[s]); it != a.outputs.end()) final_output[n.origin_state[s]] = &it->second;

  std::map<int, std::string> origin_name;
  for (std::size_t s = 0; s < a.states.size(); ++s)
    origin_name[n.origin_state[s]] = a.states[s].substr(0, a.states[s].find('|'));

  Qvass v;
  v.c_min = n.constants.front();
  v.c_max = n.constants.back();
  v.states = {"start", "end"};
  v.initial = 0;
  v.final = 1;
  std::map<Key, int> index;
  std::vector<Key> keys{{}, {}};
  std::deque<int> work;
  auto name_of = [&](const Key& key) {
    std::vector<std::string> e1, e2, pi;
    for (int i = 0; i < n.original_k; ++i) {
      e1.push_back(to_string(ext(key.eta1[i])));
      e2.push_back(to_string(ext(key.eta2[i])));
    }
    for (int p : key.pi) pi.push_back(std::to_string(p));
    return "(" + a.states[key.state] + ", " + origin_name.at(key.final_origin) + ", " + join(e1) + ", " + join(e2) +
           ", " + join(pi) + ")";
  };
  auto state_of = [&](Key key) {
    auto [it, fresh] = index.emplace(key, static_cast<int>(v.states.size()));
    if (fresh) {
      if (v.states.size() >= options.state_cap)
        throw ResourceError("build_qvass: more than " + std::to_string(options.state_cap) + " states");
      v.states.push_back(name_of(key));
      keys.push_back(std::move(key));
      work.push_back(it->second);
    }
    return it->second;
  };

  std::vector<int> eta0(k);
  for (int i = 0; i < k; ++i)
    eta0[i] = 1 + static_cast<int>(std::lower_bound(n.constants.begin(), n.constants.end(), a.initial_values[i]) -
                                   n.constants.begin());
  int p0 = a.state_index(a.initial);

  // Every assignment of {0..l} to the data variables.
  auto all_pi = [&](const std::vector<int>& fixed) {
    std::vector<std::vector<int>> out{{}};
    for (int j = 0; j < l; ++j) {
      std::vector<std::vector<int>> next;
      for (const auto& p : out)
        for (int c = 0; c <= l; ++c) {
          if (fixed[j] >= 0 && c != fixed[j]) continue;
          auto q = p;
          q.push_back(c);
          next.push_back(std::move(q));
        }
      out = std::move(next);
    }
    return out;
  };

  for (const auto& [f, z] : final_output)
    for (const auto& pi : all_pi(std::vector<int>(l, -1))) {
      Symbolic c;
      for (int j = 0; j < l; ++j)
        if (pi[j] != 0) c.finite += z->data_coeffs[pi[j] - 1] * a.initial_values[k + j];
      int s = state_of({p0, f, eta0, eta0, pi});
      v.transitions.push_back({v.initial, {c, c}, s, -1});
    }

  while (!work.empty()) {
    int sid = work.front();
    work.pop_front();
    Key key = keys[sid];
    const OutputFunction& z = *final_output.at(key.final_origin);
    const Preorder& pre = n.preorder[key.state];

    std::vector<int> identity(l);
    for (int j = 0; j < l; ++j) identity[j] = j + 1;
    if (n.origin_state[key.state] == key.final_origin && key.pi == identity) {
      std::array<Symbolic, 2> c;
      const std::vector<int>* etas[2] = {&key.eta1, &key.eta2};
      for (int m = 0; m < 2; ++m) {
        c[m].finite = z.constant;
        for (int i = 0; i < k; ++i)
          if (z.control_coeffs[i] != 0) c[m] += Symbolic::of(ext((*etas[m])[i]), z.control_coeffs[i]);
      }
      v.transitions.push_back({sid, c, v.final, -1});
    }

    int classes = pre.classes();
    std::vector<int> rep(classes);
    for (int c = 0; c < classes; ++c) rep[c] = pre.members(c).front();
    for (int ti : outgoing[key.state]) {
      const Transition& t = a.transitions[ti];
      const auto& st = stored_in[ti];
      bool compatible = true;
      std::vector<int> fixed(l, -1);
      for (int i = 0; i < l && compatible; ++i) {
        if (st[i] < 0) {
          if (key.pi[i] != 0) compatible = false;
          continue;
        }
        if (fixed[st[i]] >= 0 && fixed[st[i]] != key.pi[i]) compatible = false;
        fixed[st[i]] = key.pi[i];
      }
      if (!compatible) continue;

      auto corner_values = [&](const std::vector<int>& eta) {
        int c = n.form_class[ti];
        std::vector<int> vals;
        switch (n.form[ti]) {
          case GuardForm::equal: vals = {eta[rep[c]]}; break;
          case GuardForm::below: vals = {0, eta[rep[0]]}; break;
          case GuardForm::between: vals = {eta[rep[c]], eta[rep[c + 1]]}; break;
          case GuardForm::above: vals = {eta[rep[c]], nc + 1}; break;
        }
        vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
        return vals;
      };
      auto successor = [&](const std::vector<int>& eta, int cur) {
        std::vector<int> next(k);
        for (int i = 0; i < k; ++i) {
          int src = t.update.control_source[i];
          next[i] = src == k ? cur : eta[src];
        }
        const Preorder& post = n.preorder[target[ti]];
        for (int i = 0; i < k; ++i)
          for (int j = 0; j < k; ++j)
            if (post.rank[i] <= post.rank[j] && next[i] > next[j])
              throw std::logic_error("build_qvass: corner assignment leaves the state's order");
        return next;
      };
      auto contribution = [&](const std::vector<int>& pi_next, const std::vector<int>& eta, int cur) {
        Symbolic c;
        for (int r = 0; r < l; ++r) {
          if (pi_next[r] == 0) continue;
          const Rational& w = z.data_coeffs[pi_next[r] - 1];
          if (w == 0) continue;
          c.finite += w * t.update.data_offset[r];
          for (int i = 0; i < k; ++i)
            if (t.update.data_matrix(r, i) != 0) c += Symbolic::of(ext(eta[i]), w * t.update.data_matrix(r, i));
          if (t.update.data_matrix(r, k + l) != 0) c += Symbolic::of(ext(cur), w * t.update.data_matrix(r, k + l));
        }
        return c;
      };

      auto v1s = corner_values(key.eta1), v2s = corner_values(key.eta2);
      for (const auto& pi_next : all_pi(fixed))
        for (int v1 : v1s)
          for (int v2 : v2s) {
            Key next{target[ti], key.final_origin, successor(key.eta1, v1), successor(key.eta2, v2), pi_next};
            std::array<Symbolic, 2> c{contribution(pi_next, key.eta1, v1), contribution(pi_next, key.eta2, v2)};
            int s = state_of(std::move(next));
            v.transitions.push_back({sid, c, s, ti});
          }
    }
  }

  // Keep only states from which the final state is reachable.
  v.explored_states = v.states.size();
  std::vector<std::vector<int>> pred(v.states.size());
  for (const auto& t : v.transitions) pred[t.target].push_back(t.source);
  std::vector<bool> live(v.states.size(), false);
  live[v.final] = true;
  std::deque<int> queue{v.final};
  while (!queue.empty()) {
    int s = queue.front();
    queue.pop_front();
    for (int p : pred[s])
      if (!live[p]) {
        live[p] = true;
        queue.push_back(p);
      }
  }
  live[v.initial] = true;
  std::vector<int> renumber(v.states.size(), -1);
  std::vector<std::string> states;
  for (std::size_t s = 0; s < v.states.size(); ++s)
    if (live[s]) {
      renumber[s] = static_cast<int>(states.size());
      states.push_back(v.states[s]);
    }
  // Parallel transitions with equal updates are interchangeable in any path,
  // so one representative each suffices.
  std::vector<QvassTransition> transitions;
  std::set<std::tuple<int, int, std::string>> seen;
  for (auto t : v.transitions)
    if (live[t.source] && live[t.target]) {
      t.source = renumber[t.source];
      t.target = renumber[t.target];
      if (!seen.emplace(t.source, t.target, to_string(t.update[0]) + "|" + to_string(t.update[1])).second) continue;
      transitions.push_back(std::move(t));
    }
  v.states = std::move(states);
  v.transitions = std::move(transitions);
  v.initial = renumber[v.initial];
  v.final = renumber[v.final];
  return v;
}

PresburgerQuery reach_query(const Qvass& v) {
  PresburgerQuery q;
  FlowNetwork g;
  g.states = static_cast<int>(v.states.size());
  g.initial = v.initial;
  g.final = v.final;
  for (std::size_t t = 0; t < v.transitions.size(); ++t)
    g.edges.push_back({v.transitions[t].source, v.transitions[t].target, q.add_variable("t" + std::to_string(t))});
  for (int s = 0; s < g.states; ++s) g.distance_var.push_back(q.add_variable("d" + std::to_string(s)));
  q.network = std::move(g);
  add_flow_constraints(q);

  using Terms = std::vector<std::pair<int, Rational>>;
  std::array<Terms, 2> fin, neg, pos, bound;
  std::array<bool, 2> has_neg{false, false}, has_pos{false, false};
  for (std::size_t t = 0; t < v.transitions.size(); ++t)
    for (int m = 0; m < 2; ++m) {
      const Symbolic& s = v.transitions[t].update[m];
      int var = static_cast<int>(t);
      fin[m].emplace_back(var, s.finite);
      neg[m].emplace_back(var, s.neg);
      pos[m].emplace_back(var, s.pos);
      bound[m].emplace_back(var, s.finite + v.c_min * s.neg + v.c_max * s.pos);
      has_neg[m] = has_neg[m] || s.neg != 0;
      has_pos[m] = has_pos[m] || s.pos != 0;
    }
  // Alternatives for C_m ≤ 0 (below) or C_m ≥ 0 (above): an infinite part
  // with the right sign, or the value at the least extreme choice of ±∞.
  auto side = [&](int m, bool below) {
    std::vector<LinearConstraint> alts;
    Relation toward = below ? Relation::le : Relation::ge;
    Relation away = below ? Relation::ge : Relation::le;
    if (has_neg[m]) alts.push_back(integer_constraint(neg[m], away, Rational(0), true, "target"));
    if (has_pos[m]) alts.push_back(integer_constraint(pos[m], toward, Rational(0), true, "target"));
    alts.push_back(integer_constraint(bound[m], toward, Rational(0), false, "target"));
    return alts;
  };
  std::vector<std::vector<LinearConstraint>> target;
  for (auto [lo, hi] : {std::pair{0, 1}, std::pair{1, 0}})
    for (const auto& a : side(lo, true))
      for (const auto& b : side(hi, false)) target.push_back({a, b});
  q.disjunctions.push_back(std::move(target));
  return q;
}

std::string transition_label(const Qvass& v, const ReachNormalization& n, int t) {
  const QvassTransition& tr = v.transitions[t];
  std::string s = "t" + std::to_string(t) + " " + v.states[tr.source] + " -> " + v.states[tr.target];
  if (tr.automaton_transition >= 0) s += " via " + n.automaton.describe(tr.automaton_transition);
  return s;
}

ReachPipeline reach_pipeline(const Raq& a, const ReachOptions& options) {
  ReachPipeline p;
  p.normalization = normalize_for_reach(a);
  p.qvass = build_qvass(p.normalization, {options.state_cap});
  p.query = reach_query(p.qvass);
  return p;
}

ReachVerdict reach_zero(const Raq& a, const ReachOptions& options) {
  ReachPipeline p = reach_pipeline(a, options);
  ReachVerdict out;
  out.stats.normalized_states = p.normalization.automaton.states.size();
  out.stats.normalized_transitions = p.normalization.automaton.transitions.size();
  out.stats.qvass_states = p.qvass.states.size();
  out.stats.qvass_transitions = p.qvass.transitions.size();
  out.stats.query_variables = p.query.names.size();
  QuerySolution s = solve_query(p.query, {options.node_cap});
  out.stats.solver_nodes = s.nodes;
  if (!s.sat) return out;
  if (!holds_literally(p.query, s.values)) throw std::logic_error("reach_zero: solver model violates the query");
  out.reachable = true;
  out.model = s.values;
  std::map<std::string, Integer> certificate;
  for (std::size_t t = 0; t < p.qvass.transitions.size(); ++t)
    if (s.values[t] > 0) certificate[transition_label(p.qvass, p.normalization, static_cast<int>(t))] = s.values[t];
  out.certificate = std::move(certificate);
  return out;
}

}  // namespace raq
