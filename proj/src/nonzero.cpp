#include <algorithm>
#include <limits>
#include <map>

#include "raq/nonzero.hpp"

namespace raq {

namespace {

std::size_t saturating_mul(std::size_t a, std::size_t b) {
  if (a != 0 && b > std::numeric_limits<std::size_t>::max() / a) return std::numeric_limits<std::size_t>::max();
  return a * b;
}

}  // namespace

std::size_t small_model_bound_raq(const Raq& a) {
  std::size_t bound = saturating_mul(a.states.size(), static_cast<std::size_t>(a.k + a.l + 1));
  for (int i = 0; i < a.k; ++i) bound = saturating_mul(bound, 2);
  for (int i = 2; i <= a.k + 1; ++i) bound = saturating_mul(bound, static_cast<std::size_t>(i));
  return bound;
}

bool is_nonzero_witness(const Raq& a, std::span<const Rational> w) {
  for (const auto& v : run(a, w))
    if (v != 0) return true;
  return false;
}

NonZeroVerdict nonzero_exptime(const Raq& a) {
  a.validate();
  bool extra_letter = !has_single_output(a);
  Raq prepared = constants_to_registers(normalize_single_output(a));
  ApTranslation tr = raq_to_ap(prepared);
  KarrResult hulls = karr(tr.program, tr.u0);

  NonZeroVerdict v;
  v.method = "karr";
  v.bound_used = small_model_bound_raq(prepared);
  v.stats.ap_states = tr.program.states.size();
  v.stats.ap_transitions = tr.program.transitions.size();
  v.stats.explored = hulls.applications;
  for (const auto& h : hulls.hull)
    if (h) ++v.stats.hull_dims[static_cast<int>(h->dim())];

  const std::string& qf = prepared.finals.front();
  const OutputFunction& out = prepared.outputs.at(qf);
  for (std::size_t s = 0; s < tr.origin.size() && !v.answer; ++s) {
    if (!tr.origin[s] || tr.origin[s]->state != qf) continue;
    for (std::size_t g = 0; g < hulls.generators[s].size(); ++g) {
      if (out(hulls.generators[s][g]) == 0) continue;
      v.answer = true;
      // Replay the generator's derivation to recover the concrete inputs.
      std::vector<Rational> word;
      QVector cur = tr.u0;
      for (int t : hulls.path_to(tr.program, static_cast<int>(s), static_cast<int>(g))) {
        if (tr.raq_transition[t] >= 0) {
          const CurSubstitution& sub = tr.substitution[t];
          Rational d = sub.constant;
          for (int i = 0; i < prepared.k; ++i)
            if (sub.coeffs[i] != 0) d += sub.coeffs[i] * cur[i];
          word.push_back(d);
        }
        cur = tr.program.transitions[t].map(cur);
      }
      // The final letter only moves into the added output state.
      if (extra_letter) word.pop_back();
      if (!is_nonzero_witness(a, word)) throw std::logic_error("nonzero_exptime: reconstructed witness does not replay");
      v.witness = std::move(word);
      break;
    }
  }
  return v;
}

std::vector<Rational> candidate_letters(std::span<const Rational> control) {
  if (control.empty()) return {Rational(1), Rational(2)};
  std::vector<Rational> values(control.begin(), control.end());
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  std::vector<Rational> out = values;
  out.push_back(values.front() - 1);
  out.push_back(values.front() - 2);
  out.push_back(values.back() + 1);
  out.push_back(values.back() + 2);
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    out.push_back((2 * values[i] + values[i + 1]) / 3);
    out.push_back((values[i] + 2 * values[i + 1]) / 3);
  }
  return out;
}

NonZeroVerdict nonzero_brute(const Raq& a, std::size_t max_len, const BruteOptions& options) {
  a.validate();
  Raq b = constants_to_registers(a);
  auto outgoing = b.outgoing();
  std::map<std::string, int> index;
  for (std::size_t i = 0; i < b.states.size(); ++i) index[b.states[i]] = static_cast<int>(i);

  struct Node {
    Configuration config;
    int parent;
    Rational letter;
  };
  std::vector<Node> nodes{{initial_configuration(b), -1, Rational(0)}};
  std::set<Configuration> seen{nodes.front().config};

  NonZeroVerdict v;
  v.method = "brute";
  v.bound_used = max_len;
  auto witness_from = [&](int id) {
    std::vector<Rational> w;
    for (; nodes[id].parent >= 0; id = nodes[id].parent) w.push_back(nodes[id].letter);
    std::reverse(w.begin(), w.end());
    return w;
  };
  auto accepts_nonzero = [&](const Configuration& c) {
    auto it = b.outputs.find(c.state);
    return it != b.outputs.end() && it->second(c.values) != 0;
  };

  std::size_t level_begin = 0;
  for (std::size_t depth = 0;; ++depth) {
    std::size_t level_end = nodes.size();
    for (std::size_t id = level_begin; id < level_end; ++id)
      if (accepts_nonzero(nodes[id].config)) {
        v.answer = true;
        v.witness = witness_from(static_cast<int>(id));
        v.stats.explored = nodes.size();
        return v;
      }
    if (depth == max_len || level_begin == level_end) break;
    for (std::size_t id = level_begin; id < level_end; ++id) {
      Configuration c = nodes[id].config;
      std::span<const Rational> control(c.values.data(), static_cast<std::size_t>(b.k));
      for (const Rational& d : candidate_letters(control))
        for (int ti : outgoing[index.at(c.state)]) {
          const Transition& t = b.transitions[ti];
          if (!eval_guard(t.guard, control, d)) continue;
          Configuration next{t.target, apply_update(t.update, b.k, c.values, d)};
          if (!seen.insert(next).second) continue;
          nodes.push_back({std::move(next), static_cast<int>(id), d});
          if (nodes.size() > options.cap)
            throw ResourceError("nonzero_brute: more than " + std::to_string(options.cap) + " configurations");
        }
    }
    level_begin = level_end;
  }
  v.stats.explored = nodes.size();
  return v;
}

Raq invariant_to_nonzero(const Raq& a, const std::string& state, const QAffineSpace& h) {
  a.validate();
  a.state_index(state);
  int n = a.n();
  if (h.ambient_dim() != n) throw UsageError("invariant space must live in Q^" + std::to_string(n));
  std::vector<QVector> normals = orthogonal_complement<Rational>(h.basis(), n);
  int m = static_cast<int>(normals.size());

  Raq r = a;
  r.finals.clear();
  r.outputs.clear();
  std::vector<Rational> zeros(m + 1, Rational(0));
  r = add_data_variables(r, zeros);
  int k = r.k, l = r.l;  // l = a.l + m + 1; the probe z is the last data variable
  std::string sink = "probe";
  while (std::find(r.states.begin(), r.states.end(), sink) != r.states.end()) sink += "'";
  for (int i = 0; i < m; ++i) {
    std::string qi = sink + "_" + std::to_string(i + 1);
    r.states.push_back(qi);
    // y'_i := ((x, y) - anchor)·v_i
    Transition into{state, Guard::top(), qi, Reassignment::identity(k, l)};
    int row = a.l + i;
    into.update.data_matrix.row(row).setZero();
    for (int c = 0; c < n; ++c) {
      int col = c < a.k ? c : k + (c - a.k);
      into.update.data_matrix(row, col) = normals[i][c];
    }
    into.update.data_offset[row] = -h.anchor().dot(normals[i]);
    r.transitions.push_back(std::move(into));
    Transition out{qi, Guard::top(), sink, Reassignment::identity(k, l)};
    out.update.data_matrix.row(l - 1).setZero();
    out.update.data_matrix(l - 1, k + row) = 1;
    r.transitions.push_back(std::move(out));
  }
  r.states.push_back(sink);
  r.finals = {sink};
  OutputFunction z = OutputFunction::zero(k, l);
  z.data_coeffs[l - 1] = 1;
  r.outputs[sink] = z;
  return r;
}

NonZeroVerdict invariant_raq(const Raq& a, const std::string& state, const QAffineSpace& h) {
  Raq reduced = invariant_to_nonzero(a, state, h);
  NonZeroVerdict v = nonzero_exptime(reduced);
  v.method = "karr-invariant";
  if (v.witness) {
    // The last two letters only move through the probe states.
    v.witness->resize(v.witness->size() - 2);
  }
  return v;
}

InvariantInstance nonzero_to_invariant(const Raq& a) {
  Raq r = normalize_single_output(a);
  std::vector<QVector> basis;
  for (int i = 0; i < r.n(); ++i)
    if (i != r.k) basis.push_back(QVector::Unit(r.n(), i));
  return {r, r.finals.front(), QAffineSpace::from_basis(QVector::Zero(r.n()), basis)};
}

}  // namespace raq
