#include <deque>
#include <map>

#include "raq/nonzero.hpp"

namespace raq {

namespace {

// All preorders on X ∪ {cur} whose restriction to X is `px` (cur = element k).
std::vector<Preorder> insert_cur(const Preorder& px) {
  int k = px.size(), c = px.classes();
  std::vector<Preorder> out;
  for (int i = 0; i < c; ++i) {
    Preorder p = px;
    p.rank.push_back(i);
    out.push_back(std::move(p));
  }
  for (int g = 0; g <= c; ++g) {
    Preorder p = px;
    for (int e = 0; e < k; ++e)
      if (p.rank[e] >= g) ++p.rank[e];
    p.rank.push_back(g);
    out.push_back(std::move(p));
  }
  return out;
}

// Finitely many representative values for cur, as affine forms over x.
std::vector<CurSubstitution> substitutions(const Preorder& p, int k) {
  auto unit = [&](int i, const Rational& scale, const Rational& shift) {
    CurSubstitution s{QVector::Zero(k), shift};
    s.coeffs[i] = scale;
    return s;
  };
  int c = p.rank[k], classes = p.classes();
  for (int e = 0; e < k; ++e)
    if (p.rank[e] == c) return {unit(e, 1, 0)};
  if (k == 0) return {{QVector::Zero(0), Rational(1)}, {QVector::Zero(0), Rational(2)}};
  if (c == 0) {
    int below = p.members(1).front();
    return {unit(below, 1, -1), unit(below, 1, -2)};
  }
  if (c == classes - 1) {
    int above = p.members(c - 1).front();
    return {unit(above, 1, 1), unit(above, 1, 2)};
  }
  int lo = p.members(c - 1).front(), hi = p.members(c + 1).front();
  CurSubstitution a{QVector::Zero(k), Rational(0)}, b{QVector::Zero(k), Rational(0)};
  a.coeffs[lo] = Rational(1, 3);
  a.coeffs[hi] = Rational(2, 3);
  b.coeffs[lo] = Rational(2, 3);
  b.coeffs[hi] = Rational(1, 3);
  return {a, b};
}

QAffineMap transition_map(const Transition& t, int k, int l, const CurSubstitution& s) {
  int n = k + l;
  QAffineMap f{QMatrix::Zero(n, n), QVector::Zero(n)};
  for (int i = 0; i < k; ++i) {
    int src = t.update.control_source[i];
    if (src < k) {
      f.matrix(i, src) = 1;
    } else {
      f.matrix.row(i).head(k) = s.coeffs.transpose();
      f.offset[i] = s.constant;
    }
  }
  const QMatrix& b = t.update.data_matrix;
  for (int j = 0; j < l; ++j) {
    const Rational& bc = b(j, n);
    for (int c = 0; c < n; ++c) f.matrix(k + j, c) = b(j, c);
    if (bc != 0) {
      for (int i = 0; i < k; ++i) f.matrix(k + j, i) += bc * s.coeffs[i];
    }
    f.offset[k + j] = t.update.data_offset[j] + bc * s.constant;
  }
  return f;
}

}  // namespace

ApTranslation raq_to_ap(const Raq& a) {
  a.validate();
  for (std::size_t t = 0; t < a.transitions.size(); ++t) {
    std::set<Rational> cs;
    collect_constants(a.transitions[t].guard, cs);
    if (!cs.empty()) throw UsageError(a.describe(static_cast<int>(t)) + ": guard constants must be moved to registers first");
  }
  int k = a.k, l = a.l;
  ApTranslation tr;
  tr.u0 = a.initial_values;
  tr.program.n = k + l;
  tr.program.initial = tr.program.add_state("entry");
  tr.origin.push_back(std::nullopt);

  auto outgoing = a.outgoing();
  std::map<std::pair<int, Preorder>, int> ids;
  std::deque<std::pair<int, Preorder>> work;
  std::vector<std::string> labels = a.control_labels();
  labels.push_back("cur");
  auto state_of = [&](int q, const Preorder& p) {
    auto [it, inserted] = ids.emplace(std::make_pair(q, p), static_cast<int>(tr.program.states.size()));
    if (inserted) {
      tr.program.add_state(a.states[q] + "|" + to_string(p, labels));
      tr.origin.push_back(OrderedApState{a.states[q], p});
      work.emplace_back(q, p);
    }
    return it->second;
  };
  auto add_edge = [&](int src, QAffineMap f, int dst, int raq_t, CurSubstitution s) {
    tr.program.transitions.push_back({src, std::move(f), dst});
    tr.raq_transition.push_back(raq_t);
    tr.substitution.push_back(std::move(s));
  };

  Preorder start = preorder_of(QVector(a.initial_values.head(k)));
  int q0 = a.state_index(a.initial);
  for (const auto& p : insert_cur(start))
    add_edge(tr.program.initial, QAffineMap::identity(k + l), state_of(q0, p), -1, {QVector::Zero(k), Rational(0)});

  std::map<Preorder, std::vector<Preorder>> targets_cache;
  while (!work.empty()) {
    auto [q, p] = work.front();
    work.pop_front();
    int src = ids.at({q, p});
    std::vector<CurSubstitution> subs;
    for (int ti : outgoing[q]) {
      const Transition& t = a.transitions[ti];
      if (!eval_guard_under(t.guard, p, k)) continue;
      if (subs.empty()) subs = substitutions(p, k);
      std::vector<int> raw(k);
      for (int i = 0; i < k; ++i) raw[i] = p.rank[t.update.control_source[i]];
      Preorder px = densify(raw);
      auto it = targets_cache.find(px);
      if (it == targets_cache.end()) it = targets_cache.emplace(px, insert_cur(px)).first;
      int qt = a.state_index(t.target);
      for (const auto& s : subs) {
        QAffineMap f = transition_map(t, k, l, s);
        for (const auto& target : it->second) add_edge(src, f, state_of(qt, target), ti, s);
      }
    }
  }
  return tr;
}

}  // namespace raq
