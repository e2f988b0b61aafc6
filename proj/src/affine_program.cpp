#include "raq/affine_program.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace raq {

int AffineProgram::add_state(std::string name) {
  states.push_back(std::move(name));
  return static_cast<int>(states.size()) - 1;
}

int AffineProgram::state_index(const std::string& name) const {
  auto it = std::find(states.begin(), states.end(), name);
  if (it == states.end()) throw UsageError("unknown affine-program state '" + name + "'");
  return static_cast<int>(it - states.begin());
}

std::vector<std::vector<int>> AffineProgram::outgoing() const {
  std::vector<std::vector<int>> out(states.size());
  for (std::size_t t = 0; t < transitions.size(); ++t) out[transitions[t].source].push_back(static_cast<int>(t));
  return out;
}

void AffineProgram::validate() const {
  int s = static_cast<int>(states.size());
  if (s == 0) throw UsageError("affine program has no states");
  if (initial < 0 || initial >= s) throw UsageError("affine program: initial state out of range");
  if (n < 0) throw UsageError("affine program: negative dimension");
  for (std::size_t t = 0; t < transitions.size(); ++t) {
    const auto& tr = transitions[t];
    std::string where = "affine-program transition #" + std::to_string(t);
    if (tr.source < 0 || tr.source >= s || tr.target < 0 || tr.target >= s)
      throw UsageError(where + ": state out of range");
    if (tr.map.matrix.rows() != n || tr.map.matrix.cols() != n || tr.map.offset.size() != n)
      throw UsageError(where + ": map must be " + std::to_string(n) + "-dimensional");
  }
}

std::vector<int> KarrResult::path_to(const AffineProgram& p, int s, int g) const {
  std::vector<int> path;
  while (provenance[s][g].transition >= 0) {
    const Provenance& pr = provenance[s][g];
    path.push_back(pr.transition);
    s = p.transitions[pr.transition].source;
    g = pr.parent;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

namespace {

// Affine maps from translated automata are mostly permutations; applying the
// nonzero entries only is much cheaper than a dense product.
struct SparseMap {
  std::vector<std::vector<std::pair<Index, Rational>>> rows;
  QVector offset;

  explicit SparseMap(const QAffineMap& f) : rows(f.matrix.rows()), offset(f.offset) {
    for (Index i = 0; i < f.matrix.rows(); ++i)
      for (Index j = 0; j < f.matrix.cols(); ++j)
        if (f.matrix(i, j) != 0) rows[i].emplace_back(j, f.matrix(i, j));
  }

  QVector operator()(const QVector& v) const {
    QVector out = offset;
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (const auto& [j, c] : rows[i]) {
        if (c == 1) out[static_cast<Index>(i)] += v[j];
        else out[static_cast<Index>(i)] += c * v[j];
      }
    return out;
  }
};

}  // namespace

KarrResult karr(const AffineProgram& p, const QVector& u0) {
  p.validate();
  if (u0.size() != p.n) throw UsageError("karr: initial vector has the wrong dimension");
  std::size_t s = p.states.size();
  KarrResult r;
  r.hull.assign(s, std::nullopt);
  r.generators.assign(s, {});
  r.provenance.assign(s, {});
  std::vector<SparseMap> maps;
  maps.reserve(p.transitions.size());
  for (const auto& t : p.transitions) maps.emplace_back(t.map);
  auto outgoing = p.outgoing();

  std::deque<std::pair<int, int>> work;  // (state, generator index)
  r.hull[p.initial] = QAffineSpace::point(u0);
  r.generators[p.initial].push_back(u0);
  r.provenance[p.initial].push_back({});
  work.emplace_back(p.initial, 0);
  while (!work.empty()) {
    auto [src, g] = work.front();
    work.pop_front();
    for (int t : outgoing[src]) {
      int dst = p.transitions[t].target;
      QVector v = maps[t](r.generators[src][g]);
      ++r.applications;
      bool added = false;
      if (!r.hull[dst]) {
        r.hull[dst] = QAffineSpace::point(v);
        added = true;
      } else {
        added = r.hull[dst]->extend(v);
      }
      if (added) {
        r.generators[dst].push_back(std::move(v));
        r.provenance[dst].push_back({t, g});
        work.emplace_back(dst, static_cast<int>(r.generators[dst].size()) - 1);
      }
    }
  }
  return r;
}

bool invariant_holds(const AffineProgram& p, const QVector& u0, int state, const QAffineSpace& h) {
  if (state < 0 || state >= static_cast<int>(p.states.size())) throw UsageError("invariant: state out of range");
  if (h.ambient_dim() != p.n) throw UsageError("invariant: space has the wrong dimension");
  KarrResult r = karr(p, u0);
  for (const auto& g : r.generators[state])
    if (!h.contains(g)) return false;
  return true;
}

std::size_t small_model_bound_ap(const AffineProgram& p) {
  return static_cast<std::size_t>(p.n + 1) * p.states.size();
}

std::vector<std::set<QVector, VectorLess>> brute_reachable(const AffineProgram& p, const QVector& u0,
                                                           std::size_t max_len, const BruteReachOptions& options) {
  p.validate();
  if (u0.size() != p.n) throw UsageError("brute_reachable: initial vector has the wrong dimension");
  std::vector<std::set<QVector, VectorLess>> seen(p.states.size());
  auto outgoing = p.outgoing();
  std::vector<std::pair<int, QVector>> frontier{{p.initial, u0}};
  seen[p.initial].insert(u0);
  std::size_t total = 1;
  for (std::size_t depth = 0; depth < max_len && !frontier.empty(); ++depth) {
    std::vector<std::pair<int, QVector>> next;
    for (const auto& [s, v] : frontier)
      for (int t : outgoing[s]) {
        const auto& tr = p.transitions[t];
        QVector w = tr.map(v);
        if (seen[tr.target].insert(w).second) {
          if (++total > options.cap)
            throw ResourceError("brute_reachable: more than " + std::to_string(options.cap) + " reachable vectors");
          next.emplace_back(tr.target, std::move(w));
        }
      }
    frontier = std::move(next);
  }
  return seen;
}

}  // namespace raq
