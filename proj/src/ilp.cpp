#include "raq/ilp.hpp"

#include <algorithm>

namespace raq {

namespace mp = boost::multiprecision;

bool LinearConstraint::holds(std::span<const Integer> values) const {
  Integer lhs = 0;
  for (const auto& [v, c] : terms) lhs += c * values[v];
  switch (rel) {
    case Relation::le: return lhs <= rhs;
    case Relation::eq: return lhs == rhs;
    case Relation::ge: return lhs >= rhs;
  }
  return false;
}

LinearConstraint integer_constraint(const std::vector<std::pair<int, Rational>>& terms, Relation rel,
                                    const Rational& rhs, bool strict, std::string family) {
  if (strict && rel == Relation::eq) throw UsageError("integer_constraint: strict equality");
  Integer scale = mp::denominator(rhs);
  for (const auto& [v, c] : terms) scale = mp::lcm(scale, Integer(mp::denominator(c)));
  LinearConstraint out;
  out.rel = rel;
  out.family = std::move(family);
  for (const auto& [v, c] : terms) {
    if (c == 0) continue;
    Rational s = c * Rational(scale);
    out.terms.emplace_back(v, mp::numerator(s));
  }
  out.rhs = mp::numerator(rhs * Rational(scale));
  if (strict) out.rhs += rel == Relation::ge ? 1 : -1;
  return out;
}

namespace {

// Dense tableau; column `width` holds the right-hand side.
class Tableau {
 public:
  Tableau(int rows, int width) : t_(rows, std::vector<Rational>(width + 1)), basis_(rows, -1), width_(width) {}

  std::vector<Rational>& row(int i) { return t_[i]; }
  int rows() const { return static_cast<int>(t_.size()); }
  int& basis(int i) { return basis_[i]; }
  const Rational& rhs(int i) const { return t_[i][width_]; }

  void erase_row(int i) {
    t_.erase(t_.begin() + i);
    basis_.erase(basis_.begin() + i);
  }

  void pivot(int r, int c, std::vector<Rational>& objective) {
    std::vector<Rational>& pr = t_[r];
    Rational p = pr[c];
    std::vector<int> nz;
    for (int j = 0; j <= width_; ++j)
      if (pr[j] != 0) {
        pr[j] /= p;
        nz.push_back(j);
      }
    auto eliminate = [&](std::vector<Rational>& row) {
      if (row[c] == 0) return;
      Rational f = row[c];
      for (int j : nz) row[j] -= f * pr[j];
    };
    for (int i = 0; i < rows(); ++i)
      if (i != r) eliminate(t_[i]);
    eliminate(objective);
    basis_[r] = c;
  }

  // Minimises cost over the allowed columns with Bland's rule. Returns false
  // when the objective is unbounded below.
  bool minimise(std::span<const Rational> cost, const std::vector<bool>& allowed) {
    std::vector<Rational> z(width_ + 1);
    for (int j = 0; j < width_; ++j) z[j] = cost[j];
    for (int i = 0; i < rows(); ++i) {
      const Rational& cb = cost[basis_[i]];
      if (cb == 0) continue;
      for (int j = 0; j <= width_; ++j)
        if (t_[i][j] != 0) z[j] -= cb * t_[i][j];
    }
    for (;;) {
      int enter = -1;
      for (int j = 0; j < width_ && enter < 0; ++j)
        if (allowed[j] && z[j] < 0) enter = j;
      if (enter < 0) return true;
      int leave = -1;
      Rational best;
      for (int i = 0; i < rows(); ++i) {
        if (t_[i][enter] <= 0) continue;
        Rational ratio = t_[i][width_] / t_[i][enter];
        if (leave < 0 || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter, z);
    }
  }

 private:
  std::vector<std::vector<Rational>> t_;
  std::vector<int> basis_;
  int width_;
};

constexpr std::size_t max_tableau_entries = 4'000'000;

}  // namespace

LpResult solve_lp(int n, std::span<const LinearConstraint> all_rows, std::span<const Rational> cost) {
  // x ≥ 0 is built into the tableau, so single-variable lower bounds at or
  // below 0 are dropped.
  std::vector<LinearConstraint> rows;
  for (const auto& r : all_rows) {
    if (r.terms.size() == 1 && r.terms[0].second > 0 && r.rel == Relation::ge && r.rhs <= 0) continue;
    rows.push_back(r);
  }
  int m = static_cast<int>(rows.size());
  std::vector<Relation> rel(m);
  std::vector<int> sign(m, 1);
  int slacks = 0, artificials = 0;
  for (int i = 0; i < m; ++i) {
    rel[i] = rows[i].rel;
    if (rows[i].rhs < 0) {
      sign[i] = -1;
      if (rel[i] == Relation::le) rel[i] = Relation::ge;
      else if (rel[i] == Relation::ge) rel[i] = Relation::le;
    }
    if (rel[i] != Relation::eq) ++slacks;
    if (rel[i] != Relation::le) ++artificials;
  }
  int width = n + slacks + artificials;
  if (static_cast<double>(m + 1) * (width + 1) > static_cast<double>(max_tableau_entries))
    throw ResourceError("simplex: tableau of " + std::to_string(m + 1) + " x " + std::to_string(width + 1) +
                        " exceeds " + std::to_string(max_tableau_entries) + " entries");
  Tableau tab(m, width);
  int next_slack = n, next_art = n + slacks;
  for (int i = 0; i < m; ++i) {
    auto& r = tab.row(i);
    for (const auto& [v, c] : rows[i].terms) r[v] += Rational(c * sign[i]);
    r[width] = Rational(rows[i].rhs * sign[i]);
    if (rel[i] == Relation::le) {
      r[next_slack] = 1;
      tab.basis(i) = next_slack++;
    } else {
      if (rel[i] == Relation::ge) r[next_slack++] = -1;
      r[next_art] = 1;
      tab.basis(i) = next_art++;
    }
  }

  std::vector<bool> allowed(width, true);
  if (artificials > 0) {
    std::vector<Rational> phase1(width);
    for (int j = n + slacks; j < width; ++j) phase1[j] = 1;
    tab.minimise(phase1, allowed);
    Rational infeasibility = 0;
    for (int i = 0; i < tab.rows(); ++i)
      if (tab.basis(i) >= n + slacks) infeasibility += tab.rhs(i);
    if (infeasibility != 0) return {};
    // Artificials still basic sit at zero; pivot them out or drop the row.
    std::vector<Rational> dummy(width + 1);
    for (int i = tab.rows() - 1; i >= 0; --i) {
      if (tab.basis(i) < n + slacks) continue;
      int col = -1;
      for (int j = 0; j < n + slacks && col < 0; ++j)
        if (tab.row(i)[j] != 0) col = j;
      if (col < 0) tab.erase_row(i);
      else tab.pivot(i, col, dummy);
    }
    for (int j = n + slacks; j < width; ++j) allowed[j] = false;
  }
  std::vector<Rational> phase2(width);
  for (int j = 0; j < n; ++j) phase2[j] = cost[j];
  tab.minimise(phase2, allowed);

  LpResult out;
  out.feasible = true;
  out.x.assign(n, Rational(0));
  for (int i = 0; i < tab.rows(); ++i)
    if (tab.basis(i) < n) out.x[tab.basis(i)] = tab.rhs(i);
  return out;
}

IlpResult solve_ilp(int n, std::vector<LinearConstraint> rows, const IlpOptions& options, const LazyBranching& lazy) {
  std::vector<Rational> cost(n, Rational(1));
  IlpResult out;
  std::vector<std::vector<LinearConstraint>> stack{{}};
  while (!stack.empty()) {
    std::vector<LinearConstraint> extra = std::move(stack.back());
    stack.pop_back();
    if (++out.nodes > options.node_cap)
      throw ResourceError("solver: more than " + std::to_string(options.node_cap) + " branch-and-bound nodes");
    std::vector<LinearConstraint> all = rows;
    all.insert(all.end(), extra.begin(), extra.end());
    LpResult lp = solve_lp(n, all, cost);
    if (!lp.feasible) continue;
    int frac = -1;
    for (int j = 0; j < n && frac < 0; ++j)
      if (!is_integer(lp.x[j])) frac = j;
    if (frac >= 0) {
      LinearConstraint up{{{frac, Integer(1)}}, Relation::ge, mp::numerator(ceil_of(lp.x[frac])), "branch"};
      LinearConstraint down{{{frac, Integer(1)}}, Relation::le, mp::numerator(floor_of(lp.x[frac])), "branch"};
      auto e1 = extra;
      e1.push_back(up);
      stack.push_back(std::move(e1));
      extra.push_back(down);
      stack.push_back(std::move(extra));
      continue;
    }
    std::vector<Integer> x(n);
    for (int j = 0; j < n; ++j) x[j] = mp::numerator(lp.x[j]);
    std::vector<std::vector<LinearConstraint>> alternatives;
    if (lazy) alternatives = lazy(x);
    if (alternatives.empty()) {
      out.feasible = true;
      out.x = std::move(x);
      return out;
    }
    for (auto it = alternatives.rbegin(); it != alternatives.rend(); ++it) {
      auto e = extra;
      e.insert(e.end(), it->begin(), it->end());
      stack.push_back(std::move(e));
    }
  }
  return out;
}

}  // namespace raq
