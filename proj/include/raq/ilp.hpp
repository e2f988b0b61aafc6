#pragma once

// Exact integer linear feasibility over non-negative integer variables:
// two-phase simplex on rationals with Bland's rule, branch-and-bound on
// fractional values, and caller-supplied lazy branching on integral points.

#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "raq/exactq.hpp"

namespace raq {

enum class Relation { le, eq, ge };

// Σ coeff·var (rel) rhs over integers.
struct LinearConstraint {
  std::vector<std::pair<int, Integer>> terms;
  Relation rel = Relation::le;
  Integer rhs;
  std::string family;  // grouping label used when printing

  bool holds(std::span<const Integer> values) const;
};

// Clears denominators of a rational constraint. With strict, `>` or `<` is
// meant (rel must be le or ge) and becomes a non-strict integer bound.
LinearConstraint integer_constraint(const std::vector<std::pair<int, Rational>>& terms, Relation rel,
                                    const Rational& rhs, bool strict, std::string family);

struct LpResult {
  bool feasible = false;
  std::vector<Rational> x;
};
// Minimises cost·x subject to the rows and x ≥ 0. cost must be non-negative
// so that the minimum exists whenever the rows are feasible. Throws
// ResourceError when the dense tableau would exceed 4 million entries.
LpResult solve_lp(int n, std::span<const LinearConstraint> rows, std::span<const Rational> cost);

struct IlpOptions {
  std::size_t node_cap = 20000;
};

// Given an integral point satisfying the rows, returns an empty list to
// accept it, or alternative constraint sets (each cutting the point off) that
// together cover every acceptable solution.
using LazyBranching = std::function<std::vector<std::vector<LinearConstraint>>(const std::vector<Integer>&)>;

struct IlpResult {
  bool feasible = false;
  std::vector<Integer> x;
  std::size_t nodes = 0;
};
// Searches for x ∈ N^n satisfying the rows, minimising Σx at each node.
// Throws ResourceError when more than options.node_cap nodes are explored.
IlpResult solve_ilp(int n, std::vector<LinearConstraint> rows, const IlpOptions& options = {},
                    const LazyBranching& lazy = {});

}  // namespace raq
