#pragma once

// Total preorders over a small set of elements (control variables, usually
// with the current input as the last element).

#include <span>
#include <string>
#include <vector>

#include "raq/exactq.hpp"

namespace raq {

// Dense ranks: rank[e] in 0..classes()-1, elements of equal rank are equal.
struct Preorder {
  std::vector<int> rank;

  int size() const { return static_cast<int>(rank.size()); }
  int classes() const;
  // Elements of class c in increasing index order.
  std::vector<int> members(int c) const;
  // Restriction to the first n elements, re-densified.
  Preorder prefix(int n) const;

  auto operator<=>(const Preorder&) const = default;
};

// Compresses arbitrary comparable ranks into dense ones.
Preorder densify(std::span<const int> raw);
Preorder preorder_of(std::span<const Rational> values);
Preorder preorder_of(const QVector& values);

// A sequence form z1 ⊛ z2 ⊛ ... ⊛ zm with ⊛ ∈ {<, =}. Several sequence forms
// can denote the same preorder.
struct SequenceOrdering {
  std::vector<int> order;
  std::vector<bool> strict;  // strict[i] relates order[i] and order[i+1]

  Preorder preorder() const;
};

// All m!·2^(m-1) sequence forms (one empty form when m = 0).
std::vector<SequenceOrdering> enumerate_orderings(int m);
// All distinct total preorders on m elements (ordered Bell numbers).
std::vector<Preorder> enumerate_preorders(int m);

// names[e] is used for element e.
std::string to_string(const Preorder& p, std::span<const std::string> names);

}  // namespace raq
