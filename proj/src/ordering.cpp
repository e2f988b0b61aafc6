#include "raq/ordering.hpp"

#include <algorithm>
#include <numeric>

namespace raq {

int Preorder::classes() const {
  int c = 0;
  for (int r : rank) c = std::max(c, r + 1);
  return c;
}

std::vector<int> Preorder::members(int c) const {
  std::vector<int> out;
  for (int e = 0; e < size(); ++e)
    if (rank[e] == c) out.push_back(e);
  return out;
}

Preorder Preorder::prefix(int n) const {
  return densify(std::span<const int>(rank.data(), static_cast<std::size_t>(n)));
}

Preorder densify(std::span<const int> raw) {
  std::vector<int> sorted(raw.begin(), raw.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  Preorder p;
  p.rank.reserve(raw.size());
  for (int r : raw)
    p.rank.push_back(static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), r) - sorted.begin()));
  return p;
}

Preorder preorder_of(std::span<const Rational> values) {
  std::vector<Rational> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  Preorder p;
  for (const auto& v : values)
    p.rank.push_back(static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), v) - sorted.begin()));
  return p;
}

Preorder preorder_of(const QVector& values) {
  return preorder_of(std::span<const Rational>(values.data(), static_cast<std::size_t>(values.size())));
}

Preorder SequenceOrdering::preorder() const {
  Preorder p;
  p.rank.assign(order.size(), 0);
  int r = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i > 0 && strict[i - 1]) ++r;
    p.rank[order[i]] = r;
  }
  return p;
}

std::vector<SequenceOrdering> enumerate_orderings(int m) {
  std::vector<SequenceOrdering> out;
  std::vector<int> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  int gaps = std::max(0, m - 1);
  do {
    for (int mask = 0; mask < (1 << gaps); ++mask) {
      SequenceOrdering s;
      s.order = perm;
      for (int i = 0; i < gaps; ++i) s.strict.push_back((mask >> i) & 1);
      out.push_back(std::move(s));
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

std::vector<Preorder> enumerate_preorders(int m) {
  // Each element picks a rank in 0..m-1; keep the assignments that are dense.
  std::vector<Preorder> out;
  std::vector<int> rank(m, 0);
  while (true) {
    Preorder p = densify(rank);
    if (p.rank == rank) out.push_back(p);
    int i = 0;
    while (i < m && rank[i] == m - 1) rank[i++] = 0;
    if (i == m) break;
    ++rank[i];
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string to_string(const Preorder& p, std::span<const std::string> names) {
  std::string out;
  for (int c = 0; c < p.classes(); ++c) {
    if (c) out += "<";
    bool first = true;
    for (int e : p.members(c)) {
      if (!first) out += "=";
      out += names[e];
      first = false;
    }
  }
  return out;
}

}  // namespace raq
