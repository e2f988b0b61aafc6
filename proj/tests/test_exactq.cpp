#include <doctest.h>

#include "support.hpp"

using namespace raq;
using namespace raq::test;

namespace {

QMatrix random_matrix(std::mt19937& rng, int rows, int cols) {
  QMatrix m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = coin(rng, 0.4) ? Rational(0) : random_rational(rng, 3);
  return m;
}

}  // namespace

TEST_SUITE("exactq") {
  TEST_CASE("rational literals") {
    CHECK(parse_rational("3") == 3);
    CHECK(parse_rational("-7/2") == Rational(-7) / 2);
    CHECK(parse_rational("0.25") == Rational(1) / 4);
    CHECK(parse_rational("-1.5") == Rational(-3) / 2);
    CHECK_THROWS_AS(parse_rational("1/0"), UsageError);
    CHECK_THROWS_AS(parse_rational("abc"), UsageError);
    CHECK(to_string(Rational(-7) / 2) == "-7/2");
  }

  TEST_CASE("floor and ceiling round toward the right side") {
    CHECK(floor_of(Rational(-7) / 2) == -4);
    CHECK(ceil_of(Rational(-7) / 2) == -3);
    CHECK(floor_of(Rational(7) / 2) == 3);
    CHECK(floor_of(Rational(4)) == 4);
    CHECK(is_integer(Rational(6) / 3));
    CHECK_FALSE(is_integer(Rational(1) / 3));
  }

  TEST_CASE("rank is invariant under transposition and null space has the complementary dimension") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
      QMatrix m = random_matrix(rng, uniform(rng, 1, 4), uniform(rng, 1, 4));
      Index r = rank(m);
      CHECK(r == rank(QMatrix(m.transpose())));
      auto ns = null_space(m);
      CHECK(static_cast<Index>(ns.size()) == m.cols() - r);
      for (const auto& v : ns) CHECK(is_zero(QVector(m * v)));
    }
  }

  TEST_CASE("solve_linear finds a solution exactly when one exists") {
    std::mt19937 rng(12);
    for (int trial = 0; trial < 100; ++trial) {
      QMatrix a = random_matrix(rng, uniform(rng, 1, 4), uniform(rng, 1, 4));
      QVector x(a.cols());
      for (Index i = 0; i < x.size(); ++i) x[i] = random_rational(rng, 3);
      QVector b = a * x;
      auto s = solve_linear(a, b);
      REQUIRE(s.has_value());
      CHECK(same_entries(a * *s, b));
      // Perturbing b outside the column space makes the system unsolvable.
      if (rank(a) < a.rows()) {
        QVector y = null_space(QMatrix(a.transpose())).front();
        CHECK_FALSE(solve_linear(a, QVector(b + y)).has_value());
      }
    }
  }

  TEST_CASE("affine hull of points contains their affine combinations") {
    std::mt19937 rng(13);
    for (int trial = 0; trial < 60; ++trial) {
      int n = uniform(rng, 1, 4), count = uniform(rng, 1, 4);
      std::vector<QVector> pts;
      for (int i = 0; i < count; ++i) {
        QVector p(n);
        for (int j = 0; j < n; ++j) p[j] = random_rational(rng, 3);
        pts.push_back(p);
      }
      QAffineSpace s = QAffineSpace::from_points(pts);
      CHECK(s.dim() <= count - 1);
      for (const auto& p : pts) CHECK(s.contains(p));
      QVector combo = pts.front();
      for (int i = 1; i < count; ++i) combo += random_rational(rng, 3) * (pts[i] - pts.front());
      CHECK(s.contains(combo));
      // The hull is the smallest such space: its dimension matches the rank of the differences.
      QMatrix diffs(n, count);
      for (int i = 0; i < count; ++i) diffs.col(i) = pts[i] - pts.front();
      CHECK(s.dim() == rank(diffs));
      CHECK(s == QAffineSpace::from_points(std::vector<QVector>(pts.rbegin(), pts.rend())));
    }
  }

  TEST_CASE("orthogonal complement is orthogonal and complementary") {
    std::mt19937 rng(14);
    for (int trial = 0; trial < 60; ++trial) {
      int n = uniform(rng, 1, 4);
      QMatrix m = random_matrix(rng, uniform(rng, 1, n), n);
      Echelon<Rational> e = row_reduce(m);
      std::vector<QVector> basis;
      for (Index i = 0; i < e.rows.rows(); ++i) basis.push_back(e.rows.row(i).transpose());
      auto comp = orthogonal_complement<Rational>(basis, n);
      CHECK(basis.size() + comp.size() == static_cast<std::size_t>(n));
      for (const auto& b : basis)
        for (const auto& c : comp) CHECK(b.dot(c) == 0);
    }
  }

  TEST_CASE("affine map composition applies inner first") {
    QAffineMap f{QMatrix::Identity(2, 2) * Rational(2), qvector({1, 0})};
    QAffineMap g{QMatrix::Identity(2, 2), qvector({0, 3})};
    QVector v = qvector({1, 1});
    CHECK(same_entries(apply_affine(compose(f, g), v), apply_affine(f, apply_affine(g, v))));
  }
}
