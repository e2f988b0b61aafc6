#pragma once

// Exact rational scalars and the small amount of linear algebra the decision
// procedures need: row reduction, null spaces and affine spaces kept in
// reduced echelon form so membership is a single pass.

#include <Eigen/Dense>
#include <boost/multiprecision/eigen.hpp>
#include <boost/multiprecision/gmp.hpp>

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "raq/errors.hpp"

namespace raq {

using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int,
                                              boost::multiprecision::et_off>;
using Rational = boost::multiprecision::number<boost::multiprecision::gmp_rational,
                                               boost::multiprecision::et_off>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using QVector = Vector<Rational>;
using QMatrix = Matrix<Rational>;
using Index = Eigen::Index;

// Accepts "3", "-7/2" and finite decimals such as "0.25" or "-1.5".
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& value);
Rational floor_of(const Rational& value);
Rational ceil_of(const Rational& value);
bool is_integer(const Rational& value);

QVector qvector(std::initializer_list<Rational> entries);
QVector zero_vector(Index n);
std::string to_string(const QVector& v);

template <typename Scalar>
bool is_zero(const Vector<Scalar>& v) {
  for (Index i = 0; i < v.size(); ++i)
    if (v[i] != 0) return false;
  return true;
}

// Strict weak order on vectors, for use as keys in ordered containers.
struct VectorLess {
  template <typename Scalar>
  bool operator()(const Vector<Scalar>& a, const Vector<Scalar>& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    for (Index i = 0; i < a.size(); ++i) {
      if (a[i] < b[i]) return true;
      if (b[i] < a[i]) return false;
    }
    return false;
  }
};

template <typename Scalar>
struct Echelon {
  Matrix<Scalar> rows;          // reduced row echelon form, zero rows dropped
  std::vector<Index> pivots;    // pivot column of each row
};

template <typename Scalar>
Echelon<Scalar> row_reduce(Matrix<Scalar> m) {
  std::vector<Index> pivots;
  Index r = 0;
  for (Index c = 0; c < m.cols() && r < m.rows(); ++c) {
    Index p = r;
    while (p < m.rows() && m(p, c) == 0) ++p;
    if (p == m.rows()) continue;
    m.row(r).swap(m.row(p));
    Scalar inv = Scalar(1) / m(r, c);
    m.row(r) *= inv;
    for (Index i = 0; i < m.rows(); ++i) {
      if (i == r || m(i, c) == 0) continue;
      Scalar f = m(i, c);
      m.row(i) -= f * m.row(r);
    }
    pivots.push_back(c);
    ++r;
  }
  Echelon<Scalar> e;
  e.rows = m.topRows(r);
  e.pivots = std::move(pivots);
  return e;
}

template <typename Scalar>
Index rank(const Matrix<Scalar>& m) {
  return static_cast<Index>(row_reduce(m).pivots.size());
}

// Some solution of a x = b (free variables set to zero), or nothing.
template <typename Scalar>
std::optional<Vector<Scalar>> solve_linear(const Matrix<Scalar>& a, const Vector<Scalar>& b) {
  if (a.rows() != b.size()) throw UsageError("solve_linear: dimension mismatch");
  Matrix<Scalar> aug(a.rows(), a.cols() + 1);
  aug << a, b;
  Echelon<Scalar> e = row_reduce(aug);
  Vector<Scalar> x = Vector<Scalar>::Zero(a.cols());
  for (std::size_t i = 0; i < e.pivots.size(); ++i) {
    if (e.pivots[i] == a.cols()) return std::nullopt;
    x[e.pivots[i]] = e.rows(static_cast<Index>(i), a.cols());
  }
  return x;
}

template <typename Scalar>
std::vector<Vector<Scalar>> null_space(const Matrix<Scalar>& a) {
  Echelon<Scalar> e = row_reduce(a);
  std::vector<bool> is_pivot(a.cols(), false);
  for (Index p : e.pivots) is_pivot[p] = true;
  std::vector<Vector<Scalar>> basis;
  for (Index f = 0; f < a.cols(); ++f) {
    if (is_pivot[f]) continue;
    Vector<Scalar> v = Vector<Scalar>::Zero(a.cols());
    v[f] = 1;
    for (std::size_t i = 0; i < e.pivots.size(); ++i) v[e.pivots[i]] = -e.rows(static_cast<Index>(i), f);
    basis.push_back(std::move(v));
  }
  return basis;
}

// Basis of the orthogonal complement of span(basis) inside Scalar^n.
// The input vectors must be linearly independent.
template <typename Scalar>
std::vector<Vector<Scalar>> orthogonal_complement(std::span<const Vector<Scalar>> basis, Index n) {
  Matrix<Scalar> m(static_cast<Index>(basis.size()), n);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (basis[i].size() != n) throw UsageError("orthogonal_complement: dimension mismatch");
    m.row(static_cast<Index>(i)) = basis[i].transpose();
  }
  if (rank(m) != static_cast<Index>(basis.size()))
    throw UsageError("orthogonal_complement: basis vectors are linearly dependent");
  return null_space(m);
}

template <typename Scalar>
class AffineSpace {
 public:
  explicit AffineSpace(Vector<Scalar> anchor) : anchor_(std::move(anchor)) {}

  static AffineSpace point(Vector<Scalar> p) { return AffineSpace(std::move(p)); }

  static AffineSpace full(Index n) {
    AffineSpace s(Vector<Scalar>::Zero(n));
    for (Index i = 0; i < n; ++i) s.extend(Vector<Scalar>::Unit(n, i));
    return s;
  }

  static AffineSpace from_basis(Vector<Scalar> anchor, std::span<const Vector<Scalar>> basis) {
    AffineSpace s(std::move(anchor));
    for (const auto& b : basis) {
      if (b.size() != s.ambient_dim()) throw UsageError("affine space: basis vector has wrong dimension");
      if (!s.add_direction(b)) throw UsageError("affine space: basis vectors are linearly dependent");
    }
    return s;
  }

  static AffineSpace from_points(std::span<const Vector<Scalar>> points) {
    if (points.empty()) throw UsageError("affine hull of an empty point set");
    AffineSpace s(points.front());
    for (const auto& p : points.subspan(1)) s.extend(p);
    return s;
  }

  Index ambient_dim() const { return anchor_.size(); }
  Index dim() const { return static_cast<Index>(basis_.size()); }
  const Vector<Scalar>& anchor() const { return anchor_; }
  const std::vector<Vector<Scalar>>& basis() const { return basis_; }

  bool contains(const Vector<Scalar>& v) const {
    if (v.size() != ambient_dim()) throw UsageError("affine membership: dimension mismatch");
    Vector<Scalar> w = v - anchor_;
    reduce(w);
    return is_zero(w);
  }

  // Grows the space to aff(space ∪ {v}); returns whether the dimension grew.
  bool extend(const Vector<Scalar>& v) {
    if (v.size() != ambient_dim()) throw UsageError("affine extension: dimension mismatch");
    return add_direction(v - anchor_);
  }

  // Every point of `other` lies in this space.
  bool includes(const AffineSpace& other) const {
    if (!contains(other.anchor_)) return false;
    for (const auto& b : other.basis_)
      if (!contains(anchor_ + b)) return false;
    return true;
  }

  bool operator==(const AffineSpace& other) const {
    return dim() == other.dim() && includes(other);
  }

 private:
  void reduce(Vector<Scalar>& w) const {
    for (std::size_t i = 0; i < pivots_.size(); ++i) {
      Scalar f = w[pivots_[i]];
      if (f != 0) w -= f * echelon_[i];
    }
  }

  bool add_direction(const Vector<Scalar>& direction) {
    Vector<Scalar> w = direction;
    reduce(w);
    Index p = 0;
    while (p < w.size() && w[p] == 0) ++p;
    if (p == w.size()) return false;
    w /= Scalar(w[p]);
    for (auto& row : echelon_) {
      Scalar f = row[p];
      if (f != 0) row -= f * w;
    }
    echelon_.push_back(w);
    pivots_.push_back(p);
    basis_.push_back(direction);
    return true;
  }

  Vector<Scalar> anchor_;
  std::vector<Vector<Scalar>> basis_;
  std::vector<Vector<Scalar>> echelon_;
  std::vector<Index> pivots_;
};

using QAffineSpace = AffineSpace<Rational>;

template <typename Scalar>
bool affine_member(const AffineSpace<Scalar>& space, const Vector<Scalar>& v) {
  return space.contains(v);
}

template <typename Scalar>
AffineSpace<Scalar> affine_extend(AffineSpace<Scalar> space, const Vector<Scalar>& v) {
  space.extend(v);
  return space;
}

// v ↦ M v + a
template <typename Scalar>
struct AffineMap {
  Matrix<Scalar> matrix;
  Vector<Scalar> offset;

  static AffineMap identity(Index n) {
    return {Matrix<Scalar>::Identity(n, n), Vector<Scalar>::Zero(n)};
  }

  Vector<Scalar> operator()(const Vector<Scalar>& v) const {
    if (v.size() != matrix.cols()) throw UsageError("affine map: dimension mismatch");
    return matrix * v + offset;
  }
};

using QAffineMap = AffineMap<Rational>;

template <typename Scalar>
Vector<Scalar> apply_affine(const AffineMap<Scalar>& f, const Vector<Scalar>& v) {
  return f(v);
}

// (outer ∘ inner)(v) = outer(inner(v))
template <typename Scalar>
AffineMap<Scalar> compose(const AffineMap<Scalar>& outer, const AffineMap<Scalar>& inner) {
  return {outer.matrix * inner.matrix, outer.matrix * inner.offset + outer.offset};
}

extern template Echelon<Rational> row_reduce(QMatrix);
extern template class AffineSpace<Rational>;

}  // namespace raq

namespace raq {

// Equality that also tolerates differing shapes (Eigen's operator== asserts).
template <typename Derived1, typename Derived2>
bool same_entries(const Eigen::MatrixBase<Derived1>& a, const Eigen::MatrixBase<Derived2>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      if (a(i, j) != b(i, j)) return false;
  return true;
}

}  // namespace raq
