#pragma once

// Exact linear algebra over a field scalar (Rational). Eigen's own
// decompositions pick pivots by magnitude thresholds, which is meaningless
// for exact types, so elimination is done here.

#include "conecrafter/exact.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace conecrafter {

template <typename Scalar>
struct RowEchelon {
  Matrix<Scalar> reduced;      // reduced row echelon form
  std::vector<Index> pivots;   // pivot column of each nonzero row
};

template <typename Derived>
RowEchelon<typename Derived::Scalar> rref(const Eigen::MatrixBase<Derived>& input) {
  using Scalar = typename Derived::Scalar;
  Matrix<Scalar> m = input;
  std::vector<Index> pivots;
  Index row = 0;
  for (Index col = 0; col < m.cols() && row < m.rows(); ++col) {
    Index found = -1;
    for (Index r = row; r < m.rows(); ++r) {
      if (m(r, col) != 0) {
        found = r;
        break;
      }
    }
    if (found < 0) continue;
    m.row(row).swap(m.row(found));
    const Scalar inv = Scalar(1) / m(row, col);
    m.row(row) *= inv;
    for (Index r = 0; r < m.rows(); ++r) {
      if (r == row || m(r, col) == 0) continue;
      const Scalar factor = m(r, col);
      m.row(r) -= factor * m.row(row);
    }
    pivots.push_back(col);
    ++row;
  }
  return {std::move(m), std::move(pivots)};
}

template <typename Derived>
Index rank(const Eigen::MatrixBase<Derived>& m) {
  return static_cast<Index>(rref(m).pivots.size());
}

/// Basis of the right null space, one vector per column.
template <typename Derived>
Matrix<typename Derived::Scalar> kernel(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  const auto echelon = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (Index p : echelon.pivots) is_pivot[p] = true;
  std::vector<Index> free_cols;
  for (Index c = 0; c < m.cols(); ++c)
    if (!is_pivot[c]) free_cols.push_back(c);
  Matrix<Scalar> basis = Matrix<Scalar>::Zero(m.cols(), static_cast<Index>(free_cols.size()));
  for (std::size_t k = 0; k < free_cols.size(); ++k) {
    const Index f = free_cols[k];
    basis(f, static_cast<Index>(k)) = Scalar(1);
    for (std::size_t r = 0; r < echelon.pivots.size(); ++r)
      basis(echelon.pivots[r], static_cast<Index>(k)) = -echelon.reduced(static_cast<Index>(r), f);
  }
  return basis;
}

/// Basis of the column space, chosen among the original columns.
template <typename Derived>
Matrix<typename Derived::Scalar> column_space(const Eigen::MatrixBase<Derived>& m) {
  const auto echelon = rref(m);
  Matrix<typename Derived::Scalar> out(m.rows(), static_cast<Index>(echelon.pivots.size()));
  for (std::size_t k = 0; k < echelon.pivots.size(); ++k)
    out.col(static_cast<Index>(k)) = m.col(echelon.pivots[k]);
  return out;
}

/// Some solution x of a x = b, if one exists.
template <typename DerivedA, typename DerivedB>
std::optional<Matrix<typename DerivedA::Scalar>> solve(const Eigen::MatrixBase<DerivedA>& a,
                                                       const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  Matrix<Scalar> augmented(a.rows(), a.cols() + b.cols());
  augmented << a, b;
  const auto echelon = rref(augmented);
  Matrix<Scalar> x = Matrix<Scalar>::Zero(a.cols(), b.cols());
  for (std::size_t r = 0; r < echelon.pivots.size(); ++r) {
    const Index p = echelon.pivots[r];
    if (p >= a.cols()) return std::nullopt;
    x.row(p) = echelon.reduced.block(static_cast<Index>(r), a.cols(), 1, b.cols());
  }
  return x;
}

template <typename Derived>
Matrix<typename Derived::Scalar> inverse(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  if (m.rows() != m.cols()) throw PreconditionError("inverse: matrix is not square");
  Matrix<Scalar> augmented(m.rows(), 2 * m.cols());
  augmented << m, Matrix<Scalar>::Identity(m.rows(), m.cols());
  const auto echelon = rref(augmented);
  if (static_cast<Index>(echelon.pivots.size()) < m.rows() ||
      (m.rows() > 0 && echelon.pivots.back() >= m.cols()))
    throw PreconditionError("inverse: matrix is singular");
  return echelon.reduced.rightCols(m.cols());
}

template <typename Derived>
typename Derived::Scalar determinant(const Eigen::MatrixBase<Derived>& input) {
  using Scalar = typename Derived::Scalar;
  Matrix<Scalar> m = input;
  Scalar det(1);
  for (Index col = 0; col < m.cols(); ++col) {
    Index found = -1;
    for (Index r = col; r < m.rows(); ++r)
      if (m(r, col) != 0) {
        found = r;
        break;
      }
    if (found < 0) return Scalar(0);
    if (found != col) {
      m.row(col).swap(m.row(found));
      det = -det;
    }
    det *= m(col, col);
    for (Index r = col + 1; r < m.rows(); ++r) {
      if (m(r, col) == 0) continue;
      const Scalar factor = m(r, col) / m(col, col);
      m.row(r) -= factor * m.row(col);
    }
  }
  return det;
}

/// Leading principal minors, in order of size.
template <typename Derived>
std::vector<typename Derived::Scalar> leading_minors(const Eigen::MatrixBase<Derived>& m) {
  std::vector<typename Derived::Scalar> out;
  for (Index k = 1; k <= m.rows(); ++k) out.push_back(determinant(m.topLeftCorner(k, k)));
  return out;
}

/// Coordinates with respect to a fixed family of independent column vectors.
/// The pivot rows and their inverse are computed once, so repeated lookups are
/// a small matrix-vector product followed by an exact membership check.
class CoordinateSystem {
 public:
  CoordinateSystem() = default;
  explicit CoordinateSystem(RationalMatrix basis);

  Index dimension() const { return basis_.cols(); }
  Index ambient() const { return basis_.rows(); }
  const RationalMatrix& basis() const { return basis_; }

  /// Coordinates of v, or nullopt when v is outside the span.
  std::optional<RationalVector> coordinates(const RationalVector& v) const;
  /// As coordinates(), but throws when v is outside the span.
  RationalVector require(const RationalVector& v, const char* what) const;

 private:
  RationalMatrix basis_;
  std::vector<Index> rows_;
  RationalMatrix pivot_inverse_;
};

/// Row-major flattening of a matrix into a column vector.
template <typename Derived>
Vector<typename Derived::Scalar> flatten(const Eigen::MatrixBase<Derived>& m) {
  Vector<typename Derived::Scalar> v(m.rows() * m.cols());
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) v(i * m.cols() + j) = m(i, j);
  return v;
}

template <typename Derived>
Matrix<typename Derived::Scalar> unflatten(const Eigen::MatrixBase<Derived>& v, Index rows,
                                           Index cols) {
  Matrix<typename Derived::Scalar> m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = v(i * cols + j);
  return m;
}

}  // namespace conecrafter
