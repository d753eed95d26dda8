#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace xling {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

/// Scales every nonzero row to unit Euclidean norm; zero rows are left alone.
template <typename Derived>
void normalize_rows(Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  for (Index i = 0; i < m.rows(); ++i) {
    const Scalar n = m.row(i).norm();
    if (n > Scalar(0)) m.row(i) /= n;
  }
}

/// Subtracts the column mean from every row.
template <typename Derived>
void center_columns(Eigen::MatrixBase<Derived>& m) {
  if (m.rows() == 0) return;
  const auto mean = m.colwise().mean().eval();
  m.rowwise() -= mean;
}

/// Copy of `m` with unit-norm rows.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
unit_rows(const Eigen::MatrixBase<Derived>& m) {
  Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> out = m;
  normalize_rows(out);
  return out;
}

/// Max-abs deviation of W·Wᵀ from the identity.
template <typename Derived>
typename Derived::Scalar orthogonality_error(const Eigen::MatrixBase<Derived>& w) {
  using Plain = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Plain g = w * w.transpose();
  return (g - Plain::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
}

/// Pairwise Euclidean distances between the rows of `m`.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
pairwise_distances(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  using Plain = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Plain gram = m * m.transpose();
  const Index n = gram.rows();
  Plain d(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      if (i == j) {
        d(i, j) = Scalar(0);
        continue;
      }
      const Scalar scale = gram(i, i) + gram(j, j);
      const Scalar sq = scale - Scalar(2) * gram(i, j);
      // Gram-based differences cancel badly for near-coincident rows.
      d(i, j) = sq > Scalar(1e-8) * scale ? std::sqrt(sq) : (m.row(i) - m.row(j)).norm();
    }
  }
  return d;
}

}  // namespace xling
