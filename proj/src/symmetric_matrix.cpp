// SPDX-License-Identifier: Apache-2.0

#include "specpencil/symmetric_matrix.hpp"

#include <cmath>

namespace specpencil {

SymmetricMatrix SymmetricMatrix::fromDense(const Eigen::MatrixXd& m,
                                           double tol) {
  if (m.rows() != m.cols() || m.rows() < 1)
    throw DimensionMismatchError("fromDense: matrix must be square");
  const int n = static_cast<int>(m.rows());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(m(i, j) - m(j, i)) > tol)
        throw NotSymmetricError("fromDense: input matrix is not symmetric");
  SymmetricMatrix s(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) s.set(i, j, m(i, j));
  return s;
}

Eigen::MatrixXd SymmetricMatrix::dense() const {
  Eigen::MatrixXd m(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = i; j < n_; ++j) m(i, j) = m(j, i) = (*this)(i, j);
  return m;
}

double SymmetricMatrix::norm() const {
  double sum = 0.0;
  for (int i = 0; i < n_; ++i) {
    const double d = (*this)(i, i);
    sum += d * d;
    for (int j = i + 1; j < n_; ++j) {
      const double v = (*this)(i, j);
      sum += 2.0 * v * v;
    }
  }
  return std::sqrt(sum);
}

bool SymmetricMatrix::isDiagonal() const {
  for (int i = 0; i < n_; ++i)
    for (int j = i + 1; j < n_; ++j)
      if ((*this)(i, j) != 0.0) return false;
  return true;
}

std::vector<double> SymmetricMatrix::diagonalEntries() const {
  std::vector<double> d(static_cast<std::size_t>(n_));
  for (int i = 0; i < n_; ++i) d[static_cast<std::size_t>(i)] = (*this)(i, i);
  return d;
}

SymmetricMatrix& SymmetricMatrix::axpy(double c, const SymmetricMatrix& other) {
  if (other.n_ != n_)
    throw DimensionMismatchError("axpy: dimensions differ");
  for (std::size_t p = 0; p < upper_.size(); ++p) upper_[p] += c * other.upper_[p];
  return *this;
}

}  // namespace specpencil
