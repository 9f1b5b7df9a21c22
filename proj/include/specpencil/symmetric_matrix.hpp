// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>
#include <initializer_list>
#include <vector>

#include "specpencil/errors.hpp"

namespace specpencil {

/// Dense symmetric matrix with single-triangle storage: only the upper
/// triangle is kept (row-major packed), so entries(i,j) == entries(j,i)
/// holds exactly by construction.
class SymmetricMatrix {
public:
  SymmetricMatrix() = default;
  explicit SymmetricMatrix(int n)
      : n_(n), upper_(static_cast<std::size_t>(n) * (n + 1) / 2, 0.0) {
    if (n < 1) throw DimensionMismatchError("matrix dimension must be >= 1");
  }

  static SymmetricMatrix identity(int n) {
    SymmetricMatrix m(n);
    for (int i = 0; i < n; ++i) m.set(i, i, 1.0);
    return m;
  }

  static SymmetricMatrix diagonal(const std::vector<double>& d) {
    SymmetricMatrix m(static_cast<int>(d.size()));
    for (int i = 0; i < m.n_; ++i) m.set(i, i, d[static_cast<std::size_t>(i)]);
    return m;
  }

  static SymmetricMatrix diagonal(std::initializer_list<double> d) {
    return diagonal(std::vector<double>(d));
  }

  /// Builds from a dense matrix; throws NotSymmetricError when the
  /// asymmetry exceeds tol (absolute, default exact).
  static SymmetricMatrix fromDense(const Eigen::MatrixXd& m, double tol = 0.0);

  int n() const { return n_; }

  double operator()(int i, int j) const { return upper_[index(i, j)]; }
  void set(int i, int j, double v) { upper_[index(i, j)] = v; }
  void add(int i, int j, double v) { upper_[index(i, j)] += v; }

  Eigen::MatrixXd dense() const;

  /// Frobenius norm.
  double norm() const;

  bool isDiagonal() const;
  std::vector<double> diagonalEntries() const;

  SymmetricMatrix& axpy(double c, const SymmetricMatrix& other);

  friend SymmetricMatrix operator+(SymmetricMatrix a,
                                   const SymmetricMatrix& b) {
    return a.axpy(1.0, b);
  }

private:
  std::size_t index(int i, int j) const {
    if (i > j) std::swap(i, j);
    return static_cast<std::size_t>(i) * (2 * n_ - i - 1) / 2 +
           static_cast<std::size_t>(j);
  }

  int n_ = 0;
  std::vector<double> upper_;
};

}  // namespace specpencil
