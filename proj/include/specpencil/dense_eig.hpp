// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>

namespace specpencil::detail {

struct EigResult {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // empty unless requested
};

/// Eigendecomposition of a dense symmetric matrix (LAPACK dsyevd).
EigResult sym_eig(const Eigen::MatrixXd& a, bool with_vectors);

/// Generalized problem a x = lambda b x with b positive definite (LAPACK
/// dsygvd). Returned vectors are b-orthonormal.
EigResult sym_eig_gen(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                      bool with_vectors);

/// Pins the BLAS backend to one thread so results are independent of the
/// machine's core count. Called lazily by the wrappers; safe to call again.
void pin_blas_single_thread();

}  // namespace specpencil::detail
