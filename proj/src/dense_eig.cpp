// SPDX-License-Identifier: Apache-2.0

#include "specpencil/dense_eig.hpp"

#include <lapacke.h>

#include <mutex>
#include <string>

#include "specpencil/errors.hpp"

extern "C" void openblas_set_num_threads(int) __attribute__((weak));

namespace specpencil::detail {

void pin_blas_single_thread() {
  static std::once_flag flag;
  std::call_once(flag, [] {
    if (openblas_set_num_threads) openblas_set_num_threads(1);
  });
}

EigResult sym_eig(const Eigen::MatrixXd& a, bool with_vectors) {
  pin_blas_single_thread();
  const auto n = static_cast<lapack_int>(a.rows());
  EigResult r;
  r.values.resize(n);
  Eigen::MatrixXd work = a;
  const lapack_int info =
      LAPACKE_dsyevd(LAPACK_COL_MAJOR, with_vectors ? 'V' : 'N', 'U', n,
                     work.data(), n, r.values.data());
  if (info != 0)
    throw Error("dsyevd failed (info=" + std::to_string(info) + ")");
  if (with_vectors) r.vectors = std::move(work);
  return r;
}

EigResult sym_eig_gen(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                      bool with_vectors) {
  pin_blas_single_thread();
  const auto n = static_cast<lapack_int>(a.rows());
  EigResult r;
  r.values.resize(n);
  Eigen::MatrixXd wa = a;
  Eigen::MatrixXd wb = b;
  const lapack_int info =
      LAPACKE_dsygvd(LAPACK_COL_MAJOR, 1, with_vectors ? 'V' : 'N', 'U', n,
                     wa.data(), n, wb.data(), n, r.values.data());
  if (info != 0)
    throw Error("dsygvd failed (info=" + std::to_string(info) + ")");
  if (with_vectors) r.vectors = std::move(wa);
  return r;
}

}  // namespace specpencil::detail
