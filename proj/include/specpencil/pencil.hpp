// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Core>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "specpencil/symmetric_matrix.hpp"

namespace specpencil {

/// Shared relative tolerance for definiteness and kernel detection:
/// an eigenvalue counts as zero when <= kDefaultTol * max(1, lambda_max).
inline constexpr double kDefaultTol = 1e-10;

/// Finite part of a generalized spectrum plus the number of eigenvalues
/// conventionally set to infinity. finite.size() + infinite_count == n.
struct Spectrum {
  std::vector<double> finite;  // ascending
  int infinite_count = 0;
  std::optional<Eigen::MatrixXd> vectors;  // columns aligned with finite
};

/// Parameter-dependent pencil A x = lambda B x with A = a1 + alpha a2 and
/// B = b1 + beta b2.
struct ParametricPencil {
  SymmetricMatrix a1, a2, b1, b2;
  double alpha = 0.0;
  double beta = 0.0;

  ParametricPencil(SymmetricMatrix a1_, SymmetricMatrix a2_,
                   SymmetricMatrix b1_, SymmetricMatrix b2_,
                   double alpha_ = 0.0, double beta_ = 0.0);

  int n() const { return a1.n(); }
  SymmetricMatrix a(double alpha_value) const;
  SymmetricMatrix b(double beta_value) const;
  SymmetricMatrix a() const { return a(alpha); }
  SymmetricMatrix b() const { return b(beta); }

  /// Checks that all four matrices are positive semidefinite up to tol.
  void validatePsd(double tol = kDefaultTol) const;
};

/// Result of testing a split C = C1 + gamma C2 against the kernel-splitting
/// conditions: C1 PSD with kernel K, C2 positive definite on K and
/// vanishing on the orthogonal complement.
struct AssumptionReport {
  int kernel_dim_c1 = 0;
  bool c2_pd_on_kernel = false;
  bool c2_vanishes_on_complement = false;
  int intersection_dim = 0;  // dim(ker C1 intersect ker C2)
};

enum class BranchKind {
  kConstant,        // lambda = c                (K_A-perp and K_B-perp)
  kLinearAlpha,     // lambda = c * alpha        (K_A and K_B-perp)
  kHyperbolicBeta,  // lambda = c / beta         (K_A-perp and K_B)
  kRatioAlphaBeta,  // lambda = c * alpha / beta (K_A and K_B)
  kInfinite,        // B row vanishes entirely
};

const char* to_string(BranchKind kind);

struct Branch {
  double coefficient = 0.0;
  BranchKind kind = BranchKind::kConstant;
};

/// Closed-form eigenvalue branches of a diagonal pencil, one per index.
struct BranchPrediction {
  std::vector<Branch> branches;
};

enum class CurveClass { kConstant, kLinear, kHyperbolic, kUnclassified };

const char* to_string(CurveClass cls);

struct CurveFit {
  CurveClass cls = CurveClass::kUnclassified;
  double coefficient = 0.0;
  double slope = 0.0;
};

struct SweepPoint {
  double alpha = 0.0;
  double beta = 0.0;
  Spectrum spectrum;
  std::string error;  // empty on success
  bool ok() const { return error.empty(); }
};

enum class SweepErrorPolicy { kThrow, kRecord };

/// Spectra over a Cartesian (alpha, beta) grid, stored row-major by alpha
/// index. For one-dimensional sweeps curve_fits holds a log-log
/// classification per ascending-eigenvalue curve.
struct SweepResult {
  std::vector<double> alpha_grid;
  std::vector<double> beta_grid;
  std::vector<SweepPoint> points;
  std::vector<CurveFit> curve_fits;

  const SweepPoint& at(int alpha_index, int beta_index) const {
    return points[static_cast<std::size_t>(alpha_index) * beta_grid.size() +
                  static_cast<std::size_t>(beta_index)];
  }

  /// One-dimensional sweeps only: the k-th smallest finite eigenvalue as a
  /// function of the varying parameter; points missing the k-th finite
  /// eigenvalue (or failed) are skipped.
  std::vector<std::pair<double, double>> curve(int k) const;
};

/// Solves A x = lambda B x for symmetric positive semidefinite A, B.
/// If B is definite the problem is solved directly; if only A is definite
/// the reciprocal pencil B x = mu A x is solved and lambda = 1/mu, with
/// mu below the kernel threshold reported as infinite eigenvalues.
/// Throws BothSingularError when neither matrix is definite.
Spectrum solve_gep(const SymmetricMatrix& a, const SymmetricMatrix& b,
                   double tol = kDefaultTol, bool with_vectors = true);

/// Verifies the kernel-splitting conditions for a pair (c1, c2).
AssumptionReport check_assumption(const SymmetricMatrix& c1,
                                  const SymmetricMatrix& c2,
                                  double tol = kDefaultTol);

/// Closed-form branch decomposition for a diagonal pencil. Requires all
/// four matrices diagonal with at most one of a1/a2 (and of b1/b2) nonzero
/// per index.
BranchPrediction predict_diagonal_spectrum(const ParametricPencil& p);

/// Substitutes parameter values into the branches and sorts the result.
/// At beta = 0 the hyperbolic and ratio branches become infinite.
Spectrum evaluate_prediction(const BranchPrediction& pred, double alpha,
                             double beta);

/// Solves the pencil over a Cartesian parameter grid. Grid points are
/// evaluated concurrently into pre-indexed slots, so the result does not
/// depend on scheduling.
SweepResult sweep(const ParametricPencil& p,
                  const std::vector<double>& alpha_grid,
                  const std::vector<double>& beta_grid,
                  double tol = kDefaultTol,
                  SweepErrorPolicy policy = SweepErrorPolicy::kThrow,
                  int max_threads = 0);

/// Least-squares fit of log(value) against log(parameter); slope near 0,
/// +1, -1 (within rel_tol) classifies the curve as constant, linear or
/// hyperbolic. The coefficient is the geometric mean of
/// value * parameter^(-rounded_slope).
CurveFit classify_branch(std::span<const std::pair<double, double>> curve,
                         double rel_tol = 0.1);

}  // namespace specpencil
