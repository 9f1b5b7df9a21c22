// SPDX-License-Identifier: Apache-2.0

#include "specpencil/pencil.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "specpencil/dense_eig.hpp"
#include "specpencil/parallel.hpp"

namespace specpencil {

namespace {

double kernel_threshold(const Eigen::VectorXd& eigenvalues, double tol) {
  const double lmax = eigenvalues.size() ? eigenvalues(eigenvalues.size() - 1)
                                         : 0.0;
  return tol * std::max(1.0, lmax);
}

bool is_definite(const Eigen::VectorXd& eigenvalues, double tol) {
  return eigenvalues(0) > kernel_threshold(eigenvalues, tol);
}

/// Makes the entry of largest magnitude positive (first such entry on
/// ties) so eigenvector signs are reproducible.
void normalize_sign(Eigen::Ref<Eigen::MatrixXd> vectors) {
  for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
    Eigen::Index imax = 0;
    double amax = -1.0;
    for (Eigen::Index i = 0; i < vectors.rows(); ++i) {
      const double a = std::abs(vectors(i, c));
      if (a > amax) {
        amax = a;
        imax = i;
      }
    }
    if (vectors(imax, c) < 0.0) vectors.col(c) = -vectors.col(c);
  }
}

/// Stable ascending order with exact ties broken by lexicographic
/// comparison of the sign-normalized eigenvectors.
void order_spectrum(Eigen::VectorXd& values, Eigen::MatrixXd& vectors) {
  normalize_sign(vectors);
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(values.size()));
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](Eigen::Index a, Eigen::Index b) {
                     if (values(a) != values(b)) return values(a) < values(b);
                     for (Eigen::Index i = 0; i < vectors.rows(); ++i) {
                       if (vectors(i, a) != vectors(i, b))
                         return vectors(i, a) < vectors(i, b);
                     }
                     return false;
                   });
  Eigen::VectorXd v2(values.size());
  Eigen::MatrixXd m2(vectors.rows(), vectors.cols());
  for (std::size_t p = 0; p < idx.size(); ++p) {
    v2(static_cast<Eigen::Index>(p)) = values(idx[p]);
    m2.col(static_cast<Eigen::Index>(p)) = vectors.col(idx[p]);
  }
  values = std::move(v2);
  vectors = std::move(m2);
}

int common_kernel_dim(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                      double tol) {
  const auto ea = detail::sym_eig(a, true);
  const double ta = kernel_threshold(ea.values, tol);
  int ka = 0;
  while (ka < ea.values.size() && ea.values(ka) <= ta) ++ka;
  if (ka == 0) return 0;
  const Eigen::MatrixXd basis = ea.vectors.leftCols(ka);
  const Eigen::MatrixXd restricted = basis.transpose() * b * basis;
  const auto er = detail::sym_eig(restricted, false);
  const double tr = kernel_threshold(er.values, tol);
  int k = 0;
  while (k < er.values.size() && er.values(k) <= tr) ++k;
  return k;
}

}  // namespace

ParametricPencil::ParametricPencil(SymmetricMatrix a1_, SymmetricMatrix a2_,
                                   SymmetricMatrix b1_, SymmetricMatrix b2_,
                                   double alpha_, double beta_)
    : a1(std::move(a1_)),
      a2(std::move(a2_)),
      b1(std::move(b1_)),
      b2(std::move(b2_)),
      alpha(alpha_),
      beta(beta_) {
  const int n = a1.n();
  if (a2.n() != n || b1.n() != n || b2.n() != n)
    throw DimensionMismatchError("pencil matrices must share one dimension");
  if (alpha < 0.0 || beta < 0.0)
    throw ConfigError("pencil parameters must be nonnegative");
}

SymmetricMatrix ParametricPencil::a(double alpha_value) const {
  SymmetricMatrix m = a1;
  m.axpy(alpha_value, a2);
  return m;
}

SymmetricMatrix ParametricPencil::b(double beta_value) const {
  SymmetricMatrix m = b1;
  m.axpy(beta_value, b2);
  return m;
}

void ParametricPencil::validatePsd(double tol) const {
  const SymmetricMatrix* mats[] = {&a1, &a2, &b1, &b2};
  const char* names[] = {"a1", "a2", "b1", "b2"};
  for (int i = 0; i < 4; ++i) {
    const auto eig = detail::sym_eig(mats[i]->dense(), false);
    if (eig.values(0) < -kernel_threshold(eig.values, tol))
      throw Error(std::string("pencil matrix ") + names[i] +
                  " is not positive semidefinite");
  }
}

const char* to_string(BranchKind kind) {
  switch (kind) {
    case BranchKind::kConstant: return "constant";
    case BranchKind::kLinearAlpha: return "linear_alpha";
    case BranchKind::kHyperbolicBeta: return "hyperbolic_beta";
    case BranchKind::kRatioAlphaBeta: return "ratio_alpha_beta";
    case BranchKind::kInfinite: return "infinite";
  }
  return "?";
}

const char* to_string(CurveClass cls) {
  switch (cls) {
    case CurveClass::kConstant: return "constant";
    case CurveClass::kLinear: return "linear";
    case CurveClass::kHyperbolic: return "hyperbolic";
    case CurveClass::kUnclassified: return "unclassified";
  }
  return "?";
}

Spectrum solve_gep(const SymmetricMatrix& a, const SymmetricMatrix& b,
                   double tol, bool with_vectors) {
  if (a.n() != b.n())
    throw DimensionMismatchError("solve_gep: dimensions differ");
  const int n = a.n();
  const Eigen::MatrixXd ad = a.dense();
  const Eigen::MatrixXd bd = b.dense();

  const auto eig_b = detail::sym_eig(bd, false);
  Spectrum out;
  if (is_definite(eig_b.values, tol)) {
    auto r = detail::sym_eig_gen(ad, bd, with_vectors);
    if (with_vectors) order_spectrum(r.values, r.vectors);
    out.finite.assign(r.values.data(), r.values.data() + n);
    out.infinite_count = 0;
    if (with_vectors) out.vectors = std::move(r.vectors);
    return out;
  }

  const auto eig_a = detail::sym_eig(ad, false);
  if (!is_definite(eig_a.values, tol))
    throw BothSingularError(common_kernel_dim(ad, bd, tol));

  // Reciprocal pencil B x = mu A x; lambda = 1/mu, zero mu -> infinity.
  auto r = detail::sym_eig_gen(bd, ad, with_vectors);
  if (with_vectors) order_spectrum(r.values, r.vectors);
  const double cutoff = kernel_threshold(r.values, tol);
  int zero_count = 0;
  while (zero_count < n && r.values(zero_count) <= cutoff) ++zero_count;
  out.infinite_count = zero_count;
  const int finite_count = n - zero_count;
  out.finite.resize(static_cast<std::size_t>(finite_count));
  if (with_vectors)
    out.vectors = Eigen::MatrixXd(n, finite_count);
  for (int i = 0; i < finite_count; ++i) {
    const int src = n - 1 - i;  // descending mu = ascending lambda
    out.finite[static_cast<std::size_t>(i)] = 1.0 / r.values(src);
    if (with_vectors) out.vectors->col(i) = r.vectors.col(src);
  }
  return out;
}

AssumptionReport check_assumption(const SymmetricMatrix& c1,
                                  const SymmetricMatrix& c2, double tol) {
  if (c1.n() != c2.n())
    throw DimensionMismatchError("check_assumption: dimensions differ");
  const Eigen::MatrixXd d1 = c1.dense();
  const Eigen::MatrixXd d2 = c2.dense();

  const auto e1 = detail::sym_eig(d1, true);
  const double t1 = kernel_threshold(e1.values, tol);
  int k0 = 0;
  while (k0 < e1.values.size() && e1.values(k0) <= t1) ++k0;

  AssumptionReport report;
  report.kernel_dim_c1 = k0;

  if (k0 > 0) {
    const Eigen::MatrixXd kernel = e1.vectors.leftCols(k0);
    const Eigen::MatrixXd restricted = kernel.transpose() * d2 * kernel;
    const auto er = detail::sym_eig(restricted, false);
    const double tr = kernel_threshold(er.values, tol);
    report.c2_pd_on_kernel = er.values(0) > tr;
    int inter = 0;
    while (inter < er.values.size() && er.values(inter) <= tr) ++inter;
    report.intersection_dim = inter;
  } else {
    report.c2_pd_on_kernel = true;  // vacuous
    report.intersection_dim = 0;
  }

  const double scale2 = std::max(1.0, d2.norm());
  bool vanishes = true;
  for (int c = k0; c < e1.values.size(); ++c) {
    if ((d2 * e1.vectors.col(c)).norm() > tol * scale2) {
      vanishes = false;
      break;
    }
  }
  report.c2_vanishes_on_complement = vanishes;
  return report;
}

BranchPrediction predict_diagonal_spectrum(const ParametricPencil& p) {
  if (!p.a1.isDiagonal() || !p.a2.isDiagonal() || !p.b1.isDiagonal() ||
      !p.b2.isDiagonal())
    throw NotDiagonalError("predict_diagonal_spectrum: matrices must be diagonal");
  const auto da1 = p.a1.diagonalEntries();
  const auto da2 = p.a2.diagonalEntries();
  const auto db1 = p.b1.diagonalEntries();
  const auto db2 = p.b2.diagonalEntries();
  BranchPrediction pred;
  pred.branches.reserve(da1.size());
  for (std::size_t i = 0; i < da1.size(); ++i) {
    if (da1[i] != 0.0 && da2[i] != 0.0)
      throw NotDiagonalError(
          "predict_diagonal_spectrum: a1 and a2 overlap at index " +
          std::to_string(i));
    if (db1[i] != 0.0 && db2[i] != 0.0)
      throw NotDiagonalError(
          "predict_diagonal_spectrum: b1 and b2 overlap at index " +
          std::to_string(i));
    const bool a_direct = da1[i] != 0.0;
    const bool a_scaled = da2[i] != 0.0;
    const bool b_direct = db1[i] != 0.0;
    const bool b_scaled = db2[i] != 0.0;
    if (!a_direct && !a_scaled && !b_direct && !b_scaled)
      throw ZeroRowError(static_cast<int>(i));
    Branch br;
    if (!b_direct && !b_scaled) {
      br.kind = BranchKind::kInfinite;
      br.coefficient = a_direct ? da1[i] : da2[i];
    } else if (!a_direct && !a_scaled) {
      br.kind = BranchKind::kConstant;  // zero eigenvalue for all parameters
      br.coefficient = 0.0;
    } else if (a_direct && b_direct) {
      br.kind = BranchKind::kConstant;
      br.coefficient = da1[i] / db1[i];
    } else if (a_scaled && b_direct) {
      br.kind = BranchKind::kLinearAlpha;
      br.coefficient = da2[i] / db1[i];
    } else if (a_direct && b_scaled) {
      br.kind = BranchKind::kHyperbolicBeta;
      br.coefficient = da1[i] / db2[i];
    } else {
      br.kind = BranchKind::kRatioAlphaBeta;
      br.coefficient = da2[i] / db2[i];
    }
    pred.branches.push_back(br);
  }
  return pred;
}

Spectrum evaluate_prediction(const BranchPrediction& pred, double alpha,
                             double beta) {
  if (alpha < 0.0 || beta < 0.0)
    throw ConfigError("evaluate_prediction: parameters must be nonnegative");
  Spectrum s;
  for (const Branch& br : pred.branches) {
    switch (br.kind) {
      case BranchKind::kConstant:
        s.finite.push_back(br.coefficient);
        break;
      case BranchKind::kLinearAlpha:
        s.finite.push_back(alpha * br.coefficient);
        break;
      case BranchKind::kHyperbolicBeta:
        if (beta > 0.0)
          s.finite.push_back(br.coefficient / beta);
        else
          ++s.infinite_count;
        break;
      case BranchKind::kRatioAlphaBeta:
        if (beta > 0.0)
          s.finite.push_back(alpha / beta * br.coefficient);
        else
          ++s.infinite_count;
        break;
      case BranchKind::kInfinite:
        ++s.infinite_count;
        break;
    }
  }
  std::sort(s.finite.begin(), s.finite.end());
  return s;
}

std::vector<std::pair<double, double>> SweepResult::curve(int k) const {
  std::vector<std::pair<double, double>> c;
  const bool alpha_axis = alpha_grid.size() > 1;
  const std::vector<double>& grid = alpha_axis ? alpha_grid : beta_grid;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const SweepPoint& pt = alpha_axis ? at(static_cast<int>(g), 0)
                                      : at(0, static_cast<int>(g));
    if (!pt.ok()) continue;
    if (static_cast<std::size_t>(k) < pt.spectrum.finite.size())
      c.emplace_back(grid[g], pt.spectrum.finite[static_cast<std::size_t>(k)]);
  }
  return c;
}

SweepResult sweep(const ParametricPencil& p,
                  const std::vector<double>& alpha_grid,
                  const std::vector<double>& beta_grid, double tol,
                  SweepErrorPolicy policy, int max_threads) {
  if (alpha_grid.empty() || beta_grid.empty())
    throw ConfigError("sweep: grids must be nonempty");
  auto check_grid = [](const std::vector<double>& g, const char* name) {
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (g[i] < 0.0)
        throw ConfigError(std::string("sweep: ") + name +
                          " grid must be nonnegative");
      if (i > 0 && g[i] <= g[i - 1])
        throw ConfigError(std::string("sweep: ") + name +
                          " grid must be strictly ascending");
    }
  };
  check_grid(alpha_grid, "alpha");
  check_grid(beta_grid, "beta");

  SweepResult result;
  result.alpha_grid = alpha_grid;
  result.beta_grid = beta_grid;
  const int na = static_cast<int>(alpha_grid.size());
  const int nb = static_cast<int>(beta_grid.size());
  result.points.resize(static_cast<std::size_t>(na) * nb);

  parallel_for(na * nb, [&](int idx) {
    const int ia = idx / nb;
    const int ib = idx % nb;
    SweepPoint& pt = result.points[static_cast<std::size_t>(idx)];
    pt.alpha = alpha_grid[static_cast<std::size_t>(ia)];
    pt.beta = beta_grid[static_cast<std::size_t>(ib)];
    try {
      pt.spectrum = solve_gep(p.a(pt.alpha), p.b(pt.beta), tol,
                              /*with_vectors=*/false);
    } catch (const std::exception& e) {
      pt.error = e.what();
    }
  }, max_threads);

  if (policy == SweepErrorPolicy::kThrow) {
    for (int idx = 0; idx < na * nb; ++idx) {
      const SweepPoint& pt = result.points[static_cast<std::size_t>(idx)];
      if (!pt.ok())
        throw GridPointError(idx / nb, idx % nb, pt.alpha, pt.beta, pt.error);
    }
  }

  // Classify ascending-eigenvalue curves of one-dimensional sweeps.
  if ((na == 1) != (nb == 1)) {
    std::size_t n_curves = 0;
    bool first = true;
    for (const SweepPoint& pt : result.points) {
      if (!pt.ok()) continue;
      n_curves = first ? pt.spectrum.finite.size()
                       : std::min(n_curves, pt.spectrum.finite.size());
      first = false;
    }
    result.curve_fits.resize(n_curves);
    for (std::size_t k = 0; k < n_curves; ++k) {
      auto c = result.curve(static_cast<int>(k));
      std::erase_if(c, [](const std::pair<double, double>& q) {
        return q.first <= 0.0 || q.second <= 0.0;
      });
      if (c.size() >= 4)
        result.curve_fits[k] = classify_branch(c);
    }
  }
  return result;
}

CurveFit classify_branch(std::span<const std::pair<double, double>> curve,
                         double rel_tol) {
  if (curve.size() < 4)
    throw TooFewPointsError("classify_branch: need at least 4 points");
  for (const auto& [x, y] : curve)
    if (x <= 0.0 || y <= 0.0)
      throw NonPositiveValueError(
          "classify_branch: parameters and values must be positive");

  const auto n = static_cast<double>(curve.size());
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : curve) {
    mx += std::log(x);
    my += std::log(y);
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [x, y] : curve) {
    const double dx = std::log(x) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(y) - my);
  }
  if (sxx == 0.0)
    throw NonPositiveValueError("classify_branch: parameter values coincide");

  CurveFit fit;
  fit.slope = sxy / sxx;
  double rounded = 0.0;
  if (std::abs(fit.slope) < rel_tol) {
    fit.cls = CurveClass::kConstant;
    rounded = 0.0;
  } else if (std::abs(fit.slope - 1.0) < rel_tol) {
    fit.cls = CurveClass::kLinear;
    rounded = 1.0;
  } else if (std::abs(fit.slope + 1.0) < rel_tol) {
    fit.cls = CurveClass::kHyperbolic;
    rounded = -1.0;
  } else {
    fit.cls = CurveClass::kUnclassified;
    rounded = std::round(fit.slope);
  }
  double acc = 0.0;
  for (const auto& [x, y] : curve) acc += std::log(y) - rounded * std::log(x);
  fit.coefficient = std::exp(acc / n);
  return fit;
}

}  // namespace specpencil
