// SPDX-License-Identifier: Apache-2.0

#include "specpencil/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

namespace specpencil {

namespace {

constexpr double kPiSquared = std::numbers::pi * std::numbers::pi;

void append_g17(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

}  // namespace

std::string format_g17(double v) {
  std::string s;
  append_g17(s, v);
  return s;
}

std::vector<double> exact_laplace_eigs(int m) {
  if (m < 1) throw ConfigError("exact_laplace_eigs: m must be >= 1");
  for (int range = 4;; range *= 2) {
    // Values up to range^2 + 1 are complete within the enumeration
    // i, j <= range.
    const long long cutoff = static_cast<long long>(range) * range + 1;
    std::vector<long long> sums;
    for (int i = 1; i <= range; ++i)
      for (int j = 1; j <= range; ++j)
        if (static_cast<long long>(i) * i + static_cast<long long>(j) * j <=
            cutoff)
          sums.push_back(static_cast<long long>(i) * i +
                         static_cast<long long>(j) * j);
    if (static_cast<int>(sums.size()) < m) continue;
    std::sort(sums.begin(), sums.end());
    std::vector<double> eigs(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i)
      eigs[static_cast<std::size_t>(i)] =
          static_cast<double>(sums[static_cast<std::size_t>(i)]) * kPiSquared;
    return eigs;
  }
}

ParametricPencil toy_pencil(int case_id, const std::string& variant) {
  const SymmetricMatrix zero(6);
  switch (case_id) {
    case 1:
      return ParametricPencil(
          SymmetricMatrix::diagonal({3, 4, 5, 6, 0, 0}),
          SymmetricMatrix::diagonal({0, 0, 0, 0, 1, 2}),
          SymmetricMatrix::identity(6), zero);
    case 2:
      return ParametricPencil(
          SymmetricMatrix::identity(6), zero,
          SymmetricMatrix::diagonal({3, 4, 5, 6, 0, 0}),
          SymmetricMatrix::diagonal({0, 0, 0, 0, 1, 2}));
    case 3:
      if (variant == "intersect")
        return ParametricPencil(
            SymmetricMatrix::diagonal({3, 0, 0, 4, 5, 6}),
            SymmetricMatrix::diagonal({0, 1, 2, 0, 0, 0}),
            SymmetricMatrix::diagonal({7, 8, 0, 0, 9, 10}),
            SymmetricMatrix::diagonal({0, 0, 0.8, 1, 0, 0}));
      if (variant.empty() || variant == "disjoint")
        return ParametricPencil(
            SymmetricMatrix::diagonal({0, 0, 3, 4, 5, 6}),
            SymmetricMatrix::diagonal({1, 2, 0, 0, 0, 0}),
            SymmetricMatrix::diagonal({7, 8, 9, 10, 0, 0}),
            SymmetricMatrix::diagonal({0, 0, 0, 0, 0.8, 1}));
      throw ConfigError("toy case 3 variant must be 'disjoint' or 'intersect'");
    default:
      throw ConfigError("toy case must be 1, 2, or 3");
  }
}

ToyResult run_toy(int case_id, const std::string& variant,
                  const std::vector<double>& grid, int max_threads) {
  if (grid.empty()) throw ConfigError("run_toy: empty grid");
  const ParametricPencil pencil = toy_pencil(case_id, variant);
  const std::vector<double> fixed{0.0};
  const std::vector<double>& alpha_grid =
      (case_id == 1 || case_id == 3) ? grid : fixed;
  const std::vector<double>& beta_grid =
      (case_id == 2 || case_id == 3) ? grid : fixed;

  ToyResult result;
  result.prediction = predict_diagonal_spectrum(pencil);
  result.sweep = sweep(pencil, alpha_grid, beta_grid, kDefaultTol,
                       SweepErrorPolicy::kRecord, max_threads);

  std::string& csv = result.csv;
  csv = "alpha,beta,index,computed,predicted,abs_diff\n";
  for (const SweepPoint& pt : result.sweep.points) {
    if (!pt.ok()) {
      ++result.failed_points;
      continue;
    }
    const Spectrum predicted =
        evaluate_prediction(result.prediction, pt.alpha, pt.beta);
    double point_disc = 0.0;
    if (predicted.finite.size() != pt.spectrum.finite.size() ||
        predicted.infinite_count != pt.spectrum.infinite_count) {
      point_disc = std::numeric_limits<double>::infinity();
    } else {
      for (std::size_t i = 0; i < predicted.finite.size(); ++i)
        point_disc = std::max(
            point_disc, std::abs(predicted.finite[i] - pt.spectrum.finite[i]));
    }
    result.max_discrepancy = std::max(result.max_discrepancy, point_disc);
    for (std::size_t i = 0; i < pt.spectrum.finite.size(); ++i) {
      append_g17(csv, pt.alpha);
      csv += ',';
      append_g17(csv, pt.beta);
      csv += ',' + std::to_string(i) + ',';
      append_g17(csv, pt.spectrum.finite[i]);
      csv += ',';
      if (i < predicted.finite.size()) {
        append_g17(csv, predicted.finite[i]);
        csv += ',';
        append_g17(csv, std::abs(pt.spectrum.finite[i] - predicted.finite[i]));
      } else {
        csv += ",inf";
      }
      csv += '\n';
    }
  }
  return result;
}

TablesResult run_tables(const std::vector<PolygonalMesh>& meshes,
                        const std::vector<std::string>& labels,
                        const std::vector<int>& ks) {
  if (meshes.size() != labels.size())
    throw ConfigError("run_tables: one label per mesh required");
  TablesResult result;
  result.csv = "mesh,cells,k,ker_a1,ker_b1,infsup\n";
  for (std::size_t mi = 0; mi < meshes.size(); ++mi) {
    for (const int k : ks) {
      const GlobalPencilVEM g = assemble(meshes[mi], k);
      TableRow row;
      row.mesh = labels[mi];
      row.cells = meshes[mi].numCells();
      row.k = k;
      row.ker_a1 = kernel_dim(g.denseA1());
      row.ker_b1 = kernel_dim(g.denseB1());
      if (k == 1) {
        row.infsup = infsup_probe(g);
        row.has_infsup = true;
      }
      result.csv += row.mesh + ',' + std::to_string(row.cells) + ',' +
                    std::to_string(row.k) + ',' + std::to_string(row.ker_a1) +
                    ',' + std::to_string(row.ker_b1) + ',';
      if (row.has_infsup) append_g17(result.csv, row.infsup);
      result.csv += '\n';
      result.rows.push_back(std::move(row));
    }
  }
  return result;
}

SweepCsvResult run_sweep(const PolygonalMesh& mesh, int k, SweepAxis axis,
                         double fixed_other, const std::vector<double>& grid,
                         int m_eigs, bool raw, StabMode mode,
                         int max_threads) {
  if (m_eigs < 1) throw ConfigError("run_sweep: m must be >= 1");
  SweepCsvResult result;
  result.global = assemble(mesh, k, mode, max_threads);
  const ParametricPencil pencil = result.global.pencil();
  const std::vector<double> fixed{fixed_other};
  const std::vector<double>& alpha_grid =
      axis == SweepAxis::kAlpha ? grid : fixed;
  const std::vector<double>& beta_grid =
      axis == SweepAxis::kBeta ? grid : fixed;
  result.sweep = sweep(pencil, alpha_grid, beta_grid, kDefaultTol,
                       SweepErrorPolicy::kRecord, max_threads);

  const double scale = raw ? 1.0 : 1.0 / kPiSquared;
  const std::vector<double> exact = exact_laplace_eigs(m_eigs);

  auto tag = [&](std::size_t index) -> std::string {
    if (index >= result.sweep.curve_fits.size()) return "unclassified";
    const CurveFit& fit = result.sweep.curve_fits[index];
    const char* suffix = axis == SweepAxis::kAlpha ? "_alpha" : "_beta";
    switch (fit.cls) {
      case CurveClass::kConstant: return "constant";
      case CurveClass::kLinear: return std::string("linear") + suffix;
      case CurveClass::kHyperbolic: return std::string("hyperbolic") + suffix;
      case CurveClass::kUnclassified: return "unclassified";
    }
    return "unclassified";
  };

  std::string& csv = result.csv;
  csv = "param,index,value,exact,classification\n";
  for (const SweepPoint& pt : result.sweep.points) {
    if (!pt.ok()) continue;
    const double param = axis == SweepAxis::kAlpha ? pt.alpha : pt.beta;
    const std::size_t count = std::min(pt.spectrum.finite.size(),
                                       static_cast<std::size_t>(m_eigs));
    for (std::size_t i = 0; i < count; ++i) {
      append_g17(csv, param);
      csv += ',' + std::to_string(i) + ',';
      append_g17(csv, pt.spectrum.finite[i] * scale);
      csv += ',';
      append_g17(csv, exact[i] * scale);
      csv += ',' + tag(i) + '\n';
    }
  }
  return result;
}

ConvergenceResult run_convergence(int k, const std::vector<int>& grids,
                                  double alpha, double beta, int m_eigs) {
  if (grids.empty()) throw ConfigError("run_convergence: no grids given");
  const std::vector<double> exact = exact_laplace_eigs(m_eigs);
  ConvergenceResult result;
  result.csv = "k,grid,h,index,computed,exact,rel_error,rate\n";
  std::vector<double> prev_errors;
  double prev_h = 0.0;
  for (const int g : grids) {
    const PolygonalMesh mesh = generate_square_grid(g);
    const GlobalPencilVEM vem = assemble(mesh, k);
    const Spectrum s = solve_gep(vem.matrixA(alpha), vem.matrixB(beta),
                                 kDefaultTol, /*with_vectors=*/false);
    const double h = std::numbers::sqrt2 / g;
    std::vector<double> errors;
    for (int i = 0; i < m_eigs &&
                    i < static_cast<int>(s.finite.size());
         ++i) {
      ConvergenceRow row;
      row.k = k;
      row.grid = g;
      row.h = h;
      row.index = i;
      row.computed = s.finite[static_cast<std::size_t>(i)];
      row.exact = exact[static_cast<std::size_t>(i)];
      row.rel_error = std::abs(row.computed - row.exact) / row.exact;
      errors.push_back(row.rel_error);
      if (!prev_errors.empty() &&
          i < static_cast<int>(prev_errors.size()) &&
          row.rel_error > 0.0 &&
          prev_errors[static_cast<std::size_t>(i)] > 0.0) {
        row.rate = std::log(prev_errors[static_cast<std::size_t>(i)] /
                            row.rel_error) /
                   std::log(prev_h / h);
        row.has_rate = true;
      }
      result.csv += std::to_string(row.k) + ',' + std::to_string(row.grid) +
                    ',';
      append_g17(result.csv, row.h);
      result.csv += ',' + std::to_string(row.index) + ',';
      append_g17(result.csv, row.computed);
      result.csv += ',';
      append_g17(result.csv, row.exact);
      result.csv += ',';
      append_g17(result.csv, row.rel_error);
      result.csv += ',';
      if (row.has_rate) append_g17(result.csv, row.rate);
      result.csv += '\n';
      result.rows.push_back(row);
    }
    prev_errors = std::move(errors);
    prev_h = h;
  }
  return result;
}

std::vector<double> parse_grid(const std::string& spec) {
  double a = 0.0, b = 0.0, step = 0.0;
  char trailing = 0;
  if (std::sscanf(spec.c_str(), "%lf:%lf:%lf%c", &a, &b, &step, &trailing) !=
      3)
    throw ConfigError("grid must have the form a:b:step");
  if (step <= 0.0) throw ConfigError("grid step must be positive");
  if (b < a) throw ConfigError("grid end must be >= start");
  std::vector<double> grid;
  for (int i = 0;; ++i) {
    const double v = a + i * step;
    if (v > b + 1e-9 * step) break;
    grid.push_back(std::min(v, b));
  }
  return grid;
}

std::vector<double> log_grid(double a, double b, int n) {
  if (a <= 0.0 || b <= a || n < 2)
    throw ConfigError("log_grid: need 0 < a < b and n >= 2");
  std::vector<double> grid(static_cast<std::size_t>(n));
  const double la = std::log(a);
  const double lb = std::log(b);
  for (int i = 0; i < n; ++i)
    grid[static_cast<std::size_t>(i)] =
        std::exp(la + (lb - la) * i / (n - 1));
  grid.front() = a;
  grid.back() = b;
  return grid;
}

}  // namespace specpencil
