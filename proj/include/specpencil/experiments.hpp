// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "specpencil/assembly.hpp"
#include "specpencil/mesh.hpp"
#include "specpencil/pencil.hpp"

namespace specpencil {

/// First m Dirichlet Laplace eigenvalues of the unit square,
/// (i^2 + j^2) pi^2 for i, j >= 1, ascending with multiplicity.
std::vector<double> exact_laplace_eigs(int m);

enum class SweepAxis { kAlpha, kBeta };

/// Built-in diagonal model pencils. Case 1 fixes B = I and varies alpha;
/// case 2 fixes A = I and varies beta; case 3 varies both, with a
/// "disjoint" and an "intersect" kernel variant.
ParametricPencil toy_pencil(int case_id, const std::string& variant = "");

struct ToyResult {
  SweepResult sweep;
  BranchPrediction prediction;
  double max_discrepancy = 0.0;  // max |solved - predicted| over grid
  int failed_points = 0;
  std::string csv;  // alpha,beta,index,computed,predicted,abs_diff
};

/// Cross-checks the closed-form branch prediction against the direct
/// solver on a parameter grid (the grid drives alpha, beta, or both,
/// depending on the case). A point counts toward max_discrepancy only if
/// both routes produced a spectrum; structural mismatches (finite counts)
/// force an infinite discrepancy.
ToyResult run_toy(int case_id, const std::string& variant,
                  const std::vector<double>& grid, int max_threads = 0);

struct TableRow {
  std::string mesh;
  int cells = 0;
  int k = 1;
  int ker_a1 = 0;
  int ker_b1 = 0;
  double infsup = 0.0;  // valid when has_infsup
  bool has_infsup = false;
};

struct TablesResult {
  std::vector<TableRow> rows;
  std::string csv;  // mesh,cells,k,ker_a1,ker_b1,infsup
};

/// Kernel dimensions of the consistency matrices per (mesh, k), plus the
/// smallest eigenvalue of (a1, b1) for k = 1.
TablesResult run_tables(const std::vector<PolygonalMesh>& meshes,
                        const std::vector<std::string>& labels,
                        const std::vector<int>& ks);

struct SweepCsvResult {
  SweepResult sweep;
  GlobalPencilVEM global;
  std::string csv;  // param,index,value,exact,classification
};

/// One-axis parameter sweep of the assembled pencil. Values are divided
/// by pi^2 unless raw is set; each ascending-eigenvalue curve carries its
/// log-log classification tag. Failed grid points are recorded, not fatal.
SweepCsvResult run_sweep(const PolygonalMesh& mesh, int k, SweepAxis axis,
                         double fixed_other, const std::vector<double>& grid,
                         int m_eigs = 30, bool raw = false,
                         StabMode mode = StabMode::kDofIdentity,
                         int max_threads = 0);

struct ConvergenceRow {
  int k = 1;
  int grid = 0;
  double h = 0.0;
  int index = 0;
  double computed = 0.0;
  double exact = 0.0;
  double rel_error = 0.0;
  double rate = 0.0;  // valid when has_rate
  bool has_rate = false;
};

struct ConvergenceResult {
  std::vector<ConvergenceRow> rows;
  std::string csv;  // k,grid,h,index,computed,exact,rel_error,rate
};

/// Eigenvalue errors on a sequence of m x m square grids and the observed
/// convergence rates between consecutive refinements.
ConvergenceResult run_convergence(int k, const std::vector<int>& grids,
                                  double alpha, double beta, int m_eigs = 1);

/// Parses "a:b:step" into an inclusive ascending grid.
std::vector<double> parse_grid(const std::string& spec);

/// n logarithmically spaced points from a to b (both positive).
std::vector<double> log_grid(double a, double b, int n);

/// %.17g formatting used by every CSV and text export.
std::string format_g17(double v);

}  // namespace specpencil
