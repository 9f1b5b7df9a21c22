// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: toy pencil studies, mesh generation, kernel and
// inf-sup tables, parameter sweeps, and eigenvalue convergence runs.
// Exit codes: 0 success, 1 configuration error, 2 numerical failure,
// 3 verification failure (toy prediction mismatch).

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "specpencil/experiments.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitVerification = 3;

void write_output(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw specpencil::IoError("cannot open " + path + " for writing");
  out << text;
  if (!out) throw specpencil::IoError("failed writing " + path);
}

}  // namespace

int main(int argc, char** argv) {
  using namespace specpencil;

  CLI::App app{"parameter-dependent symmetric pencils and a polygonal "
               "virtual element Laplace eigensolver"};
  app.require_subcommand(1);

  // toy
  auto* toy = app.add_subcommand(
      "toy", "compare closed-form eigenvalue branches with the solver");
  int toy_case = 1;
  std::string toy_variant = "disjoint";
  std::string toy_grid = "0:10:0.1";
  std::string toy_out;
  toy->add_option("--case", toy_case, "model case (1, 2, or 3)")
      ->required()
      ->check(CLI::Range(1, 3));
  toy->add_option("--variant", toy_variant,
                  "kernel variant for case 3 (intersect|disjoint)");
  toy->add_option("--grid", toy_grid, "parameter grid a:b:step");
  toy->add_option("--out", toy_out, "output CSV path (default stdout)");

  // mesh gen
  auto* mesh_cmd = app.add_subcommand("mesh", "mesh utilities");
  mesh_cmd->require_subcommand(1);
  auto* mesh_gen = mesh_cmd->add_subcommand(
      "gen", "generate a Lloyd-relaxed Voronoi mesh of the unit square");
  int gen_cells = 50;
  std::uint64_t gen_seed = 1;
  int gen_lloyd = 100;
  std::string gen_out;
  mesh_gen->add_option("--cells", gen_cells, "number of cells")->required();
  mesh_gen->add_option("--seed", gen_seed, "generator seed")->required();
  mesh_gen->add_option("--lloyd", gen_lloyd, "Lloyd iterations (default 100)");
  mesh_gen->add_option("--out", gen_out, "output .vempoly path")->required();

  // tables
  auto* tables = app.add_subcommand(
      "tables", "kernel dimensions and inf-sup eigenvalue per mesh and k");
  std::vector<std::string> tables_meshes;
  std::vector<int> tables_k{1, 2, 3};
  std::string tables_out;
  tables->add_option("--meshes", tables_meshes, "comma-separated mesh files")
      ->required()
      ->delimiter(',');
  tables->add_option("--k", tables_k, "degrees, e.g. 1,2,3")->delimiter(',');
  tables->add_option("--out", tables_out, "output CSV path (default stdout)");

  // sweep
  auto* sweep_cmd = app.add_subcommand(
      "sweep", "eigenvalue curves versus one stabilization parameter");
  std::string sweep_mesh;
  int sweep_k = 1;
  std::string sweep_axis = "alpha";
  double sweep_fixed = 1.0;
  std::string sweep_grid;
  int sweep_m = 30;
  bool sweep_raw = false;
  std::string sweep_out;
  sweep_cmd->add_option("--mesh", sweep_mesh, "mesh file")->required();
  sweep_cmd->add_option("--k", sweep_k, "degree")->check(CLI::Range(1, 3));
  sweep_cmd->add_option("--axis", sweep_axis, "alpha or beta")
      ->check(CLI::IsMember({"alpha", "beta"}));
  sweep_cmd->add_option("--fixed", sweep_fixed,
                        "value of the non-swept parameter");
  sweep_cmd->add_option("--grid", sweep_grid, "parameter grid a:b:step")
      ->required();
  sweep_cmd->add_option("--m", sweep_m, "number of eigenvalues (default 30)");
  sweep_cmd->add_flag("--raw", sweep_raw,
                      "report eigenvalues unscaled instead of divided by pi^2");
  sweep_cmd->add_option("--out", sweep_out, "output CSV path (default stdout)");

  // converge
  auto* conv = app.add_subcommand(
      "converge", "eigenvalue convergence on square grids");
  int conv_k = 1;
  std::vector<int> conv_grids;
  double conv_alpha = 1.0;
  double conv_beta = 1.0;
  int conv_m = 1;
  std::string conv_out;
  conv->add_option("--k", conv_k, "degree")->check(CLI::Range(1, 3));
  conv->add_option("--grids", conv_grids, "grid sizes, e.g. 4,8,16,32")
      ->required()
      ->delimiter(',');
  conv->add_option("--alpha", conv_alpha, "alpha value");
  conv->add_option("--beta", conv_beta, "beta value");
  conv->add_option("--m", conv_m, "number of eigenvalues tracked");
  conv->add_option("--out", conv_out, "output CSV path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (toy->parsed()) {
      const ToyResult result =
          run_toy(toy_case, toy_variant, parse_grid(toy_grid));
      write_output(result.csv, toy_out);
      if (result.failed_points > 0) {
        std::cerr << "toy: " << result.failed_points
                  << " grid points failed to solve\n";
        return kExitNumerical;
      }
      if (result.max_discrepancy > 1e-9) {
        std::cerr << "toy: max discrepancy " << result.max_discrepancy
                  << " exceeds 1e-9\n";
        return kExitVerification;
      }
      return kExitOk;
    }
    if (mesh_gen->parsed()) {
      const PolygonalMesh mesh =
          generate_voronoi(gen_cells, gen_seed, gen_lloyd);
      save(mesh, gen_out);
      return kExitOk;
    }
    if (tables->parsed()) {
      std::vector<PolygonalMesh> meshes;
      meshes.reserve(tables_meshes.size());
      for (const auto& path : tables_meshes) meshes.push_back(load(path));
      const TablesResult result = run_tables(meshes, tables_meshes, tables_k);
      write_output(result.csv, tables_out);
      return kExitOk;
    }
    if (sweep_cmd->parsed()) {
      const PolygonalMesh mesh = load(sweep_mesh);
      const SweepAxis axis =
          sweep_axis == "alpha" ? SweepAxis::kAlpha : SweepAxis::kBeta;
      const SweepCsvResult result =
          run_sweep(mesh, sweep_k, axis, sweep_fixed, parse_grid(sweep_grid),
                    sweep_m, sweep_raw);
      write_output(result.csv, sweep_out);
      int failed = 0;
      for (const auto& pt : result.sweep.points)
        if (!pt.ok()) ++failed;
      if (failed > 0) {
        std::cerr << "sweep: " << failed << " grid points failed to solve\n";
        return kExitNumerical;
      }
      return kExitOk;
    }
    if (conv->parsed()) {
      const ConvergenceResult result =
          run_convergence(conv_k, conv_grids, conv_alpha, conv_beta, conv_m);
      write_output(result.csv, conv_out);
      return kExitOk;
    }
  } catch (const specpencil::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const specpencil::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const specpencil::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitConfig;
}
