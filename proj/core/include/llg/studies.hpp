#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "llg/schemes.hpp"

namespace llg {

struct ConvergenceRow {
  double k = 0.0;
  double h = 0.0;
  double err_linf = 0.0;
  double err_l2 = 0.0;
  double err_h1 = 0.0;
  // Solver diagnostics, emitted only when requested.
  double iters_mean = 0.0;
  double residual_max = 0.0;
};

struct ColumnOrders {
  double linf = 0.0;
  double l2 = 0.0;
  double h1 = 0.0;
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;  // coarse to fine
  bool has_orders_vs_k = false;
  bool has_orders_vs_h = false;
  ColumnOrders orders_vs_k;
  ColumnOrders orders_vs_h;
  Scheme scheme = Scheme::proposed;
  double alpha = 0.0;
  double T = 0.0;
  ForcingMode forcing_mode = ForcingMode::direct;
  bool solver_diagnostics = false;
  // Partial results when a row failed mid-study.
  bool aborted = false;
  std::string abort_reason;
};

struct NormRow {
  double k = 0.0;
  double h = 0.0;
  double max_unit_deviation = 0.0;
};

struct NormTable {
  std::vector<NormRow> rows;
  bool aborted = false;
  std::string abort_reason;
};

// Parameters for all studies; the fields a given study ignores are unused.
// Empty lists select the reference sequences the defaults below document.
struct StudyConfig {
  Scheme scheme = Scheme::proposed;
  double alpha = 0.01;
  double T = 0.1;
  ForcingMode forcing_mode = ForcingMode::direct;
  SolverConfig solver;
  // Temporal study and 1-D norm study: {2e-2, 1e-2, 5e-3, 2.5e-3, 1.25e-3, 6.25e-4, 3.125e-4}.
  std::vector<double> k_list;
  // Spatial study cell counts: {16, 24, 32, 48, 64}.
  std::vector<std::int64_t> n_list;
  // Fixed 1-D grid for the temporal and norm studies (h = 5e-4).
  std::int64_t nx_fixed = 2000;
  // Fixed step for the spatial study.
  double k_fixed = 1e-6;
  // 3-D refinement pairs (N0, N) with k = T/N0, h = 1/N:
  // {(10,10), (40,20), (57,24), (78,28)}, plus (102,32) when include_finest_3d.
  std::vector<std::pair<std::int64_t, std::int64_t>> pairs_3d;
  bool include_finest_3d = false;
  // Norm study: dimension and initial-profile time.
  int dim = 1;
  double T0 = 0.01;
  bool solver_diagnostics = false;
};

// Least-squares slope of log(error) against log(parameter) over all rows.
// Requires >= 2 samples and strictly positive inputs.
double estimate_order(const std::vector<double>& params, const std::vector<double>& errors);

// Orders from consecutive row pairs, size n-1.
std::vector<double> pairwise_orders(const std::vector<double>& params,
                                    const std::vector<double>& errors);

// Proposed scheme against the 1-D exact solution, k varying on a fixed fine
// grid. Errors at T in the three norms; orders fitted against k.
ConvergenceTable run_temporal_study_1d(StudyConfig cfg = {});

// As above with h varying at a fixed small k; orders fitted against h.
ConvergenceTable run_spatial_study_1d(StudyConfig cfg = {});

// 3-D exact solution under coupled refinement k = T/N0 ~ h^2; orders fitted
// against both k and h.
ConvergenceTable run_coupled_study_3d(StudyConfig cfg = {});

// Running maximum of max_unit_deviation across every step, per refinement
// level, without forcing. cfg.dim selects the 1-D or 3-D variant.
NormTable run_norm_study(StudyConfig cfg = {});

// Deterministic CSV: header, 17-significant-digit data rows, then order rows
// (label in the column of the fitted parameter). Convergence tables need at
// least 2 rows.
void write_table_csv(const ConvergenceTable& table, const std::filesystem::path& path);
void write_table_csv(const NormTable& table, const std::filesystem::path& path);

}  // namespace llg
