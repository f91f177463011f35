#include "llg/studies.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "llg/field_io.hpp"
#include "llg/manufactured.hpp"
#include "llg/norms.hpp"

namespace llg {

namespace {

const std::vector<double>& reference_k_list() {
  static const std::vector<double> ks = {2e-2, 1e-2, 5e-3, 2.5e-3, 1.25e-3, 6.25e-4, 3.125e-4};
  return ks;
}

const std::vector<std::int64_t>& reference_n_list() {
  static const std::vector<std::int64_t> ns = {16, 24, 32, 48, 64};
  return ns;
}

std::vector<std::pair<std::int64_t, std::int64_t>> reference_pairs_3d(bool include_finest) {
  std::vector<std::pair<std::int64_t, std::int64_t>> p = {{10, 10}, {40, 20}, {57, 24}, {78, 28}};
  if (include_finest) p.emplace_back(102, 32);
  return p;
}

VectorField difference(const VectorField& a, const VectorField& b) {
  require_same_grid(a, b, "difference");
  VectorField d(a.grid());
  for (std::size_t i = 0; i < d.size(); ++i) d.data()[i] = a.data()[i] - b.data()[i];
  return d;
}

ForcingFn make_forcing(ExactSolutionId id, double alpha) {
  return [id, alpha](const Vec3& p, double t) { return forcing(id, p, t, alpha); };
}

void fill_diagnostics(ConvergenceRow& row, const Trajectory& traj) {
  double iters = 0.0;
  double res = 0.0;
  std::int64_t count = 0;
  for (const StepDiagnostics& d : traj.diagnostics) {
    if (!d.has_solve) continue;
    iters += d.solve.iterations;
    if (d.solve.final_relative_residual > res) res = d.solve.final_relative_residual;
    ++count;
  }
  row.iters_mean = count > 0 ? iters / static_cast<double>(count) : 0.0;
  row.residual_max = res;
}

struct ErrorColumns {
  std::vector<double> linf, l2, h1;
};

ErrorColumns columns_of(const std::vector<ConvergenceRow>& rows) {
  ErrorColumns c;
  for (const ConvergenceRow& r : rows) {
    c.linf.push_back(r.err_linf);
    c.l2.push_back(r.err_l2);
    c.h1.push_back(r.err_h1);
  }
  return c;
}

void fit_orders(ConvergenceTable& table, const std::vector<double>& params, bool vs_k) {
  if (table.rows.size() < 2) return;
  const ErrorColumns c = columns_of(table.rows);
  ColumnOrders o;
  o.linf = estimate_order(params, c.linf);
  o.l2 = estimate_order(params, c.l2);
  o.h1 = estimate_order(params, c.h1);
  if (vs_k) {
    table.orders_vs_k = o;
    table.has_orders_vs_k = true;
  } else {
    table.orders_vs_h = o;
    table.has_orders_vs_h = true;
  }
}

// One accuracy run: evolve from the exact solution at t=0 and measure the
// error at T. Returns false (and flags the table) on numerical failure.
bool accuracy_row(ConvergenceTable& table, const StudyConfig& cfg, const Grid& grid,
                  ExactSolutionId id, double k) {
  SchemeConfig sc;
  sc.scheme = cfg.scheme;
  sc.alpha = cfg.alpha;
  sc.k = k;
  sc.forcing_mode = cfg.forcing_mode;
  sc.solver = cfg.solver;
  const ForcingFn f = cfg.forcing_mode == ForcingMode::none ? ForcingFn{} : make_forcing(id, cfg.alpha);
  try {
    const VectorField m0 = sample_exact(id, grid, 0.0);
    auto [mT, traj] = evolve(m0, 0.0, cfg.T, sc, f);
    const VectorField e = difference(mT, sample_exact(id, grid, cfg.T));
    ConvergenceRow row;
    row.k = k;
    row.h = grid.h[0];
    row.err_linf = norm_linf(e);
    row.err_l2 = norm_l2(e);
    row.err_h1 = norm_h1(e);
    fill_diagnostics(row, traj);
    table.rows.push_back(row);
    return true;
  } catch (const NumericalError& err) {
    table.aborted = true;
    table.abort_reason = err.what();
    return false;
  }
}

void stamp_metadata(ConvergenceTable& table, const StudyConfig& cfg) {
  table.scheme = cfg.scheme;
  table.alpha = cfg.alpha;
  table.T = cfg.T;
  table.forcing_mode = cfg.forcing_mode;
  table.solver_diagnostics = cfg.solver_diagnostics;
}

}  // namespace

double estimate_order(const std::vector<double>& params, const std::vector<double>& errors) {
  if (params.size() != errors.size()) throw std::invalid_argument("estimate_order: size mismatch");
  if (params.size() < 2) throw std::invalid_argument("estimate_order: need at least 2 samples");
  const std::size_t n = params.size();
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(params[i] > 0.0) || !(errors[i] > 0.0))
      throw std::invalid_argument("estimate_order: parameters and errors must be positive");
    lx[i] = std::log(params[i]);
    ly[i] = std::log(errors[i]);
  }
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("estimate_order: parameters must not be constant");
  return sxy / sxx;
}

std::vector<double> pairwise_orders(const std::vector<double>& params,
                                    const std::vector<double>& errors) {
  if (params.size() != errors.size()) throw std::invalid_argument("pairwise_orders: size mismatch");
  if (params.size() < 2) throw std::invalid_argument("pairwise_orders: need at least 2 samples");
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < params.size(); ++i) {
    if (!(params[i] > 0.0) || !(errors[i] > 0.0) || !(params[i + 1] > 0.0) || !(errors[i + 1] > 0.0))
      throw std::invalid_argument("pairwise_orders: parameters and errors must be positive");
    out.push_back(std::log(errors[i] / errors[i + 1]) / std::log(params[i] / params[i + 1]));
  }
  return out;
}

ConvergenceTable run_temporal_study_1d(StudyConfig cfg) {
  if (cfg.k_list.empty()) cfg.k_list = reference_k_list();
  ConvergenceTable table;
  stamp_metadata(table, cfg);
  const Grid grid = Grid::line(cfg.nx_fixed);
  std::vector<double> ks;
  for (double k : cfg.k_list) {
    if (!accuracy_row(table, cfg, grid, ExactSolutionId::exact_1d, k)) break;
    ks.push_back(k);
  }
  fit_orders(table, ks, /*vs_k=*/true);
  return table;
}

ConvergenceTable run_spatial_study_1d(StudyConfig cfg) {
  if (cfg.n_list.empty()) cfg.n_list = reference_n_list();
  ConvergenceTable table;
  stamp_metadata(table, cfg);
  std::vector<double> hs;
  for (std::int64_t n : cfg.n_list) {
    const Grid grid = Grid::line(n);
    if (!accuracy_row(table, cfg, grid, ExactSolutionId::exact_1d, cfg.k_fixed)) break;
    hs.push_back(grid.h[0]);
  }
  fit_orders(table, hs, /*vs_k=*/false);
  return table;
}

ConvergenceTable run_coupled_study_3d(StudyConfig cfg) {
  if (cfg.pairs_3d.empty()) cfg.pairs_3d = reference_pairs_3d(cfg.include_finest_3d);
  ConvergenceTable table;
  stamp_metadata(table, cfg);
  std::vector<double> ks, hs;
  for (const auto& [n0, n] : cfg.pairs_3d) {
    const Grid grid = Grid::box(n, n, n);
    const double k = cfg.T / static_cast<double>(n0);
    if (!accuracy_row(table, cfg, grid, ExactSolutionId::exact_3d, k)) break;
    ks.push_back(k);
    hs.push_back(grid.h[0]);
  }
  fit_orders(table, ks, /*vs_k=*/true);
  fit_orders(table, hs, /*vs_k=*/false);
  return table;
}

NormTable run_norm_study(StudyConfig cfg) {
  if (cfg.dim != 1 && cfg.dim != 3) throw std::invalid_argument("run_norm_study: dim must be 1 or 3");
  NormTable table;
  SchemeConfig sc;
  sc.scheme = cfg.scheme;
  sc.alpha = cfg.alpha;
  sc.forcing_mode = ForcingMode::none;
  sc.solver = cfg.solver;

  auto run_level = [&](const Grid& grid, InitialProfileId profile, double k) {
    sc.k = k;
    try {
      const VectorField m0 = initial_profile(profile, grid, cfg.T0);
      double dev = max_unit_deviation(m0);
      auto [mT, traj] = evolve(m0, 0.0, cfg.T, sc);
      for (const StepDiagnostics& d : traj.diagnostics)
        if (d.unit_deviation > dev) dev = d.unit_deviation;
      table.rows.push_back({k, grid.h[0], dev});
      return true;
    } catch (const NumericalError& err) {
      table.aborted = true;
      table.abort_reason = err.what();
      return false;
    }
  };

  if (cfg.dim == 1) {
    if (cfg.k_list.empty()) cfg.k_list = reference_k_list();
    const Grid grid = Grid::line(cfg.nx_fixed);
    for (double k : cfg.k_list)
      if (!run_level(grid, InitialProfileId::exact1d, k)) break;
  } else {
    if (cfg.pairs_3d.empty()) cfg.pairs_3d = reference_pairs_3d(cfg.include_finest_3d);
    for (const auto& [n0, n] : cfg.pairs_3d)
      if (!run_level(Grid::box(n, n, n), InitialProfileId::xyz3d, cfg.T / static_cast<double>(n0)))
        break;
  }
  return table;
}

void write_table_csv(const ConvergenceTable& table, const std::filesystem::path& path) {
  if (table.rows.size() < 2)
    throw std::invalid_argument("write_table_csv: need at least 2 rows");
  std::ofstream os(path);
  if (!os) throw std::runtime_error("write_table_csv: cannot open " + path.string());
  os << "k,h,err_linf,err_l2,err_h1";
  if (table.solver_diagnostics) os << ",iters_mean,residual_max";
  os << '\n';
  for (const ConvergenceRow& r : table.rows) {
    os << format_double(r.k) << ',' << format_double(r.h) << ',' << format_double(r.err_linf) << ','
       << format_double(r.err_l2) << ',' << format_double(r.err_h1);
    if (table.solver_diagnostics)
      os << ',' << format_double(r.iters_mean) << ',' << format_double(r.residual_max);
    os << '\n';
  }
  // Order rows carry the label in the column of the fitted parameter.
  if (table.has_orders_vs_k)
    os << "order,," << format_double(table.orders_vs_k.linf) << ','
       << format_double(table.orders_vs_k.l2) << ',' << format_double(table.orders_vs_k.h1) << '\n';
  if (table.has_orders_vs_h)
    os << ",order," << format_double(table.orders_vs_h.linf) << ','
       << format_double(table.orders_vs_h.l2) << ',' << format_double(table.orders_vs_h.h1) << '\n';
  if (!os) throw std::runtime_error("write_table_csv: write failed for " + path.string());
}

void write_table_csv(const NormTable& table, const std::filesystem::path& path) {
  if (table.rows.empty()) throw std::invalid_argument("write_table_csv: empty norm table");
  std::ofstream os(path);
  if (!os) throw std::runtime_error("write_table_csv: cannot open " + path.string());
  os << "k,h,max_unit_deviation\n";
  for (const NormRow& r : table.rows)
    os << format_double(r.k) << ',' << format_double(r.h) << ',' << format_double(r.max_unit_deviation)
       << '\n';
  if (!os) throw std::runtime_error("write_table_csv: write failed for " + path.string());
}

}  // namespace llg
