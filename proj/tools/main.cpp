// Command-line front end for the magnetization dynamics solver.
//
// Exit codes: 0 success, 1 numerical failure (solver breakdown, blowup,
// degenerate projection, failed selftest), 2 usage error.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "llg/field_io.hpp"
#include "llg/laplacian.hpp"
#include "llg/manufactured.hpp"
#include "llg/norms.hpp"
#include "llg/rotation.hpp"
#include "llg/schemes.hpp"
#include "llg/solvers.hpp"
#include "llg/studies.hpp"

namespace fs = std::filesystem;
using namespace llg;

namespace {

struct CommonOpts {
  std::string out = ".";
  std::string scheme = "proposed";
  std::string forcing = "direct";
  double alpha = 0.01;
  double T = 0.1;
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  int max_iter = 0;
  std::string method = "auto";
  bool solver_diagnostics = false;
};

SolverMethod parse_method(const std::string& name) {
  if (name == "auto") return SolverMethod::automatic;
  if (name == "direct") return SolverMethod::direct_banded;
  if (name == "cg") return SolverMethod::conjugate_gradient;
  if (name == "bicgstab") return SolverMethod::bicgstab;
  throw CLI::ValidationError("--solver-method", "unknown method: " + name);
}

void add_common(CLI::App* cmd, CommonOpts& o, bool with_scheme = true) {
  cmd->add_option("--out", o.out, "Output directory")->capture_default_str();
  if (with_scheme)
    cmd->add_option("--scheme", o.scheme, "Time-stepping scheme")
        ->check(CLI::IsMember({"proposed", "scheme1_explicit", "scheme3_semi_implicit",
                               "bdf1_projection"}))
        ->capture_default_str();
  cmd->add_option("--alpha", o.alpha, "Gilbert damping")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd->add_option("--T", o.T, "Final time")->check(CLI::PositiveNumber)->capture_default_str();
  cmd->add_option("--forcing", o.forcing, "Source handling: none|direct|rotational")
      ->check(CLI::IsMember({"none", "direct", "rotational"}))
      ->capture_default_str();
  cmd->add_option("--solver-rel-tol", o.rel_tol, "Linear solver relative tolerance")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--solver-abs-tol", o.abs_tol, "Linear solver absolute tolerance")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--solver-max-iter", o.max_iter,
                  "Linear solver iteration cap (0 = min(10*unknowns, 10000))")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd->add_option("--solver-method", o.method, "Linear solver: auto|direct|cg|bicgstab")
      ->check(CLI::IsMember({"auto", "direct", "cg", "bicgstab"}))
      ->capture_default_str();
  cmd->add_flag("--solver-diagnostics", o.solver_diagnostics,
                "Add iteration/residual columns to accuracy CSVs");
}

SolverConfig solver_of(const CommonOpts& o) {
  SolverConfig s;
  s.rel_tol = o.rel_tol;
  s.abs_tol = o.abs_tol;
  s.max_iterations = o.max_iter;
  s.method = parse_method(o.method);
  return s;
}

StudyConfig study_of(const CommonOpts& o) {
  StudyConfig cfg;
  cfg.scheme = parse_scheme(o.scheme);
  cfg.alpha = o.alpha;
  cfg.T = o.T;
  cfg.forcing_mode = parse_forcing_mode(o.forcing);
  cfg.solver = solver_of(o);
  cfg.solver_diagnostics = o.solver_diagnostics;
  return cfg;
}

fs::path prepare_out(const CommonOpts& o) {
  fs::path dir(o.out);
  fs::create_directories(dir);
  return dir;
}

void echo(const std::string& key, const std::string& value) {
  std::cout << key << " = " << value << '\n';
}
void echo(const std::string& key, double value) { echo(key, format_double(value)); }
void echo(const std::string& key, std::int64_t value) { echo(key, std::to_string(value)); }

void echo_common(const std::string& command, const CommonOpts& o) {
  echo("command", command);
  echo("scheme", o.scheme);
  echo("alpha", o.alpha);
  echo("T", o.T);
  echo("forcing", o.forcing);
  echo("out", o.out);
}

void echo_list(const std::string& key, const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += format_double(v[i]);
  }
  echo(key, s);
}

int finish_convergence(const ConvergenceTable& table, const fs::path& csv) {
  if (table.rows.size() >= 2) write_table_csv(table, csv);
  if (table.has_orders_vs_k)
    std::cout << "orders_vs_k = " << format_double(table.orders_vs_k.linf) << ','
              << format_double(table.orders_vs_k.l2) << ',' << format_double(table.orders_vs_k.h1)
              << '\n';
  if (table.has_orders_vs_h)
    std::cout << "orders_vs_h = " << format_double(table.orders_vs_h.linf) << ','
              << format_double(table.orders_vs_h.l2) << ',' << format_double(table.orders_vs_h.h1)
              << '\n';
  if (table.aborted) {
    std::cerr << "study aborted: " << table.abort_reason << '\n';
    return 1;
  }
  std::cout << "wrote " << csv.string() << '\n';
  return 0;
}

int finish_norm(const NormTable& table, const fs::path& csv) {
  if (!table.rows.empty()) {
    write_table_csv(table, csv);
    double worst = 0.0;
    for (const NormRow& r : table.rows)
      if (r.max_unit_deviation > worst) worst = r.max_unit_deviation;
    std::cout << "max_unit_deviation = " << format_double(worst) << '\n';
  }
  if (table.aborted) {
    std::cerr << "study aborted: " << table.abort_reason << '\n';
    return 1;
  }
  std::cout << "wrote " << csv.string() << '\n';
  return 0;
}

// ---------------------------------------------------------------- selftest --

struct SelftestState {
  int failures = 0;
  void check(const std::string& name, bool ok, double worst) {
    std::cout << (ok ? "PASS " : "FAIL ") << name << " (worst " << format_double(worst) << ")\n";
    if (!ok) ++failures;
  }
};

int run_selftest() {
  std::mt19937_64 rng(20240817u);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  auto rand_vec = [&](double scale) { return Vec3{gauss(rng) * scale, gauss(rng) * scale, gauss(rng) * scale}; };
  auto rand_unit = [&] {
    Vec3 v = rand_vec(1.0);
    while (norm(v) < 1e-3) v = rand_vec(1.0);
    return v / norm(v);
  };
  SelftestState st;

  {  // rotation kernel properties
    const int trials = 100000;
    double w_norm = 0, w_equiv = 0, w_rev = 0, w_orth = 0;
    for (int i = 0; i < trials; ++i) {
      const Vec3 m = rand_vec(2.0);
      const Vec3 a = rand_vec(std::pow(10.0, 6.0 * uni(rng)));
      const double dt = std::pow(10.0, -6.0 * uni(rng));
      const Vec3 mp = cn_rotate(m, a, dt);
      w_norm = std::max(w_norm, std::fabs(norm(mp) - norm(m)) / std::max(norm(m), 1e-300));
      const Mat3 A = cayley_matrix(a, dt);
      const Vec3 viaA = A * m;
      w_equiv = std::max(w_equiv, norm(mp - viaA) / std::max(norm(m), 1e-300));
      const Vec3 back = cn_rotate(mp, -1.0 * a, dt);
      w_rev = std::max(w_rev, norm(back - m) / std::max(norm(m), 1e-300));
      double orth = 0;
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) {
          double e = 0;
          for (int l = 0; l < 3; ++l) e += A.a[l][r] * A.a[l][c];
          orth = std::max(orth, std::fabs(e - (r == c ? 1.0 : 0.0)));
        }
      w_orth = std::max(w_orth, orth);
    }
    st.check("rotation norm preservation", w_norm <= 1e-14, w_norm);
    st.check("rotation closed-form vs matrix", w_equiv <= 1e-13, w_equiv);
    st.check("rotation reversibility", w_rev <= 1e-12, w_rev);
    st.check("cayley orthogonality", w_orth <= 1e-14, w_orth);
  }

  {  // Laplacian annihilates constants; symmetric; negative semidefinite
    double worst = 0;
    for (const Grid& g : {Grid::line(17), Grid::box(5, 6, 7)}) {
      VectorField c(g);
      c.fill(rand_vec(3.0));
      const VectorField lc = laplacian_neumann(c);
      for (std::size_t i = 0; i < lc.size(); ++i) worst = std::max(worst, std::fabs(lc.data()[i]));
    }
    st.check("laplacian annihilates constants", worst <= 1e-10, worst);

    double w_sym = 0, w_nsd = 0;
    for (const Grid& g : {Grid::line(23), Grid::box(6, 5, 4)}) {
      VectorField u(g), v(g);
      for (std::int64_t c = 0; c < g.cells(); ++c) {
        u.set(c, rand_vec(1.0));
        v.set(c, rand_vec(1.0));
      }
      const VectorField lu = laplacian_neumann(u), lv = laplacian_neumann(v);
      double a = 0, b = 0, q = 0;
      for (std::size_t i = 0; i < u.size(); ++i) {
        a += lu.data()[i] * v.data()[i];
        b += u.data()[i] * lv.data()[i];
        q += u.data()[i] * lu.data()[i];
      }
      const double scale = static_cast<double>(u.size()) / (g.h[0] * g.h[0]);
      w_sym = std::max(w_sym, std::fabs(a - b) / scale);
      w_nsd = std::max(w_nsd, q / scale);
    }
    st.check("laplacian symmetry", w_sym <= 1e-12, w_sym);
    st.check("laplacian negative semidefinite", w_nsd <= 1e-12, w_nsd);
  }

  {  // stencil order on the Neumann-compatible cosine profile
    auto stencil_err = [](std::int64_t n) {
      const Grid g = Grid::line(n);
      VectorField f(g);
      const double pi = 3.14159265358979323846;
      for (std::int64_t c = 0; c < n; ++c) f.set(c, {std::cos(pi * g.center(0, c)), 0, 0});
      const VectorField lf = laplacian_neumann(f);
      double worst = 0;
      for (std::int64_t c = 0; c < n; ++c)
        worst = std::max(worst, std::fabs(lf.at(c).x + pi * pi * std::cos(pi * g.center(0, c))));
      return worst;
    };
    const double e64 = stencil_err(64), e128 = stencil_err(128);
    const double ratio = e64 / e128;
    st.check("laplacian second order (cos profile)", ratio > 3.5 && ratio < 4.5, ratio);
  }

  {  // manufactured solutions: unit norm and forcing tangency
    double w_unit = 0, w_tan = 0;
    for (int i = 0; i < 10000; ++i) {
      const Vec3 p{uni(rng), uni(rng), uni(rng)};
      const double t = 6.0 * uni(rng);
      for (ExactSolutionId id : {ExactSolutionId::exact_1d, ExactSolutionId::exact_3d}) {
        const Vec3 m = exact_solution(id, p, t);
        w_unit = std::max(w_unit, std::fabs(norm(m) - 1.0));
        w_tan = std::max(w_tan, std::fabs(dot(forcing(id, p, t, 0.01), m)));
      }
    }
    st.check("exact solutions unit length", w_unit <= 1e-15, w_unit);
    st.check("forcing tangent to solution", w_tan <= 1e-13, w_tan);
  }

  {  // solver residuals on random right-hand sides
    auto check_residual = [&](const Grid& g, bool predictor) {
      VectorField rhs(g), m_prev(g);
      for (std::int64_t c = 0; c < g.cells(); ++c) {
        rhs.set(c, rand_vec(1.0));
        m_prev.set(c, rand_unit());
      }
      const double k = 1e-3;
      VectorField x(g), ax(g);
      if (predictor) {
        x = bdf1_predictor_solve(m_prev, &rhs, k, 0.01).first;
        apply_bdf1_predictor(m_prev, x, k, 0.01, ax);
        VectorField b = m_prev;
        for (std::size_t i = 0; i < b.size(); ++i) b.data()[i] += k * rhs.data()[i];
        double rn = 0, bn = 0;
        for (std::size_t i = 0; i < b.size(); ++i) {
          rn += (b.data()[i] - ax.data()[i]) * (b.data()[i] - ax.data()[i]);
          bn += b.data()[i] * b.data()[i];
        }
        return std::sqrt(rn / bn);
      }
      x = helmholtz_solve(rhs, k).first;
      apply_helmholtz(x, k, ax);
      double rn = 0, bn = 0;
      for (std::size_t i = 0; i < rhs.size(); ++i) {
        rn += (rhs.data()[i] - ax.data()[i]) * (rhs.data()[i] - ax.data()[i]);
        bn += rhs.data()[i] * rhs.data()[i];
      }
      return std::sqrt(rn / bn);
    };
    double worst = 0;
    worst = std::max(worst, check_residual(Grid::line(64), false));
    worst = std::max(worst, check_residual(Grid::box(6, 6, 6), false));
    worst = std::max(worst, check_residual(Grid::line(64), true));
    worst = std::max(worst, check_residual(Grid::box(6, 6, 6), true));
    st.check("linear solves residual-verified", worst <= 1e-10, worst);
  }

  std::cout << (st.failures == 0 ? "selftest OK" : "selftest FAILED") << '\n';
  return st.failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Structure-preserving solver for damped magnetization dynamics"};
  app.require_subcommand(1);
  app.set_config("--config", "", "INI config file (flags override file values)");
  app.allow_config_extras(false);

  int rc = 0;
  const auto run = [&rc](const std::function<int()>& fn) { rc = fn(); };

  // accuracy-time-1d
  auto t1_opts = std::make_shared<CommonOpts>();
  auto t1_klist = std::make_shared<std::vector<double>>();
  auto t1_nx = std::make_shared<std::int64_t>(2000);
  {
    CLI::App* cmd = app.add_subcommand("accuracy-time-1d",
                                       "Temporal convergence against the 1-D exact solution");
    add_common(cmd, *t1_opts);
    cmd->add_option("--nx", *t1_nx, "Cells (h = 1/nx)")->check(CLI::Range(2, 1000000))
        ->capture_default_str();
    cmd->add_option("--klist", *t1_klist, "Time steps, coarse to fine");
    cmd->callback([=, &rc] {
      run([&] {
        StudyConfig cfg = study_of(*t1_opts);
        cfg.nx_fixed = *t1_nx;
        cfg.k_list = *t1_klist;
        echo_common("accuracy-time-1d", *t1_opts);
        echo("nx", *t1_nx);
        ConvergenceTable table = run_temporal_study_1d(cfg);
        std::vector<double> ks;
        for (const auto& r : table.rows) ks.push_back(r.k);
        echo_list("k_list", ks);
        return finish_convergence(table, prepare_out(*t1_opts) / "accuracy_time_1d.csv");
      });
    });
  }

  // accuracy-space-1d
  auto s1_opts = std::make_shared<CommonOpts>();
  auto s1_nlist = std::make_shared<std::vector<std::int64_t>>();
  auto s1_k = std::make_shared<double>(1e-6);
  {
    CLI::App* cmd = app.add_subcommand("accuracy-space-1d",
                                       "Spatial convergence against the 1-D exact solution");
    add_common(cmd, *s1_opts);
    cmd->add_option("--k", *s1_k, "Fixed time step")->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--nlist", *s1_nlist, "Cell counts, coarse to fine");
    cmd->callback([=, &rc] {
      run([&] {
        StudyConfig cfg = study_of(*s1_opts);
        cfg.k_fixed = *s1_k;
        cfg.n_list = *s1_nlist;
        echo_common("accuracy-space-1d", *s1_opts);
        echo("k", *s1_k);
        const ConvergenceTable table = run_spatial_study_1d(cfg);
        return finish_convergence(table, prepare_out(*s1_opts) / "accuracy_space_1d.csv");
      });
    });
  }

  // accuracy-3d
  auto a3_opts = std::make_shared<CommonOpts>();
  auto a3_finest = std::make_shared<bool>(false);
  {
    CLI::App* cmd = app.add_subcommand("accuracy-3d",
                                       "Coupled k = h^2 convergence against the 3-D exact solution");
    add_common(cmd, *a3_opts);
    cmd->add_flag("--include-finest", *a3_finest, "Also run the 32^3 level");
    cmd->callback([=, &rc] {
      run([&] {
        StudyConfig cfg = study_of(*a3_opts);
        cfg.include_finest_3d = *a3_finest;
        echo_common("accuracy-3d", *a3_opts);
        echo("include_finest", std::string(*a3_finest ? "true" : "false"));
        const ConvergenceTable table = run_coupled_study_3d(cfg);
        return finish_convergence(table, prepare_out(*a3_opts) / "accuracy_3d.csv");
      });
    });
  }

  // norm-1d / norm-3d
  auto mknorm = [&](const char* name, int dim) {
    auto opts = std::make_shared<CommonOpts>();
    auto t0 = std::make_shared<double>(0.01);
    auto nx = std::make_shared<std::int64_t>(2000);
    auto klist = std::make_shared<std::vector<double>>();
    auto finest = std::make_shared<bool>(false);
    CLI::App* cmd = app.add_subcommand(name, dim == 1
                                                 ? "Unit-norm drift across the 1-D step sequence"
                                                 : "Unit-norm drift across the 3-D refinement pairs");
    opts->forcing = "none";
    add_common(cmd, *opts);
    cmd->add_option("--T0", *t0, "Initial profile time")->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    if (dim == 1) {
      cmd->add_option("--nx", *nx, "Cells (h = 1/nx)")->check(CLI::Range(2, 1000000))
          ->capture_default_str();
      cmd->add_option("--klist", *klist, "Time steps, coarse to fine");
    } else {
      cmd->add_flag("--include-finest", *finest, "Also run the 32^3 level");
    }
    cmd->callback([=, &rc] {
      run([&] {
        StudyConfig cfg = study_of(*opts);
        cfg.dim = dim;
        cfg.T0 = *t0;
        cfg.nx_fixed = *nx;
        cfg.k_list = *klist;
        cfg.include_finest_3d = *finest;
        echo_common(name, *opts);
        echo("T0", *t0);
        const NormTable table = run_norm_study(cfg);
        return finish_norm(table, prepare_out(*opts) / (dim == 1 ? "norm_1d.csv" : "norm_3d.csv"));
      });
    });
  };
  mknorm("norm-1d", 1);
  mknorm("norm-3d", 3);

  // evolve
  auto ev_opts = std::make_shared<CommonOpts>();
  auto ev_profile = std::make_shared<std::string>("exact1d");
  auto ev_t0 = std::make_shared<double>(0.0);
  auto ev_nx = std::make_shared<std::int64_t>(2000);
  auto ev_n = std::make_shared<std::int64_t>(20);
  auto ev_nt = std::make_shared<std::int64_t>(5);
  {
    CLI::App* cmd = app.add_subcommand("evolve", "Run one configuration and dump the final field");
    ev_opts->forcing = "none";
    add_common(cmd, *ev_opts);
    cmd->add_option("--profile", *ev_profile, "Initial profile")
        ->check(CLI::IsMember({"exact1d", "xphase3d", "traveling3d", "xyz3d", "cosprod3d"}))
        ->capture_default_str();
    cmd->add_option("--T0", *ev_t0, "Initial profile time")->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    cmd->add_option("--nx", *ev_nx, "1-D cells")->check(CLI::Range(2, 1000000))
        ->capture_default_str();
    cmd->add_option("--n", *ev_n, "3-D cells per axis")->check(CLI::Range(2, 1024))
        ->capture_default_str();
    cmd->add_option("--nt", *ev_nt, "Step count")->check(CLI::Range(1, 100000000))
        ->capture_default_str();
    cmd->callback([=, &rc] {
      run([&] {
        const InitialProfileId profile = parse_profile(*ev_profile);
        const Grid grid = profile_dim(profile) == 1 ? Grid::line(*ev_nx)
                                                    : Grid::box(*ev_n, *ev_n, *ev_n);
        SchemeConfig sc;
        sc.scheme = parse_scheme(ev_opts->scheme);
        sc.alpha = ev_opts->alpha;
        sc.k = ev_opts->T / static_cast<double>(*ev_nt);
        sc.forcing_mode = parse_forcing_mode(ev_opts->forcing);
        sc.solver = solver_of(*ev_opts);
        echo_common("evolve", *ev_opts);
        echo("profile", *ev_profile);
        echo("T0", *ev_t0);
        echo(profile_dim(profile) == 1 ? "nx" : "n",
             profile_dim(profile) == 1 ? *ev_nx : *ev_n);
        echo("nt", *ev_nt);
        if (sc.forcing_mode != ForcingMode::none)
          throw std::invalid_argument("evolve: forcing requires a manufactured run; use the accuracy commands");
        const VectorField m0 = initial_profile(profile, grid, *ev_t0);
        auto [mT, traj] = evolve(m0, 0.0, ev_opts->T, sc);
        double dev = max_unit_deviation(m0);
        for (const StepDiagnostics& d : traj.diagnostics)
          if (d.unit_deviation > dev) dev = d.unit_deviation;
        echo("steps", static_cast<std::int64_t>(traj.diagnostics.size()));
        echo("max_unit_deviation", dev);
        echo("final_energy", traj.diagnostics.empty() ? exchange_energy(mT)
                                                      : traj.diagnostics.back().energy);
        const fs::path out = prepare_out(*ev_opts) / "evolve_field.csv";
        write_field_csv(mT, out);
        std::cout << "wrote " << out.string() << '\n';
        return 0;
      });
    });
  }

  // compare
  auto cp_opts = std::make_shared<CommonOpts>();
  auto cp_t0 = std::make_shared<double>(0.0);
  auto cp_nx = std::make_shared<std::int64_t>(2000);
  auto cp_nt = std::make_shared<std::int64_t>(5);
  {
    CLI::App* cmd = app.add_subcommand(
        "compare", "Proposed vs BDF1-projection on identical 1-D data; dumps both fields");
    cp_opts->forcing = "none";
    add_common(cmd, *cp_opts, /*with_scheme=*/false);
    cmd->add_option("--T0", *cp_t0, "Initial profile time")->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    cmd->add_option("--nx", *cp_nx, "1-D cells")->check(CLI::Range(2, 1000000))
        ->capture_default_str();
    cmd->add_option("--nt", *cp_nt, "Step count")->check(CLI::Range(1, 100000000))
        ->capture_default_str();
    cmd->callback([=, &rc] {
      run([&] {
        SchemeConfig sc;
        sc.alpha = cp_opts->alpha;
        sc.k = cp_opts->T / static_cast<double>(*cp_nt);
        sc.solver = solver_of(*cp_opts);
        echo_common("compare", *cp_opts);
        echo("T0", *cp_t0);
        echo("nx", *cp_nx);
        echo("nt", *cp_nt);
        const Grid grid = Grid::line(*cp_nx);
        const VectorField m0 = initial_profile(InitialProfileId::exact1d, grid, *cp_t0);
        sc.scheme = Scheme::proposed;
        auto [m_prop, traj_p] = evolve(m0, 0.0, cp_opts->T, sc);
        sc.scheme = Scheme::bdf1_projection;
        auto [m_proj, traj_q] = evolve(m0, 0.0, cp_opts->T, sc);
        const fs::path dir = prepare_out(*cp_opts);
        write_field_csv(m_prop, dir / "compare_proposed.csv");
        write_field_csv(m_proj, dir / "compare_projection.csv");
        VectorField diff = m_prop;
        for (std::size_t i = 0; i < diff.size(); ++i) diff.data()[i] -= m_proj.data()[i];
        echo("linf_difference", norm_linf(diff));
        echo("proposed_max_unit_deviation",
             [&] {
               double d = 0;
               for (const auto& s : traj_p.diagnostics) d = std::max(d, s.unit_deviation);
               return d;
             }());
        echo("projection_max_unit_deviation",
             [&] {
               double d = 0;
               for (const auto& s : traj_q.diagnostics) d = std::max(d, s.unit_deviation);
               return d;
             }());
        std::cout << "wrote " << (dir / "compare_proposed.csv").string() << " and "
                  << (dir / "compare_projection.csv").string() << '\n';
        return 0;
      });
    });
  }

  // selftest
  {
    CLI::App* cmd = app.add_subcommand("selftest", "Rotation-kernel, stencil, and solver property suites");
    cmd->callback([&rc] { rc = run_selftest(); });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return rc;
}
