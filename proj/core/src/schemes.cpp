#include "llg/schemes.hpp"

#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>

#include "llg/laplacian.hpp"
#include "llg/norms.hpp"
#include "llg/parallel.hpp"
#include "llg/rotation.hpp"

namespace llg {

namespace {

// parallel_for over cells with exception capture: kernels may throw (the
// rotation guard, the projection guard), and an exception must not escape a
// worker thread. First one wins.
template <class F>
void for_cells(std::int64_t n, F&& f) {
  std::exception_ptr eptr;
  std::mutex mu;
  parallel_for(n, [&](std::int64_t b, std::int64_t e) {
    try {
      for (std::int64_t c = b; c < e; ++c) f(c);
    } catch (...) {
      const std::scoped_lock lock(mu);
      if (!eptr) eptr = std::current_exception();
    }
  });
  if (eptr) std::rethrow_exception(eptr);
}

void validate(const SchemeConfig& cfg, const ForcingFn& forcing) {
  if (!(cfg.k > 0.0)) throw std::invalid_argument("SchemeConfig: k must be positive");
  if (!(cfg.alpha >= 0.0)) throw std::invalid_argument("SchemeConfig: alpha must be nonnegative");
  if (cfg.forcing_mode != ForcingMode::none && !forcing)
    throw std::invalid_argument("SchemeConfig: forcing_mode set but no forcing callback given");
}

// Samples f at cell centers for t_{n+1}. Only called when forcing_mode != none.
VectorField sample_forcing(const Grid& g, const ForcingFn& forcing, double t) {
  VectorField out(g);
  for_cells(g.cells(), [&](std::int64_t c) { out.set(c, forcing(g.cell_center(c), t)); });
  return out;
}

// Shared corrector: rotate m_n about the given per-cell axis, folding the
// forcing in per cfg.forcing_mode.
VectorField rotate_about(const VectorField& m_n, const VectorField& axis, const VectorField* fhat,
                         const SchemeConfig& cfg) {
  VectorField out(m_n.grid());
  const double k = cfg.k;
  const ForcingMode mode = cfg.forcing_mode;
  for_cells(m_n.cells(), [&](std::int64_t c) {
    const Vec3 m = m_n.at(c);
    Vec3 a = axis.at(c);
    if (fhat && mode == ForcingMode::rotational) a += cross(m, fhat->at(c));
    if (fhat && mode == ForcingMode::direct)
      out.set(c, cn_rotate_forced(m, a, k, fhat->at(c)));
    else
      out.set(c, cn_rotate(m, a, k));
  });
  return out;
}

}  // namespace

const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::proposed: return "proposed";
    case Scheme::scheme1_explicit: return "scheme1_explicit";
    case Scheme::scheme3_semi_implicit: return "scheme3_semi_implicit";
    case Scheme::bdf1_projection: return "bdf1_projection";
  }
  throw std::invalid_argument("scheme_name: bad enum");
}

Scheme parse_scheme(const std::string& name) {
  for (Scheme s : {Scheme::proposed, Scheme::scheme1_explicit, Scheme::scheme3_semi_implicit,
                   Scheme::bdf1_projection})
    if (name == scheme_name(s)) return s;
  throw std::invalid_argument("unknown scheme: " + name);
}

const char* forcing_mode_name(ForcingMode m) {
  switch (m) {
    case ForcingMode::none: return "none";
    case ForcingMode::direct: return "direct";
    case ForcingMode::rotational: return "rotational";
  }
  throw std::invalid_argument("forcing_mode_name: bad enum");
}

ForcingMode parse_forcing_mode(const std::string& name) {
  for (ForcingMode m : {ForcingMode::none, ForcingMode::direct, ForcingMode::rotational})
    if (name == forcing_mode_name(m)) return m;
  throw std::invalid_argument("unknown forcing mode: " + name);
}

VectorField step_proposed(const VectorField& m_n, double t_n, const SchemeConfig& cfg,
                          const ForcingFn& forcing, SolveReport* report) {
  validate(cfg, forcing);
  const bool has_f = cfg.forcing_mode != ForcingMode::none;
  VectorField fhat;
  if (has_f) fhat = sample_forcing(m_n.grid(), forcing, t_n + cfg.k);

  // Step 1: the predictor is the unforced first line; the source term enters
  // only through the corrector rotation.
  auto [mt, rep] = bdf1_predictor_solve(m_n, nullptr, cfg.k, cfg.alpha, cfg.solver);
  if (report) *report = rep;

  // Step 2: rotate about c = Lap(m~) + alpha m_n x Lap(m~).
  VectorField axis = laplacian_neumann(mt);
  const double alpha = cfg.alpha;
  for_cells(m_n.cells(), [&](std::int64_t c) {
    const Vec3 b = axis.at(c);
    axis.set(c, b + alpha * cross(m_n.at(c), b));
  });
  return rotate_about(m_n, axis, has_f ? &fhat : nullptr, cfg);
}

VectorField step_scheme1(const VectorField& m_n, double t_n, const SchemeConfig& cfg,
                         const ForcingFn& forcing) {
  validate(cfg, forcing);
  const bool has_f = cfg.forcing_mode != ForcingMode::none;
  VectorField fhat;
  if (has_f) fhat = sample_forcing(m_n.grid(), forcing, t_n + cfg.k);
  const VectorField axis = laplacian_neumann(m_n);
  return rotate_about(m_n, axis, has_f ? &fhat : nullptr, cfg);
}

VectorField step_scheme3(const VectorField& m_n, double t_n, const SchemeConfig& cfg,
                         const ForcingFn& forcing, SolveReport* report) {
  validate(cfg, forcing);
  const bool has_f = cfg.forcing_mode != ForcingMode::none;
  VectorField fhat;
  if (has_f) fhat = sample_forcing(m_n.grid(), forcing, t_n + cfg.k);
  auto [g, rep] = helmholtz_solve(m_n, cfg.k, cfg.solver);
  if (report) *report = rep;
  const VectorField axis = laplacian_neumann(g);
  return rotate_about(m_n, axis, has_f ? &fhat : nullptr, cfg);
}

VectorField step_bdf1_projection(const VectorField& m_n, double t_n, const SchemeConfig& cfg,
                                 const ForcingFn& forcing, SolveReport* report) {
  validate(cfg, forcing);
  const bool has_f = cfg.forcing_mode != ForcingMode::none;
  VectorField fhat;
  if (has_f) fhat = sample_forcing(m_n.grid(), forcing, t_n + cfg.k);
  auto [mt, rep] = bdf1_predictor_solve(m_n, has_f ? &fhat : nullptr, cfg.k, cfg.alpha, cfg.solver);
  if (report) *report = rep;
  for_cells(mt.cells(), [&](std::int64_t c) {
    const Vec3 v = mt.at(c);
    const double len = norm(v);
    if (!(len >= 1e-8))
      throw DegenerateProjectionError(
          "bdf1_projection: cell magnitude " + std::to_string(len) + " below 1e-8 at cell " +
              std::to_string(c),
          c, len);
    mt.set(c, v / len);
  });
  return mt;
}

std::pair<VectorField, Trajectory> evolve(const VectorField& m0, double t0, double T,
                                          const SchemeConfig& cfg, const ForcingFn& forcing,
                                          const std::vector<Observer>& observers,
                                          int snapshot_stride) {
  if (!(T >= t0)) throw std::invalid_argument("evolve: need T >= t0");
  validate(cfg, forcing);

  Trajectory traj;
  traj.times.push_back(t0);
  VectorField m = m0;

  std::int64_t steps = std::llround((T - t0) / cfg.k);
  if (T > t0 && steps < 1) steps = 1;
  if (steps == 0) return {std::move(m), std::move(traj)};

  const double k_eff = (T - t0) / static_cast<double>(steps);
  SchemeConfig scfg = cfg;
  scfg.k = k_eff;

  auto annotate = [](const char* what, std::int64_t step, double t) {
    return std::string(what) + " (step " + std::to_string(step) + ", t = " + std::to_string(t) + ")";
  };

  for (std::int64_t n = 0; n < steps; ++n) {
    const double t_n = t0 + static_cast<double>(n) * k_eff;
    const double t_next = n + 1 == steps ? T : t0 + static_cast<double>(n + 1) * k_eff;
    SolveReport rep;
    bool has_solve = false;
    try {
      switch (scfg.scheme) {
        case Scheme::proposed:
          m = step_proposed(m, t_n, scfg, forcing, &rep);
          has_solve = true;
          break;
        case Scheme::scheme1_explicit:
          m = step_scheme1(m, t_n, scfg, forcing);
          break;
        case Scheme::scheme3_semi_implicit:
          m = step_scheme3(m, t_n, scfg, forcing, &rep);
          has_solve = true;
          break;
        case Scheme::bdf1_projection:
          m = step_bdf1_projection(m, t_n, scfg, forcing, &rep);
          has_solve = true;
          break;
      }
    } catch (const SolverError& e) {
      throw SolverError(annotate(e.what(), n + 1, t_next), e.report());
    } catch (const DegenerateProjectionError& e) {
      throw DegenerateProjectionError(annotate(e.what(), n + 1, t_next), e.cell(), e.magnitude());
    } catch (const NumericalError& e) {
      throw NumericalError(annotate(e.what(), n + 1, t_next));
    }

    // Blowup guard: serial scan, cheap relative to a step.
    const double* d = m.data();
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (!std::isfinite(d[i]) || std::fabs(d[i]) > cfg.blowup_threshold)
        throw BlowupError(annotate("evolve: blowup guard tripped", n + 1, t_next), n + 1, t_next);
    }

    StepDiagnostics diag;
    diag.time = t_next;
    diag.energy = exchange_energy(m);
    diag.unit_deviation = max_unit_deviation(m);
    diag.solve = rep;
    diag.has_solve = has_solve;
    traj.diagnostics.push_back(diag);
    traj.times.push_back(t_next);

    if (snapshot_stride > 0 && ((n + 1) % snapshot_stride == 0 || n + 1 == steps))
      traj.snapshots.push_back(m);
    for (const Observer& obs : observers)
      if (obs) obs(n + 1, t_next, m);
  }
  return {std::move(m), std::move(traj)};
}

}  // namespace llg
