#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "llg/errors.hpp"
#include "llg/field.hpp"
#include "llg/solvers.hpp"

namespace llg {

enum class Scheme { proposed, scheme1_explicit, scheme3_semi_implicit, bdf1_projection };
enum class ForcingMode { none, direct, rotational };

const char* scheme_name(Scheme s);
Scheme parse_scheme(const std::string& name);
const char* forcing_mode_name(ForcingMode m);
ForcingMode parse_forcing_mode(const std::string& name);

// Source term sampled at a point and time.
using ForcingFn = std::function<Vec3(const Vec3&, double)>;

// Called once per completed step with read-only access to the state.
using Observer = std::function<void(std::int64_t step, double t, const VectorField& m)>;

struct SchemeConfig {
  Scheme scheme = Scheme::proposed;
  double alpha = 0.0;
  double k = 1e-3;
  ForcingMode forcing_mode = ForcingMode::none;
  SolverConfig solver;
  double blowup_threshold = 1e6;
};

struct StepDiagnostics {
  double time = 0.0;
  double energy = 0.0;
  double unit_deviation = 0.0;
  SolveReport solve;
  bool has_solve = false;
};

struct Trajectory {
  std::vector<double> times;                 // step count + 1 entries, starts at t0
  std::vector<StepDiagnostics> diagnostics;  // one entry per step
  std::vector<VectorField> snapshots;        // populated when snapshot_stride > 0
};

// One step of each scheme, advancing from t_n to t_n + cfg.k. The forcing
// callback may be empty when cfg.forcing_mode == none and is never invoked in
// that mode. The source term enters only the final update of a step: the
// proposed scheme's predictor stage stays unforced. Rotational forcing folds
// f(t_{n+1}) into the rotation axis as m_n x f, keeping the update an exact
// per-cell rotation; direct forcing adds f to the update's right-hand side
// instead and gives up exact norm preservation.

// Predictor solve for an intermediate state, then a per-cell rotation about
// c = Lap(m~) + alpha m_n x Lap(m~).
VectorField step_proposed(const VectorField& m_n, double t_n, const SchemeConfig& cfg,
                          const ForcingFn& forcing = {}, SolveReport* report = nullptr);

// Rotation about Lap(m_n); explicit stiff term, CFL-limited.
VectorField step_scheme1(const VectorField& m_n, double t_n, const SchemeConfig& cfg,
                         const ForcingFn& forcing = {});

// Rotation about Lap((I - k Lap)^{-1} m_n); the smoothing bounds the per-step
// rotation angle independently of k/h^2.
VectorField step_scheme3(const VectorField& m_n, double t_n, const SchemeConfig& cfg,
                         const ForcingFn& forcing = {}, SolveReport* report = nullptr);

// Predictor solve, then pointwise normalization. Throws
// DegenerateProjectionError if any cell magnitude falls below 1e-8.
VectorField step_bdf1_projection(const VectorField& m_n, double t_n, const SchemeConfig& cfg,
                                 const ForcingFn& forcing = {}, SolveReport* report = nullptr);

// Runs round((T - t0)/cfg.k) steps with the step size re-derived so T is hit
// exactly (T == t0 is allowed and returns m0). Per-step diagnostics record
// time, exchange energy, unit deviation, and the solve report where the
// scheme performs one. A guard aborts with BlowupError when any component
// exceeds cfg.blowup_threshold or goes non-finite; all numerical failures
// carry the step index and time.
std::pair<VectorField, Trajectory> evolve(const VectorField& m0, double t0, double T,
                                          const SchemeConfig& cfg, const ForcingFn& forcing = {},
                                          const std::vector<Observer>& observers = {},
                                          int snapshot_stride = 0);

}  // namespace llg
