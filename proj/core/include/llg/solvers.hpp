#pragma once

#include <functional>
#include <utility>

#include "llg/errors.hpp"
#include "llg/field.hpp"

namespace llg {

enum class SolverMethod {
  automatic,            // direct_banded in 1-D, Krylov in 3-D
  direct_banded,        // 1-D only
  conjugate_gradient,   // SPD operators (Helmholtz)
  bicgstab              // nonsymmetric operators (predictor)
};

struct SolverConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  // 0 means min(10 * unknowns, 10000), chosen at solve time.
  int max_iterations = 0;
  SolverMethod method = SolverMethod::automatic;
  // Optional hook applying an approximate inverse, out ~ K^{-1} in.
  // Identity when empty; no preconditioner ships by default.
  std::function<void(const VectorField&, VectorField&)> preconditioner;
};

// out = v - k * Lap(v)
void apply_helmholtz(const VectorField& v, double k, VectorField& out);

// out = v + k * [m_prev x Lap(v) + alpha * m_prev x (m_prev x Lap(v))]
void apply_bdf1_predictor(const VectorField& m_prev, const VectorField& v, double k, double alpha,
                          VectorField& out);

// Solves (I - k Lap) g = rhs. The operator is SPD; conjugate gradients in 3-D,
// banded elimination in 1-D. Every returned solution has been verified against
// the forward operator; non-convergence throws SolverError with the report.
std::pair<VectorField, SolveReport> helmholtz_solve(const VectorField& rhs, double k,
                                                    const SolverConfig& cfg = {});

// Solves the semi-implicit predictor system
//   v + k [m_prev x Lap(v) + alpha m_prev x (m_prev x Lap(v))] = m_prev + k f
// for v, matrix-free. f may be null (zero forcing). Nonsymmetric, so the
// iterative path is BiCGStab, started from m_prev; 1-D default is a block
// tridiagonal elimination. Residual-verified like helmholtz_solve.
std::pair<VectorField, SolveReport> bdf1_predictor_solve(const VectorField& m_prev, const VectorField* f,
                                                         double k, double alpha,
                                                         const SolverConfig& cfg = {});

}  // namespace llg
