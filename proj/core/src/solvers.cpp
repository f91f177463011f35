#include "llg/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "llg/laplacian.hpp"
#include "llg/parallel.hpp"
#include "llg/vec3.hpp"

namespace llg {

namespace {

using Op = std::function<void(const VectorField&, VectorField&)>;

// Serial reductions keep results bit-identical across runs.
double vdot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double vnorm(const std::vector<double>& a) { return std::sqrt(vdot(a, a)); }

void validate(const SolverConfig& cfg) {
  if (!(cfg.rel_tol > 0.0) || !(cfg.abs_tol > 0.0))
    throw std::invalid_argument("SolverConfig: tolerances must be positive");
  if (cfg.max_iterations < 0)
    throw std::invalid_argument("SolverConfig: max_iterations must be >= 1 (0 selects the default)");
}

int derive_max_iterations(const SolverConfig& cfg, std::int64_t unknowns) {
  if (cfg.max_iterations > 0) return cfg.max_iterations;
  return static_cast<int>(std::min<std::int64_t>(10 * unknowns, 10000));
}

double rel_of(double rn, double bnorm) { return bnorm > 0.0 ? rn / bnorm : rn; }

void compute_residual(const Op& a, const VectorField& b, const VectorField& x, VectorField& work,
                      VectorField& r) {
  a(x, work);
  for (std::size_t i = 0; i < r.size(); ++i) r.data()[i] = b.data()[i] - work.data()[i];
}

void apply_precond(const Op* precond, const VectorField& in, VectorField& out) {
  if (precond && *precond)
    (*precond)(in, out);
  else
    out.raw() = in.raw();
}

[[noreturn]] void fail(const char* what, int it, double rel) {
  SolveReport rep;
  rep.iterations = it;
  rep.final_relative_residual = rel;
  rep.converged = false;
  throw SolverError(what, rep);
}

// Conjugate gradients with a true-residual check at every convergence gate:
// if the recursively updated residual passes but the recomputed one does not,
// the sweep restarts from the current iterate.
SolveReport run_cg(const Op& a, const VectorField& b, VectorField& x, double rel_tol, double abs_tol,
                   int max_it, const Op* precond) {
  const double bnorm = vnorm(b.raw());
  const double tol = std::max(rel_tol * bnorm, abs_tol);
  const Grid& g = b.grid();
  VectorField r(g), z(g), p(g), q(g);
  int it = 0;
  while (true) {
    compute_residual(a, b, x, q, r);
    double rn = vnorm(r.raw());
    if (!std::isfinite(rn)) fail("cg: non-finite residual", it, rn);
    if (rn <= tol) return {it, rel_of(rn, bnorm), true};
    if (it >= max_it) return {it, rel_of(rn, bnorm), false};

    apply_precond(precond, r, z);
    p.raw() = z.raw();
    double rz = vdot(r.raw(), z.raw());
    while (it < max_it) {
      a(p, q);
      const double pq = vdot(p.raw(), q.raw());
      if (!std::isfinite(pq) || pq <= 0.0) fail("cg: breakdown (operator not positive definite?)", it, rel_of(rn, bnorm));
      const double alpha = rz / pq;
      for (std::size_t i = 0; i < x.size(); ++i) x.data()[i] += alpha * p.data()[i];
      for (std::size_t i = 0; i < r.size(); ++i) r.data()[i] -= alpha * q.data()[i];
      ++it;
      rn = vnorm(r.raw());
      if (!std::isfinite(rn)) fail("cg: non-finite residual", it, rn);
      if (rn <= tol) break;  // gate; outer loop re-verifies with the true residual
      apply_precond(precond, r, z);
      const double rz2 = vdot(r.raw(), z.raw());
      const double beta = rz2 / rz;
      rz = rz2;
      for (std::size_t i = 0; i < p.size(); ++i) p.data()[i] = z.data()[i] + beta * p.data()[i];
    }
  }
}

// BiCGStab with the same gate-then-verify structure.
SolveReport run_bicgstab(const Op& a, const VectorField& b, VectorField& x, double rel_tol,
                         double abs_tol, int max_it, const Op* precond) {
  const double bnorm = vnorm(b.raw());
  const double tol = std::max(rel_tol * bnorm, abs_tol);
  const Grid& g = b.grid();
  VectorField r(g), rhat(g), p(g), v(g), s(g), t(g), phat(g), shat(g);
  int it = 0;
  while (true) {
    compute_residual(a, b, x, t, r);
    double rn = vnorm(r.raw());
    if (!std::isfinite(rn)) fail("bicgstab: non-finite residual", it, rn);
    if (rn <= tol) return {it, rel_of(rn, bnorm), true};
    if (it >= max_it) return {it, rel_of(rn, bnorm), false};

    rhat.raw() = r.raw();
    p.fill({0, 0, 0});
    v.fill({0, 0, 0});
    double rho = 1.0, alpha = 1.0, omega = 1.0;
    while (it < max_it) {
      const double rho1 = vdot(rhat.raw(), r.raw());
      if (!std::isfinite(rho1)) fail("bicgstab: non-finite iterate", it, rel_of(rn, bnorm));
      // r drifted exactly orthogonal to the shadow residual: restart the
      // sweep from the true residual instead of giving up. A fresh sweep has
      // rho = |r|^2 > 0, so restarts cannot loop without progress.
      if (rho1 == 0.0) break;
      const double beta = (rho1 / rho) * (alpha / omega);
      for (std::size_t i = 0; i < p.size(); ++i)
        p.data()[i] = r.data()[i] + beta * (p.data()[i] - omega * v.data()[i]);
      apply_precond(precond, p, phat);
      a(phat, v);
      const double rhv = vdot(rhat.raw(), v.raw());
      if (!std::isfinite(rhv) || rhv == 0.0) fail("bicgstab: breakdown (r_hat . v = 0)", it, rel_of(rn, bnorm));
      alpha = rho1 / rhv;
      for (std::size_t i = 0; i < s.size(); ++i) s.data()[i] = r.data()[i] - alpha * v.data()[i];
      const double sn = vnorm(s.raw());
      if (!std::isfinite(sn)) fail("bicgstab: non-finite iterate", it, rel_of(rn, bnorm));
      if (sn <= tol) {
        for (std::size_t i = 0; i < x.size(); ++i) x.data()[i] += alpha * phat.data()[i];
        ++it;
        break;  // gate
      }
      apply_precond(precond, s, shat);
      a(shat, t);
      const double tt = vdot(t.raw(), t.raw());
      if (!std::isfinite(tt) || tt == 0.0) fail("bicgstab: breakdown (t = 0)", it, rel_of(rn, bnorm));
      omega = vdot(t.raw(), s.raw()) / tt;
      if (!std::isfinite(omega)) fail("bicgstab: non-finite iterate", it, rel_of(rn, bnorm));
      if (omega == 0.0) {
        // Stalled smoothing step. Bank the CG half-update (alpha != 0 because
        // rho and r_hat.v were both nonzero) and restart from the true residual.
        for (std::size_t i = 0; i < x.size(); ++i) x.data()[i] += alpha * phat.data()[i];
        ++it;
        break;
      }
      for (std::size_t i = 0; i < x.size(); ++i)
        x.data()[i] += alpha * phat.data()[i] + omega * shat.data()[i];
      for (std::size_t i = 0; i < r.size(); ++i) r.data()[i] = s.data()[i] - omega * t.data()[i];
      ++it;
      rn = vnorm(r.raw());
      if (!std::isfinite(rn)) fail("bicgstab: non-finite residual", it, rn);
      if (rn <= tol) break;  // gate
      rho = rho1;
    }
  }
}

// --- 3x3 LU with partial pivoting, for the block tridiagonal elimination ---

struct Lu3 {
  double m[3][3];
  int piv[3];
};

Lu3 lu3_factor(const Mat3& a) {
  Lu3 f;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) f.m[i][j] = a.a[i][j];
  for (int i = 0; i < 3; ++i) f.piv[i] = i;
  for (int col = 0; col < 2; ++col) {
    int best = col;
    for (int row = col + 1; row < 3; ++row)
      if (std::fabs(f.m[row][col]) > std::fabs(f.m[best][col])) best = row;
    if (best != col) {
      for (int j = 0; j < 3; ++j) std::swap(f.m[col][j], f.m[best][j]);
      std::swap(f.piv[col], f.piv[best]);
    }
    if (f.m[col][col] == 0.0) fail("block elimination: singular pivot", 0, 0.0);
    for (int row = col + 1; row < 3; ++row) {
      const double l = f.m[row][col] / f.m[col][col];
      f.m[row][col] = l;
      for (int j = col + 1; j < 3; ++j) f.m[row][j] -= l * f.m[col][j];
    }
  }
  if (f.m[2][2] == 0.0) fail("block elimination: singular pivot", 0, 0.0);
  return f;
}

Vec3 lu3_solve(const Lu3& f, const Vec3& b) {
  const double in[3] = {b.x, b.y, b.z};
  double y[3];
  for (int i = 0; i < 3; ++i) {
    y[i] = in[f.piv[i]];
    for (int j = 0; j < i; ++j) y[i] -= f.m[i][j] * y[j];
  }
  for (int i = 2; i >= 0; --i) {
    for (int j = i + 1; j < 3; ++j) y[i] -= f.m[i][j] * y[j];
    y[i] /= f.m[i][i];
  }
  return {y[0], y[1], y[2]};
}

Mat3 lu3_solve_mat(const Lu3& f, const Mat3& b) {
  Mat3 out;
  for (int col = 0; col < 3; ++col) {
    const Vec3 rhs = {b.a[0][col], b.a[1][col], b.a[2][col]};
    const Vec3 sol = lu3_solve(f, rhs);
    out.a[0][col] = sol.x;
    out.a[1][col] = sol.y;
    out.a[2][col] = sol.z;
  }
  return out;
}

// Per-cell coupling of the predictor operator: C w = P x w + alpha P x (P x w).
Mat3 coupling_matrix(const Vec3& p, double alpha) {
  const Mat3 kp = cross_matrix(p);
  return kp + alpha * (kp * kp);
}

// Block tridiagonal elimination for the 1-D predictor system. Row i couples
// v_{i-1}, v_i, v_{i+1} with blocks (E_i, I - nb*E_i, E_i), E_i = kappa*C_i,
// nb the number of interior neighbors (mirror ghosts drop boundary arms).
VectorField predictor_direct_1d(const VectorField& m_prev, const VectorField& rhs, double k,
                                double alpha) {
  const Grid& g = m_prev.grid();
  const std::int64_t n = g.cells();
  const double kappa = k / (g.h[0] * g.h[0]);
  std::vector<Mat3> u(static_cast<std::size_t>(n));
  std::vector<Vec3> y(static_cast<std::size_t>(n));
  const Mat3 eye = Mat3::identity();

  for (std::int64_t i = 0; i < n; ++i) {
    const Mat3 e = kappa * coupling_matrix(m_prev.at(i), alpha);
    const double nb = (i == 0 || i == n - 1) ? 1.0 : 2.0;
    Mat3 d = eye - nb * e;
    Vec3 b = rhs.at(i);
    if (i > 0) {
      d = d - e * u[static_cast<std::size_t>(i - 1)];
      b = b - e * y[static_cast<std::size_t>(i - 1)];
    }
    const Lu3 f = lu3_factor(d);
    if (i < n - 1) u[static_cast<std::size_t>(i)] = lu3_solve_mat(f, e);
    y[static_cast<std::size_t>(i)] = lu3_solve(f, b);
  }

  VectorField x(g);
  x.set(n - 1, y[static_cast<std::size_t>(n - 1)]);
  for (std::int64_t i = n - 2; i >= 0; --i)
    x.set(i, y[static_cast<std::size_t>(i)] - u[static_cast<std::size_t>(i)] * x.at(i + 1));
  return x;
}

// Scalar tridiagonal (Thomas) solve for the 1-D Helmholtz system; the matrix
// is the same for all three components, so factor once and sweep each.
VectorField helmholtz_direct_1d(const VectorField& rhs, double k) {
  const Grid& g = rhs.grid();
  const std::int64_t n = g.cells();
  const double kappa = k / (g.h[0] * g.h[0]);
  const double off = -kappa;
  std::vector<double> denom(static_cast<std::size_t>(n)), cp(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    const double d = 1.0 + ((i == 0 || i == n - 1) ? 1.0 : 2.0) * kappa;
    denom[static_cast<std::size_t>(i)] = i == 0 ? d : d - off * cp[static_cast<std::size_t>(i - 1)];
    cp[static_cast<std::size_t>(i)] = off / denom[static_cast<std::size_t>(i)];
  }
  VectorField x(g);
  std::vector<double> w(static_cast<std::size_t>(n));
  for (int comp = 0; comp < 3; ++comp) {
    w[0] = rhs.data()[comp] / denom[0];
    for (std::int64_t i = 1; i < n; ++i)
      w[static_cast<std::size_t>(i)] =
          (rhs.data()[3 * i + comp] - off * w[static_cast<std::size_t>(i - 1)]) /
          denom[static_cast<std::size_t>(i)];
    x.data()[3 * (n - 1) + comp] = w[static_cast<std::size_t>(n - 1)];
    for (std::int64_t i = n - 2; i >= 0; --i)
      x.data()[3 * i + comp] =
          w[static_cast<std::size_t>(i)] - cp[static_cast<std::size_t>(i)] * x.data()[3 * (i + 1) + comp];
  }
  return x;
}

// Verifies a direct solve against the forward operator; one round of
// iterative refinement before giving up.
template <class DirectFn>
SolveReport verify_direct(const Op& a, const VectorField& b, VectorField& x, double rel_tol,
                          double abs_tol, const DirectFn& resolve) {
  const double bnorm = vnorm(b.raw());
  const double tol = std::max(rel_tol * bnorm, abs_tol);
  const Grid& g = b.grid();
  VectorField work(g), r(g);
  for (int pass = 1; pass <= 2; ++pass) {
    compute_residual(a, b, x, work, r);
    const double rn = vnorm(r.raw());
    if (!std::isfinite(rn)) fail("direct solve: non-finite residual", pass, rn);
    if (rn <= tol) return {pass, rel_of(rn, bnorm), true};
    if (pass == 2) fail("direct solve: residual above tolerance after refinement", pass, rel_of(rn, bnorm));
    const VectorField dx = resolve(r);
    for (std::size_t i = 0; i < x.size(); ++i) x.data()[i] += dx.data()[i];
  }
  fail("direct solve: unreachable", 2, 0.0);
}

SolverMethod resolve_method(const SolverConfig& cfg, int dim, bool symmetric) {
  SolverMethod m = cfg.method;
  if (m == SolverMethod::automatic)
    m = dim == 1 ? SolverMethod::direct_banded
                 : (symmetric ? SolverMethod::conjugate_gradient : SolverMethod::bicgstab);
  if (m == SolverMethod::direct_banded && dim != 1)
    throw std::invalid_argument("direct_banded solver is 1-D only");
  if (m == SolverMethod::conjugate_gradient && !symmetric)
    throw std::invalid_argument("conjugate_gradient requires a symmetric operator; use bicgstab");
  return m;
}

// Right block-Jacobi preconditioner for the predictor. The per-cell diagonal
// block is I + c*(P + alpha*P^2) with P the cross matrix of p = m_prev(cell)
// and c = k * diag(Lap); it fixes p and acts as mu*I + c*P across p, so it
// inverts in closed form. Without it BiCGStab stalls once k/h^2 gets large:
// the spectrum hugs the imaginary axis, preconditioned it clusters around 1.
Op make_predictor_block_jacobi(const VectorField& m_prev, double k, double alpha) {
  const Grid& g = m_prev.grid();
  const std::int64_t nx = g.n[0], ny = g.n[1], nz = g.n[2];
  const double ix2 = 1.0 / (g.h[0] * g.h[0]);
  const double iy2 = 1.0 / (g.h[1] * g.h[1]);
  const double iz2 = 1.0 / (g.h[2] * g.h[2]);
  std::vector<double> cs(static_cast<std::size_t>(g.cells()));
  for (std::int64_t c = 0; c < g.cells(); ++c) {
    const std::int64_t i = c % nx;
    const std::int64_t j = (c / nx) % ny;
    const std::int64_t kk = c / (nx * ny);
    double d = -ix2 * ((i > 0 ? 1 : 0) + (i < nx - 1 ? 1 : 0));
    if (ny > 1) d -= iy2 * ((j > 0 ? 1 : 0) + (j < ny - 1 ? 1 : 0));
    if (nz > 1) d -= iz2 * ((kk > 0 ? 1 : 0) + (kk < nz - 1 ? 1 : 0));
    cs[static_cast<std::size_t>(c)] = k * d;
  }
  return [&m_prev, cs = std::move(cs), alpha](const VectorField& in, VectorField& out) {
    parallel_for(in.cells(), [&](std::int64_t b, std::int64_t e) {
      for (std::int64_t q = b; q < e; ++q) {
        const Vec3 p = m_prev.at(q);
        const Vec3 u = in.at(q);
        const double n2 = norm2(p);
        const double c = cs[static_cast<std::size_t>(q)];
        if (n2 == 0.0 || c == 0.0) {
          out.set(q, u);
          continue;
        }
        const double s = dot(p, u) / n2;
        const double mu = 1.0 - c * alpha * n2;
        const double den = mu * mu + c * c * n2;
        const Vec3 ut{u.x - s * p.x, u.y - s * p.y, u.z - s * p.z};
        const Vec3 pxu = cross(p, u);
        out.set(q, {s * p.x + (mu * ut.x - c * pxu.x) / den,
                    s * p.y + (mu * ut.y - c * pxu.y) / den,
                    s * p.z + (mu * ut.z - c * pxu.z) / den});
      }
    });
  };
}

}  // namespace

void apply_helmholtz(const VectorField& v, double k, VectorField& out) {
  require_same_grid(v, out, "apply_helmholtz");
  laplacian_neumann(v, out);
  const double* src = v.data();
  double* dst = out.data();
  parallel_for(static_cast<std::int64_t>(v.size()), [&](std::int64_t b, std::int64_t e) {
    for (std::int64_t i = b; i < e; ++i) dst[i] = src[i] - k * dst[i];
  });
}

void apply_bdf1_predictor(const VectorField& m_prev, const VectorField& v, double k, double alpha,
                          VectorField& out) {
  require_same_grid(m_prev, v, "apply_bdf1_predictor");
  require_same_grid(v, out, "apply_bdf1_predictor");
  laplacian_neumann(v, out);  // out holds Lap(v), consumed cell by cell below
  parallel_for(v.cells(), [&](std::int64_t b, std::int64_t e) {
    for (std::int64_t c = b; c < e; ++c) {
      const Vec3 p = m_prev.at(c);
      const Vec3 pxl = cross(p, out.at(c));
      out.set(c, v.at(c) + k * (pxl + alpha * cross(p, pxl)));
    }
  });
}

std::pair<VectorField, SolveReport> helmholtz_solve(const VectorField& rhs, double k,
                                                    const SolverConfig& cfg) {
  validate(cfg);
  if (k < 0.0) throw std::invalid_argument("helmholtz_solve: k must be nonnegative");
  if (k == 0.0) return {rhs, SolveReport{0, 0.0, true}};

  const Grid& g = rhs.grid();
  const SolverMethod method = resolve_method(cfg, g.dim, /*symmetric=*/true);
  const Op a = [k](const VectorField& v, VectorField& out) { apply_helmholtz(v, k, out); };

  if (method == SolverMethod::direct_banded) {
    VectorField x = helmholtz_direct_1d(rhs, k);
    const SolveReport rep = verify_direct(a, rhs, x, cfg.rel_tol, cfg.abs_tol,
                                          [&](const VectorField& r) { return helmholtz_direct_1d(r, k); });
    return {std::move(x), rep};
  }

  const int max_it = derive_max_iterations(cfg, 3 * g.cells());
  VectorField x = rhs;
  const Op* precond = cfg.preconditioner ? &cfg.preconditioner : nullptr;
  const SolveReport rep = method == SolverMethod::conjugate_gradient
                              ? run_cg(a, rhs, x, cfg.rel_tol, cfg.abs_tol, max_it, precond)
                              : run_bicgstab(a, rhs, x, cfg.rel_tol, cfg.abs_tol, max_it, precond);
  if (!rep.converged)
    throw SolverError("helmholtz_solve: no convergence in " + std::to_string(rep.iterations) +
                          " iterations (relative residual " +
                          std::to_string(rep.final_relative_residual) + ")",
                      rep);
  return {std::move(x), rep};
}

std::pair<VectorField, SolveReport> bdf1_predictor_solve(const VectorField& m_prev,
                                                         const VectorField* f, double k, double alpha,
                                                         const SolverConfig& cfg) {
  validate(cfg);
  if (!(k > 0.0)) throw std::invalid_argument("bdf1_predictor_solve: k must be positive");
  if (!(alpha >= 0.0)) throw std::invalid_argument("bdf1_predictor_solve: alpha must be nonnegative");
  if (f) require_same_grid(m_prev, *f, "bdf1_predictor_solve");

  const Grid& g = m_prev.grid();
  VectorField rhs = m_prev;
  if (f)
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs.data()[i] += k * f->data()[i];

  const SolverMethod method = resolve_method(cfg, g.dim, /*symmetric=*/false);
  const Op a = [&m_prev, k, alpha](const VectorField& v, VectorField& out) {
    apply_bdf1_predictor(m_prev, v, k, alpha, out);
  };

  if (method == SolverMethod::direct_banded) {
    VectorField x = predictor_direct_1d(m_prev, rhs, k, alpha);
    const SolveReport rep =
        verify_direct(a, rhs, x, cfg.rel_tol, cfg.abs_tol,
                      [&](const VectorField& r) { return predictor_direct_1d(m_prev, r, k, alpha); });
    return {std::move(x), rep};
  }

  const int max_it = derive_max_iterations(cfg, 3 * g.cells());
  VectorField x = m_prev;  // the solution is an O(k) perturbation of m_prev
  const Op jacobi = cfg.preconditioner ? Op{} : make_predictor_block_jacobi(m_prev, k, alpha);
  const Op* precond = cfg.preconditioner ? &cfg.preconditioner : &jacobi;
  const SolveReport rep = run_bicgstab(a, rhs, x, cfg.rel_tol, cfg.abs_tol, max_it, precond);
  if (!rep.converged)
    throw SolverError("bdf1_predictor_solve: no convergence in " + std::to_string(rep.iterations) +
                          " iterations (relative residual " +
                          std::to_string(rep.final_relative_residual) + ")",
                      rep);
  return {std::move(x), rep};
}

}  // namespace llg
