#include "llg/manufactured.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace llg {

namespace {

constexpr double kPi = std::numbers::pi;

// Spatial phase phi with its Laplacian and squared gradient; everything about
// the exact solutions reduces to these three scalars plus time factors.
struct Phase {
  double phi;
  double lap_phi;
  double grad2_phi;
};

Phase phase_1d(double x) {
  const double u = std::cos(kPi * x);
  const double ux = -kPi * std::sin(kPi * x);
  const double uxx = -kPi * kPi * u;
  return {u, uxx, ux * ux};
}

// One factor of the polynomial modulation: w(s) = s^2 (1-s)^2.
struct PolyFactor {
  double v, d1, d2;
};

PolyFactor poly_factor(double s) {
  const double oms = 1.0 - s;
  return {s * s * oms * oms, 2.0 * s * oms * (1.0 - 2.0 * s), 2.0 * (1.0 - 6.0 * s + 6.0 * s * s)};
}

Phase phase_3d(const Vec3& p) {
  const PolyFactor X = poly_factor(p.x), Y = poly_factor(p.y), Z = poly_factor(p.z);
  const double u = X.v * Y.v * Z.v;
  const double lap = X.d2 * Y.v * Z.v + X.v * Y.d2 * Z.v + X.v * Y.v * Z.d2;
  const double gx = X.d1 * Y.v * Z.v;
  const double gy = X.v * Y.d1 * Z.v;
  const double gz = X.v * Y.v * Z.d1;
  return {u, lap, gx * gx + gy * gy + gz * gz};
}

Phase phase_of(ExactSolutionId id, const Vec3& p) {
  return id == ExactSolutionId::exact_1d ? phase_1d(p.x) : phase_3d(p);
}

}  // namespace

Vec3 exact_solution(ExactSolutionId id, const Vec3& p, double t) {
  const double phi = phase_of(id, p).phi;
  return {std::cos(phi) * std::sin(t), std::sin(phi) * std::sin(t), std::cos(t)};
}

Vec3 exact_time_derivative(ExactSolutionId id, const Vec3& p, double t) {
  const double phi = phase_of(id, p).phi;
  return {std::cos(phi) * std::cos(t), std::sin(phi) * std::cos(t), -std::sin(t)};
}

Vec3 exact_laplacian(ExactSolutionId id, const Vec3& p, double t) {
  const Phase ph = phase_of(id, p);
  const double c = std::cos(ph.phi), s = std::sin(ph.phi);
  // Lap(cos phi) = -sin(phi) Lap(phi) - cos(phi) |grad phi|^2, and likewise
  // for sin; the third component is spatially constant.
  return {std::sin(t) * (-s * ph.lap_phi - c * ph.grad2_phi),
          std::sin(t) * (c * ph.lap_phi - s * ph.grad2_phi), 0.0};
}

Vec3 forcing(ExactSolutionId id, const Vec3& p, double t, double alpha) {
  const Vec3 m = exact_solution(id, p, t);
  const Vec3 lap = exact_laplacian(id, p, t);
  const Vec3 mxl = cross(m, lap);
  return exact_time_derivative(id, p, t) + mxl + alpha * cross(m, mxl);
}

int profile_dim(InitialProfileId id) { return id == InitialProfileId::exact1d ? 1 : 3; }

const char* profile_name(InitialProfileId id) {
  switch (id) {
    case InitialProfileId::exact1d: return "exact1d";
    case InitialProfileId::xphase3d: return "xphase3d";
    case InitialProfileId::traveling3d: return "traveling3d";
    case InitialProfileId::xyz3d: return "xyz3d";
    case InitialProfileId::cosprod3d: return "cosprod3d";
  }
  throw std::invalid_argument("profile_name: bad id");
}

InitialProfileId parse_profile(const std::string& name) {
  for (InitialProfileId id : {InitialProfileId::exact1d, InitialProfileId::xphase3d,
                              InitialProfileId::traveling3d, InitialProfileId::xyz3d,
                              InitialProfileId::cosprod3d})
    if (name == profile_name(id)) return id;
  throw std::invalid_argument("unknown initial profile: " + name);
}

Vec3 profile_value(InitialProfileId id, const Vec3& p, double T0) {
  switch (id) {
    case InitialProfileId::exact1d:
      return exact_solution(ExactSolutionId::exact_1d, p, T0);
    case InitialProfileId::xphase3d: {
      // Varies along x only; the phase matches the 1-D exact solution.
      const double u = std::cos(kPi * p.x);
      return {std::cos(u) * std::sin(T0), std::sin(u) * std::sin(T0), std::cos(T0)};
    }
    case InitialProfileId::traveling3d: {
      // Polar angle pi x + T0, azimuth cos(cos(pi x)); not Neumann-compatible.
      const double theta = kPi * p.x + T0;
      const double v = std::cos(std::cos(kPi * p.x));
      return {std::cos(v) * std::sin(theta), std::sin(v) * std::sin(theta), std::cos(theta)};
    }
    case InitialProfileId::xyz3d:
      return exact_solution(ExactSolutionId::exact_3d, p, T0);
    case InitialProfileId::cosprod3d: {
      const double u = std::cos(kPi * p.x) * std::cos(kPi * p.y) * std::cos(kPi * p.z);
      return {std::cos(u) * std::sin(T0), std::sin(u) * std::sin(T0), std::cos(T0)};
    }
  }
  throw std::invalid_argument("profile_value: bad id");
}

VectorField initial_profile(InitialProfileId id, const Grid& g, double T0) {
  if (profile_dim(id) != g.dim)
    throw std::invalid_argument(std::string("initial_profile: ") + profile_name(id) + " needs a " +
                                (profile_dim(id) == 1 ? "1" : "3") + "-D grid");
  VectorField out(g);
  for (std::int64_t c = 0; c < g.cells(); ++c) out.set(c, profile_value(id, g.cell_center(c), T0));
  return out;
}

VectorField sample_exact(ExactSolutionId id, const Grid& g, double t) {
  if ((id == ExactSolutionId::exact_1d) != (g.dim == 1))
    throw std::invalid_argument("sample_exact: solution/grid dimension mismatch");
  VectorField out(g);
  for (std::int64_t c = 0; c < g.cells(); ++c) out.set(c, exact_solution(id, g.cell_center(c), t));
  return out;
}

}  // namespace llg
