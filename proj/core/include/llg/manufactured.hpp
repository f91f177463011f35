#pragma once

#include <string>

#include "llg/field.hpp"
#include "llg/grid.hpp"
#include "llg/vec3.hpp"

namespace llg {

// Exact solutions of the forced equation, both of the form
// (cos(phi) sin t, sin(phi) sin t, cos t) with a spatial phase phi:
//   exact_1d: phi = cos(pi x)
//   exact_3d: phi = X(x) Y(y) Z(z) with X = x^2 (1-x)^2 and likewise Y, Z.
// Both satisfy the homogeneous Neumann condition on the unit domain.
enum class ExactSolutionId { exact_1d, exact_3d };

Vec3 exact_solution(ExactSolutionId id, const Vec3& p, double t);
Vec3 exact_time_derivative(ExactSolutionId id, const Vec3& p, double t);
Vec3 exact_laplacian(ExactSolutionId id, const Vec3& p, double t);

// f_e = dm_e/dt + m_e x Lap(m_e) + alpha m_e x (m_e x Lap(m_e));
// tangential to m_e pointwise.
Vec3 forcing(ExactSolutionId id, const Vec3& p, double t, double alpha);

// Named initial conditions. All are unit length pointwise; the traveling
// profile does not satisfy the Neumann condition (it is a robustness case).
// The x-phase 3-D profile varies along x only.
enum class InitialProfileId { exact1d, xphase3d, traveling3d, xyz3d, cosprod3d };

int profile_dim(InitialProfileId id);
const char* profile_name(InitialProfileId id);
// Throws std::invalid_argument for unknown names.
InitialProfileId parse_profile(const std::string& name);

Vec3 profile_value(InitialProfileId id, const Vec3& p, double T0);

// Samples the profile at cell centers. Throws on grid/profile dimension mismatch.
VectorField initial_profile(InitialProfileId id, const Grid& g, double T0);

// Samples exact_solution at cell centers.
VectorField sample_exact(ExactSolutionId id, const Grid& g, double t);

}  // namespace llg
