#pragma once

#include <cstdint>
#include <random>

#include "llg/field.hpp"
#include "llg/grid.hpp"
#include "llg/manufactured.hpp"
#include "llg/vec3.hpp"

namespace testutil {

inline llg::Vec3 rand_vec(std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, 1.0);
  return {g(rng) * scale, g(rng) * scale, g(rng) * scale};
}

inline llg::Vec3 rand_unit(std::mt19937_64& rng) {
  llg::Vec3 v = rand_vec(rng);
  while (llg::norm(v) < 1e-3) v = rand_vec(rng);
  return v / llg::norm(v);
}

inline llg::VectorField random_field(const llg::Grid& g, std::uint64_t seed, double scale = 1.0) {
  std::mt19937_64 rng(seed);
  llg::VectorField f(g);
  for (std::int64_t c = 0; c < g.cells(); ++c) f.set(c, rand_vec(rng, scale));
  return f;
}

inline llg::VectorField random_unit_field(const llg::Grid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  llg::VectorField f(g);
  for (std::int64_t c = 0; c < g.cells(); ++c) f.set(c, rand_unit(rng));
  return f;
}

// Sixth-order central second derivative along one coordinate of a 3-vector
// function; evaluates outside the unit domain, which the closed forms permit.
template <class F>
llg::Vec3 fd_second_derivative(const F& f, const llg::Vec3& p, int axis, double delta) {
  static const double w[7] = {2.0, -27.0, 270.0, -490.0, 270.0, -27.0, 2.0};
  llg::Vec3 acc{0, 0, 0};
  for (int o = -3; o <= 3; ++o) {
    llg::Vec3 q = p;
    if (axis == 0) q.x += o * delta;
    if (axis == 1) q.y += o * delta;
    if (axis == 2) q.z += o * delta;
    acc += w[o + 3] * f(q);
  }
  return acc / (180.0 * delta * delta);
}

// Sixth-order central first derivative, same conventions.
template <class F>
llg::Vec3 fd_first_derivative(const F& f, const llg::Vec3& p, int axis, double delta) {
  static const double w[7] = {-1.0, 9.0, -45.0, 0.0, 45.0, -9.0, 1.0};
  llg::Vec3 acc{0, 0, 0};
  for (int o = -3; o <= 3; ++o) {
    llg::Vec3 q = p;
    if (axis == 0) q.x += o * delta;
    if (axis == 1) q.y += o * delta;
    if (axis == 2) q.z += o * delta;
    acc += w[o + 3] * f(q);
  }
  return acc / (60.0 * delta);
}

inline llg::Vec3 fd_laplacian(llg::ExactSolutionId id, const llg::Vec3& p, double t, double delta) {
  const auto f = [&](const llg::Vec3& q) { return llg::exact_solution(id, q, t); };
  llg::Vec3 acc = fd_second_derivative(f, p, 0, delta);
  if (id == llg::ExactSolutionId::exact_3d) {
    acc += fd_second_derivative(f, p, 1, delta);
    acc += fd_second_derivative(f, p, 2, delta);
  }
  return acc;
}

}  // namespace testutil
