#include "llg/norms.hpp"

#include <cmath>

namespace llg {

// Reductions stay serial so results are bit-identical run to run.

double norm_linf(const VectorField& e) {
  double best = 0.0;
  for (std::int64_t c = 0; c < e.cells(); ++c) {
    const double v = norm2(e.at(c));
    if (v > best) best = v;
  }
  return std::sqrt(best);
}

double norm_l2(const VectorField& e) {
  double acc = 0.0;
  for (std::int64_t c = 0; c < e.cells(); ++c) acc += norm2(e.at(c));
  return std::sqrt(e.grid().cell_volume() * acc);
}

// Sum of vol * |(f_{next} - f_cur)/h_axis|^2 over pairs of adjacent cells.
static double gradient_quadrature(const VectorField& f) {
  const Grid& g = f.grid();
  const std::int64_t nx = g.n[0], ny = g.n[1], nz = g.n[2];
  const double vol = g.cell_volume();
  double acc = 0.0;
  const std::int64_t strides[3] = {1, nx, nx * ny};
  for (int axis = 0; axis < 3; ++axis) {
    if (g.n[static_cast<std::size_t>(axis)] < 2) continue;
    const double ih2 = 1.0 / (g.h[static_cast<std::size_t>(axis)] * g.h[static_cast<std::size_t>(axis)]);
    const std::int64_t stride = strides[axis];
    for (std::int64_t kk = 0; kk < nz; ++kk)
      for (std::int64_t j = 0; j < ny; ++j)
        for (std::int64_t i = 0; i < nx; ++i) {
          const std::int64_t idx[3] = {i, j, kk};
          if (idx[axis] >= g.n[static_cast<std::size_t>(axis)] - 1) continue;
          const std::int64_t c = g.index(i, j, kk);
          acc += vol * ih2 * norm2(f.at(c + stride) - f.at(c));
        }
  }
  return acc;
}

double norm_h1(const VectorField& e) {
  const double l2 = norm_l2(e);
  return std::sqrt(l2 * l2 + gradient_quadrature(e));
}

double exchange_energy(const VectorField& m) { return gradient_quadrature(m); }

double max_unit_deviation(const VectorField& m) {
  double best = 0.0;
  for (std::int64_t c = 0; c < m.cells(); ++c) {
    const double d = std::fabs(norm(m.at(c)) - 1.0);
    if (d > best) best = d;
  }
  return best;
}

}  // namespace llg
