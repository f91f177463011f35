#include "llg/laplacian.hpp"

#include "llg/parallel.hpp"

namespace llg {

void laplacian_neumann(const VectorField& f, VectorField& out) {
  require_same_grid(f, out, "laplacian_neumann");
  const Grid& g = f.grid();
  const std::int64_t nx = g.n[0], ny = g.n[1], nz = g.n[2];
  const double ix2 = 1.0 / (g.h[0] * g.h[0]);
  const double iy2 = 1.0 / (g.h[1] * g.h[1]);
  const double iz2 = 1.0 / (g.h[2] * g.h[2]);
  const double* src = f.data();
  double* dst = out.data();

  parallel_for(g.cells(), [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t c = begin; c < end; ++c) {
      const std::int64_t i = c % nx;
      const std::int64_t j = (c / nx) % ny;
      const std::int64_t kk = c / (nx * ny);
      // Mirror ghost: out-of-range neighbor collapses onto the cell itself,
      // which zeroes that arm of the stencil.
      const std::int64_t xm = i > 0 ? c - 1 : c;
      const std::int64_t xp = i < nx - 1 ? c + 1 : c;
      const std::int64_t ym = j > 0 ? c - nx : c;
      const std::int64_t yp = j < ny - 1 ? c + nx : c;
      const std::int64_t zm = kk > 0 ? c - nx * ny : c;
      const std::int64_t zp = kk < nz - 1 ? c + nx * ny : c;
      for (int comp = 0; comp < 3; ++comp) {
        const double v = src[3 * c + comp];
        double acc = ix2 * (src[3 * xm + comp] - 2.0 * v + src[3 * xp + comp]);
        if (ny > 1) acc += iy2 * (src[3 * ym + comp] - 2.0 * v + src[3 * yp + comp]);
        if (nz > 1) acc += iz2 * (src[3 * zm + comp] - 2.0 * v + src[3 * zp + comp]);
        dst[3 * c + comp] = acc;
      }
    }
  });
}

VectorField laplacian_neumann(const VectorField& f) {
  VectorField out(f.grid());
  laplacian_neumann(f, out);
  return out;
}

}  // namespace llg
