#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>

#include "llg/vec3.hpp"

namespace llg {

// Uniform cell-centered grid on the unit interval (dim 1) or unit cube (dim 3).
// Cell centers sit at (i + 1/2) * h along each active axis; inactive axes have a
// single layer of extent 1 so that cell_volume() is always the product of spacings.
struct Grid {
  int dim = 1;
  std::array<std::int64_t, 3> n = {2, 1, 1};
  std::array<double, 3> h = {0.5, 1.0, 1.0};

  static Grid line(std::int64_t nx) {
    if (nx < 2) throw std::invalid_argument("Grid::line: need at least 2 cells");
    Grid g;
    g.dim = 1;
    g.n = {nx, 1, 1};
    g.h = {1.0 / static_cast<double>(nx), 1.0, 1.0};
    return g;
  }

  static Grid box(std::int64_t nx, std::int64_t ny, std::int64_t nz) {
    if (nx < 2 || ny < 2 || nz < 2) throw std::invalid_argument("Grid::box: need at least 2 cells per axis");
    Grid g;
    g.dim = 3;
    g.n = {nx, ny, nz};
    g.h = {1.0 / static_cast<double>(nx), 1.0 / static_cast<double>(ny), 1.0 / static_cast<double>(nz)};
    return g;
  }

  std::int64_t cells() const { return n[0] * n[1] * n[2]; }

  double cell_volume() const { return h[0] * h[1] * h[2]; }

  double center(int axis, std::int64_t i) const {
    return (static_cast<double>(i) + 0.5) * h[static_cast<std::size_t>(axis)];
  }

  // Lexicographic cell index, x fastest.
  std::int64_t index(std::int64_t i, std::int64_t j, std::int64_t kk) const {
    return i + n[0] * (j + n[1] * kk);
  }

  Vec3 cell_center(std::int64_t c) const {
    const std::int64_t i = c % n[0];
    const std::int64_t j = (c / n[0]) % n[1];
    const std::int64_t kk = c / (n[0] * n[1]);
    if (dim == 1) return {center(0, i), 0.0, 0.0};
    return {center(0, i), center(1, j), center(2, kk)};
  }

  bool operator==(const Grid& other) const { return dim == other.dim && n == other.n; }
};

}  // namespace llg
