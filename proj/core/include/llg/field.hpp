#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "llg/grid.hpp"
#include "llg/vec3.hpp"

namespace llg {

// Three doubles per cell, array-of-structs layout: data[3*c + comp].
class VectorField {
 public:
  VectorField() = default;
  explicit VectorField(const Grid& g) : grid_(g), data_(static_cast<std::size_t>(3 * g.cells()), 0.0) {}

  const Grid& grid() const { return grid_; }
  std::int64_t cells() const { return grid_.cells(); }

  Vec3 at(std::int64_t c) const {
    const std::size_t b = static_cast<std::size_t>(3 * c);
    return {data_[b], data_[b + 1], data_[b + 2]};
  }

  void set(std::int64_t c, const Vec3& v) {
    const std::size_t b = static_cast<std::size_t>(3 * c);
    data_[b] = v.x;
    data_[b + 1] = v.y;
    data_[b + 2] = v.z;
  }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  std::size_t size() const { return data_.size(); }

  std::vector<double>& raw() { return data_; }
  const std::vector<double>& raw() const { return data_; }

  void fill(const Vec3& v) {
    for (std::int64_t c = 0; c < cells(); ++c) set(c, v);
  }

 private:
  Grid grid_;
  std::vector<double> data_;
};

inline void require_same_grid(const VectorField& a, const VectorField& b, const char* where) {
  if (!(a.grid() == b.grid())) throw std::invalid_argument(std::string(where) + ": grid mismatch");
}

}  // namespace llg
