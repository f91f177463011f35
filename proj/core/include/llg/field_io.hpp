#pragma once

#include <filesystem>
#include <string>

#include "llg/field.hpp"

namespace llg {

// Shortest round-trip decimal form, up to 17 significant digits.
std::string format_double(double v);

// CSV dump, one row per cell in storage order. Header is x,m1,m2,m3 for 1-D
// grids and x,y,z,m1,m2,m3 for 3-D grids; coordinates are cell centers.
void write_field_csv(const VectorField& f, const std::filesystem::path& path);

}  // namespace llg
