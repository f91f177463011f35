#pragma once

#include "llg/field.hpp"

namespace llg {

// Second-order cell-centered Laplacian with homogeneous Neumann boundaries.
// Boundary cells use a mirror ghost equal to the cell value, so the stencil
// degenerates to a one-sided difference there. Acts componentwise.
void laplacian_neumann(const VectorField& f, VectorField& out);

VectorField laplacian_neumann(const VectorField& f);

}  // namespace llg
