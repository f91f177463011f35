#pragma once

#include "llg/field.hpp"

namespace llg {

// Max over cells of the Euclidean length of the 3-vector.
double norm_linf(const VectorField& e);

// sqrt(cell_volume * sum of squared 3-vector lengths).
double norm_l2(const VectorField& e);

// sqrt(l2^2 + seminorm^2) with the seminorm built from forward differences
// across interior faces along each active axis, weighted by cell volume.
// Equals norm_l2 for constant fields and is never below it.
double norm_h1(const VectorField& e);

// Quadrature of the squared gradient over interior faces: the discrete
// exchange energy. Zero for uniform fields.
double exchange_energy(const VectorField& m);

// Max over cells of | |m_c| - 1 |.
double max_unit_deviation(const VectorField& m);

}  // namespace llg
