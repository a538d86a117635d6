#pragma once

#include "alfven/field.hpp"

namespace alfven {

// Periodic tricubic interpolation: tensor product of 4-point Lagrange
// cubics through the nodes i-1..i+2 on each axis. Reproduces per-cell
// cubics exactly and converges at O(h^4) on smooth fields. Positions may
// be arbitrary reals; they are wrapped into the box.
double interpolate(const ScalarField& f, const std::array<double, 3>& x);
std::array<double, 3> interpolate(const VectorField3& f,
                                  const std::array<double, 3>& x);

// 1D cubic Lagrange weights for the local coordinate s in [0, 1] between
// node offsets 0 and 1 of the stencil {-1, 0, 1, 2}.
std::array<double, 4> lagrange_cubic_weights(double s);
// d/ds of the weights above.
std::array<double, 4> lagrange_cubic_dweights(double s);

}  // namespace alfven
