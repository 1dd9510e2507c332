#pragma once

#include "typlab/numerics/grid.hpp"

namespace typlab::subsystems {

/// Slices with sum |Psi(x, Y)|^2 dx below this fraction of the largest row norm are degenerate.
inline constexpr double kDegenerateSlice = 1e-10;

/// psi^Y(x) = Psi(x, Y) / sqrt(norm) on the x-grid of a 2D field.
struct ConditionalWaveFunction {
  ComplexField psi;
  double y = 0.0;
  /// Integral of |Psi(x, Y)|^2 dx.
  double norm = 0.0;
  double time = 0.0;
};

/// Grid of the x axis of a 2D grid.
Grid x_grid(const Grid& grid2d);

/// Unnormalized row Psi(., Y), linear in y between the bracketing grid rows.
ComplexField slice_at(const ComplexField& psi, double y);

/// Throws DegenerateSliceError when the slice norm falls below
/// `degenerate_threshold` times the largest row norm.
ConditionalWaveFunction conditional_wavefunction(const ComplexField& psi, double y, double time = 0.0,
                                                 double degenerate_threshold = kDegenerateSlice);

/// |<a, b>| / (|a| |b|) on a shared grid.
double normalized_overlap(const ComplexField& a, const ComplexField& b);

}  // namespace typlab::subsystems
