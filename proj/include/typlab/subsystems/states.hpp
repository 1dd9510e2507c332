#pragma once

#include <array>

#include "typlab/numerics/grid.hpp"

namespace typlab::subsystems {

/// exp(-(x - y)^2 / 4s^2 - (x + y)^2 / 4S^2), normalized on a 2D grid.
ComplexField correlated_gaussian(const Grid& grid, double s, double big_s);

/// phi(x) chi(y) with Gaussian factors of widths sigma and centers center.
ComplexField product_state(const Grid& grid, std::array<double, 2> center, std::array<double, 2> sigma);

/// Gaussian branch centered at (x, y) with widths (sx, sy).
struct Branch {
  double x = 0.0;
  double y = 0.0;
  double sx = 1.0;
  double sy = 0.5;
};

/// (phi1 chi1 + phi2 chi2) / norm, each branch a Gaussian product.
ComplexField two_branch_state(const Grid& grid, const Branch& first, const Branch& second);

/// 1D normalized Gaussian exp(-(x - c)^2 / 4 sigma^2) on the x-grid of a 2D grid.
ComplexField gaussian_factor(const Grid& grid2d, double center, double sigma);

}  // namespace typlab::subsystems
