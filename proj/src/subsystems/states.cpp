#include "typlab/subsystems/states.hpp"

#include <cmath>

#include "typlab/errors.hpp"
#include "typlab/subsystems/conditional.hpp"

namespace typlab::subsystems {

namespace {

void require_2d(const Grid& g) {
  if (g.dimension() != 2) throw ConfigError("subsystem states live on a 2D (x, y) grid");
}

double gauss(double u, double sigma) { return std::exp(-u * u / (4.0 * sigma * sigma)); }

}  // namespace

ComplexField correlated_gaussian(const Grid& grid, double s, double big_s) {
  require_2d(grid);
  if (!(s > 0.0) || !(big_s > 0.0)) throw ConfigError("correlation widths must be positive");
  ComplexField f(grid);
  for (std::size_t iy = 0; iy < grid.points(); ++iy) {
    const double y = grid.coordinate(iy);
    for (std::size_t ix = 0; ix < grid.points(); ++ix) {
      const double x = grid.coordinate(ix);
      f.at(ix, iy) = gauss(x - y, s) * gauss(x + y, big_s);
    }
  }
  f.normalize();
  return f;
}

ComplexField product_state(const Grid& grid, std::array<double, 2> center, std::array<double, 2> sigma) {
  require_2d(grid);
  if (!(sigma[0] > 0.0) || !(sigma[1] > 0.0)) throw ConfigError("widths must be positive");
  ComplexField f(grid);
  for (std::size_t iy = 0; iy < grid.points(); ++iy) {
    for (std::size_t ix = 0; ix < grid.points(); ++ix) {
      f.at(ix, iy) = gauss(grid.coordinate(ix) - center[0], sigma[0]) * gauss(grid.coordinate(iy) - center[1], sigma[1]);
    }
  }
  f.normalize();
  return f;
}

ComplexField two_branch_state(const Grid& grid, const Branch& first, const Branch& second) {
  require_2d(grid);
  ComplexField a = product_state(grid, {first.x, first.y}, {first.sx, first.sy});
  const ComplexField b = product_state(grid, {second.x, second.y}, {second.sx, second.sy});
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  a.normalize();
  return a;
}

ComplexField gaussian_factor(const Grid& grid2d, double center, double sigma) {
  if (!(sigma > 0.0)) throw ConfigError("width must be positive");
  ComplexField f(x_grid(grid2d));
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = gauss(f.grid().coordinate(i) - center, sigma);
  f.normalize();
  return f;
}

}  // namespace typlab::subsystems
