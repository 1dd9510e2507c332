#include "typlab/subsystems/conditional.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "typlab/errors.hpp"

namespace typlab::subsystems {

Grid x_grid(const Grid& grid2d) { return Grid(1, grid2d.points(), grid2d.length()); }

ComplexField slice_at(const ComplexField& psi, double y) {
  const Grid& g = psi.grid();
  if (g.dimension() != 2) throw ConfigError("conditional wave functions need a 2D (x, y) field");
  if (!std::isfinite(y)) throw DomainError("environment coordinate must be finite");
  const double s = (y - g.origin()) / g.spacing();
  const double f = std::floor(s);
  const double w = s - f;
  const std::size_t j0 = g.wrap_index(static_cast<long long>(f));
  const std::size_t j1 = g.wrap_index(static_cast<long long>(f) + 1);
  ComplexField row(x_grid(g));
  for (std::size_t ix = 0; ix < g.points(); ++ix) {
    row[ix] = w == 0.0 ? psi.at(ix, j0) : (1.0 - w) * psi.at(ix, j0) + w * psi.at(ix, j1);
  }
  return row;
}

ConditionalWaveFunction conditional_wavefunction(const ComplexField& psi, double y, double time,
                                                 double degenerate_threshold) {
  ComplexField row = slice_at(psi, y);
  const Grid& g = psi.grid();
  double max_row = 0.0;
  for (std::size_t iy = 0; iy < g.points(); ++iy) {
    double r = 0.0;
    for (std::size_t ix = 0; ix < g.points(); ++ix) r += std::norm(psi.at(ix, iy));
    max_row = std::max(max_row, r * g.spacing());
  }
  const double norm = row.norm_squared();
  if (!(norm > degenerate_threshold * max_row)) {
    std::ostringstream msg;
    msg << "degenerate slice at y = " << y << ": norm " << norm << " below " << degenerate_threshold
        << " of the largest row norm";
    throw DegenerateSliceError(msg.str());
  }
  row.normalize();
  return {std::move(row), y, norm, time};
}

double normalized_overlap(const ComplexField& a, const ComplexField& b) {
  if (!(a.grid() == b.grid())) throw DomainError("overlap needs fields on one grid");
  Complex inner(0.0, 0.0);
  double na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    inner += std::conj(a[i]) * b[i];
    na += std::norm(a[i]);
    nb += std::norm(b[i]);
  }
  if (!(na > 0.0) || !(nb > 0.0)) throw DomainError("overlap of a vanishing field");
  return std::abs(inner) / std::sqrt(na * nb);
}

}  // namespace typlab::subsystems
