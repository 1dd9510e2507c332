#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "typlab/numerics/grid.hpp"
#include "typlab/numerics/rng.hpp"

namespace typlab {

/// Points in a 1D or 2D domain, stored flat: point i occupies coords[i*dim .. i*dim+dim).
struct Samples {
  int dim = 1;
  std::vector<double> coords;

  std::size_t size() const { return coords.size() / static_cast<std::size_t>(dim); }
  double operator()(std::size_t i, int axis) const { return coords[i * static_cast<std::size_t>(dim) + static_cast<std::size_t>(axis)]; }
  std::span<const double> point(std::size_t i) const {
    return std::span<const double>(coords).subspan(i * static_cast<std::size_t>(dim), static_cast<std::size_t>(dim));
  }
  /// One coordinate of every point.
  std::vector<double> axis(int a) const;
};

/// Inverse-CDF sampler over the cells of a grid density with uniform jitter inside a cell.
class DensitySampler {
 public:
  DensitySampler(Grid grid, std::span<const double> density);

  const Grid& grid() const { return grid_; }
  /// Appends one point to `out`.
  void draw(RngStream& rng, std::vector<double>& out) const;
  Samples draw(std::size_t n, RngStream& rng) const;
  /// Sampling split into fixed chunks, chunk c drawn from stream derive_stream(purpose, c).
  /// The result does not depend on the worker count.
  Samples draw_parallel(std::size_t n, std::uint64_t seed, std::string_view purpose, int workers) const;

 private:
  Grid grid_;
  std::vector<double> cumulative_;
};

Samples sample_from_density(const Grid& grid, std::span<const double> density, std::size_t n, RngStream& rng);

}  // namespace typlab
