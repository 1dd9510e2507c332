#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace typlab {

using Complex = std::complex<double>;

/// Uniform periodic grid on [-L/2, L/2)^dim, dim in {1, 2}.
///
/// Grid point j sits at x_j = -L/2 + j*dx and owns the cell
/// [x_j - dx/2, x_j + dx/2). Flattened 2D storage is row-major with x the
/// fast axis: index = iy * points + ix.
class Grid {
 public:
  Grid(int dimension, std::size_t points_per_axis, double length);

  int dimension() const { return dimension_; }
  std::size_t points() const { return points_; }
  std::size_t size() const;
  double length() const { return length_; }
  double spacing() const { return length_ / static_cast<double>(points_); }
  double origin() const { return -0.5 * length_; }
  /// Volume element dx^dim.
  double cell_volume() const;

  double coordinate(std::size_t index) const { return origin() + spacing() * static_cast<double>(index); }
  std::vector<double> coordinates() const;
  /// Angular wavenumbers in FFT order (0, dk, ..., -dk).
  std::vector<double> wavenumbers() const;

  /// Lower edge of the periodic box (edge of cell 0).
  double box_low() const { return origin() - 0.5 * spacing(); }
  /// Maps x into [box_low, box_low + L).
  double wrap(double x) const;
  std::size_t wrap_index(long long index) const;

  bool operator==(const Grid&) const = default;

 private:
  int dimension_;
  std::size_t points_;
  double length_;
};

bool is_power_of_two(std::size_t n);

/// Complex amplitudes on a grid.
class ComplexField {
 public:
  explicit ComplexField(Grid grid);
  ComplexField(Grid grid, std::vector<Complex> values);

  const Grid& grid() const { return grid_; }
  std::span<Complex> values() { return values_; }
  std::span<const Complex> values() const { return values_; }
  Complex& operator[](std::size_t i) { return values_[i]; }
  const Complex& operator[](std::size_t i) const { return values_[i]; }
  Complex& at(std::size_t ix, std::size_t iy) { return values_[iy * grid_.points() + ix]; }
  const Complex& at(std::size_t ix, std::size_t iy) const { return values_[iy * grid_.points() + ix]; }
  std::size_t size() const { return values_.size(); }

  /// Sum |psi|^2 dV.
  double norm_squared() const;
  void normalize();
  std::vector<double> density() const;

 private:
  Grid grid_;
  std::vector<Complex> values_;
};

}  // namespace typlab
