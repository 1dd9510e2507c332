#include "typlab/numerics/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "typlab/errors.hpp"

namespace typlab {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

Grid::Grid(int dimension, std::size_t points_per_axis, double length)
    : dimension_(dimension), points_(points_per_axis), length_(length) {
  if (dimension != 1 && dimension != 2) {
    throw ConfigError("grid dimension must be 1 or 2, got " + std::to_string(dimension));
  }
  if (points_per_axis < 16) {
    throw ConfigError("grid needs at least 16 points per axis");
  }
  if (!is_power_of_two(points_per_axis)) {
    throw ConfigError("grid points per axis must be a power of two, got " + std::to_string(points_per_axis));
  }
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw ConfigError("grid length must be positive and finite");
  }
}

std::size_t Grid::size() const { return dimension_ == 1 ? points_ : points_ * points_; }

double Grid::cell_volume() const {
  const double dx = spacing();
  return dimension_ == 1 ? dx : dx * dx;
}

std::vector<double> Grid::coordinates() const {
  std::vector<double> x(points_);
  for (std::size_t i = 0; i < points_; ++i) x[i] = coordinate(i);
  return x;
}

std::vector<double> Grid::wavenumbers() const {
  std::vector<double> k(points_);
  const double dk = 2.0 * std::numbers::pi / length_;
  const auto n = static_cast<long long>(points_);
  for (long long i = 0; i < n; ++i) {
    const long long m = i < n / 2 ? i : i - n;
    k[static_cast<std::size_t>(i)] = dk * static_cast<double>(m);
  }
  return k;
}

double Grid::wrap(double x) const {
  const double lo = box_low();
  double shifted = std::fmod(x - lo, length_);
  if (shifted < 0.0) shifted += length_;
  // fmod can return exactly length_ after the correction above for tiny negatives
  if (shifted >= length_) shifted -= length_;
  return lo + shifted;
}

std::size_t Grid::wrap_index(long long index) const {
  const auto n = static_cast<long long>(points_);
  long long r = index % n;
  if (r < 0) r += n;
  return static_cast<std::size_t>(r);
}

ComplexField::ComplexField(Grid grid) : grid_(grid), values_(grid.size()) {}

ComplexField::ComplexField(Grid grid, std::vector<Complex> values) : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw ConfigError("field size does not match grid");
  }
}

double ComplexField::norm_squared() const {
  double sum = 0.0;
  for (const auto& v : values_) sum += std::norm(v);
  return sum * grid_.cell_volume();
}

void ComplexField::normalize() {
  const double n2 = norm_squared();
  if (!(n2 > 0.0) || !std::isfinite(n2)) throw DomainError("cannot normalize a zero or non-finite field");
  const double scale = 1.0 / std::sqrt(n2);
  for (auto& v : values_) v *= scale;
}

std::vector<double> ComplexField::density() const {
  std::vector<double> rho(values_.size());
  for (std::size_t i = 0; i < values_.size(); ++i) rho[i] = std::norm(values_[i]);
  return rho;
}

}  // namespace typlab
