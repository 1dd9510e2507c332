#include "typlab/bohmian/wavefunction.hpp"

#include <cmath>
#include <numbers>

#include "typlab/errors.hpp"
#include "typlab/numerics/fft.hpp"

namespace typlab::bohmian {

void Units::validate() const {
  if (!(hbar > 0.0)) throw ConfigError("hbar must be positive");
  if (!(mass[0] > 0.0) || !(mass[1] > 0.0)) throw ConfigError("masses must be positive");
}

WaveFunction::WaveFunction(ComplexField psi, Units units, std::vector<double> potential)
    : psi_(std::move(psi)), units_(units), potential_(std::move(potential)) {
  units_.validate();
  if (potential_.empty()) {
    potential_.assign(psi_.size(), 0.0);
  } else {
    if (potential_.size() != psi_.size()) throw ConfigError("potential size does not match the grid");
    for (const double v : potential_) {
      if (!std::isfinite(v)) throw ConfigError("potential must be finite");
      if (v != 0.0) has_potential_ = true;
    }
  }
  if (!(psi_.norm_squared() > 0.0)) throw DomainError("wave function has zero norm");
  psi_.normalize();
}

double WaveFunction::norm() const { return std::sqrt(psi_.norm_squared()); }

double WaveFunction::energy() const {
  const Grid& g = grid();
  const ComplexField spec = dft_forward(psi_);
  const auto k = g.wavenumbers();
  const std::size_t n = g.points();
  double kinetic = 0.0;
  double weight = 0.0;
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const double a2 = std::norm(spec[i]);
    double t = units_.hbar * units_.hbar * k[i % n] * k[i % n] / (2.0 * units_.mass[0]);
    if (g.dimension() == 2) t += units_.hbar * units_.hbar * k[i / n] * k[i / n] / (2.0 * units_.mass[1]);
    kinetic += t * a2;
    weight += a2;
  }
  double potential = 0.0;
  double mass = 0.0;
  for (std::size_t i = 0; i < psi_.size(); ++i) {
    const double r = std::norm(psi_[i]);
    potential += potential_[i] * r;
    mass += r;
  }
  return kinetic / weight + potential / mass;
}

ComplexField gaussian_packet(const Grid& grid, double center, double sigma, double k0) {
  if (grid.dimension() != 1) throw ConfigError("gaussian_packet needs a 1D grid");
  if (!(sigma > 0.0)) throw ConfigError("packet width must be positive");
  ComplexField f(grid);
  for (std::size_t i = 0; i < grid.points(); ++i) {
    const double x = grid.coordinate(i) - center;
    f[i] = std::exp(-x * x / (4.0 * sigma * sigma)) * std::polar(1.0, k0 * grid.coordinate(i));
  }
  f.normalize();
  return f;
}

ComplexField gaussian_product_2d(const Grid& grid, std::array<double, 2> center, std::array<double, 2> sigma) {
  if (grid.dimension() != 2) throw ConfigError("gaussian_product_2d needs a 2D grid");
  if (!(sigma[0] > 0.0) || !(sigma[1] > 0.0)) throw ConfigError("packet widths must be positive");
  ComplexField f(grid);
  for (std::size_t iy = 0; iy < grid.points(); ++iy) {
    const double y = grid.coordinate(iy) - center[1];
    for (std::size_t ix = 0; ix < grid.points(); ++ix) {
      const double x = grid.coordinate(ix) - center[0];
      f.at(ix, iy) = std::exp(-x * x / (4.0 * sigma[0] * sigma[0]) - y * y / (4.0 * sigma[1] * sigma[1]));
    }
  }
  f.normalize();
  return f;
}

ComplexField harmonic_eigenstate(const Grid& grid, int n, double mass, double omega, double hbar) {
  if (grid.dimension() != 1) throw ConfigError("harmonic_eigenstate needs a 1D grid");
  if (n < 0) throw ConfigError("eigenstate index must be non-negative");
  if (!(mass > 0.0) || !(omega > 0.0) || !(hbar > 0.0)) throw ConfigError("oscillator parameters must be positive");
  const double scale = std::sqrt(mass * omega / hbar);
  ComplexField f(grid);
  for (std::size_t i = 0; i < grid.points(); ++i) {
    const double xi = scale * grid.coordinate(i);
    // normalized Hermite functions: psi_{k+1} = sqrt(2/(k+1)) xi psi_k - sqrt(k/(k+1)) psi_{k-1}
    double prev = 0.0;
    double cur = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * xi * xi);
    for (int k = 0; k < n; ++k) {
      const double next = std::sqrt(2.0 / (k + 1.0)) * xi * cur - std::sqrt(k / (k + 1.0)) * prev;
      prev = cur;
      cur = next;
    }
    f[i] = cur;
  }
  f.normalize();
  return f;
}

ComplexField plane_wave(const Grid& grid, long long mode) {
  if (grid.dimension() != 1) throw ConfigError("plane_wave needs a 1D grid");
  ComplexField f(grid);
  const double k = 2.0 * std::numbers::pi * static_cast<double>(mode) / grid.length();
  for (std::size_t i = 0; i < grid.points(); ++i) f[i] = std::polar(1.0, k * grid.coordinate(i));
  f.normalize();
  return f;
}

std::vector<double> harmonic_potential(const Grid& grid, const Units& units, double omega) {
  std::vector<double> v(grid.size());
  const std::size_t n = grid.points();
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double x = grid.coordinate(i % n);
    v[i] = 0.5 * units.mass[0] * omega * omega * x * x;
    if (grid.dimension() == 2) {
      const double y = grid.coordinate(i / n);
      v[i] += 0.5 * units.mass[1] * omega * omega * y * y;
    }
  }
  return v;
}

double free_gaussian_width(double sigma0, double t, double mass, double hbar) {
  const double r = hbar * t / (2.0 * mass * sigma0 * sigma0);
  return sigma0 * std::sqrt(1.0 + r * r);
}

}  // namespace typlab::bohmian
