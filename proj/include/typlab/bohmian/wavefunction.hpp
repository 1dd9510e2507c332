#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "typlab/numerics/grid.hpp"

namespace typlab::bohmian {

/// hbar and one mass per gridded axis. Natural units by default.
struct Units {
  double hbar = 1.0;
  std::array<double, 2> mass{1.0, 1.0};

  void validate() const;
};

/// Normalized amplitude field with its units and a static potential.
class WaveFunction {
 public:
  /// Normalizes `psi`; an empty potential means V = 0.
  explicit WaveFunction(ComplexField psi, Units units = {}, std::vector<double> potential = {});

  const Grid& grid() const { return psi_.grid(); }
  const ComplexField& field() const { return psi_; }
  ComplexField& field() { return psi_; }
  const Units& units() const { return units_; }
  std::span<const double> potential() const { return potential_; }
  bool has_potential() const { return has_potential_; }

  double norm() const;
  void normalize() { psi_.normalize(); }
  std::vector<double> density() const { return psi_.density(); }
  /// <Psi|H|Psi> with a spectral kinetic term.
  double energy() const;

 private:
  ComplexField psi_;
  Units units_;
  std::vector<double> potential_;
  bool has_potential_ = false;
};

/// 1D packet with |psi|^2 the normal density N(center, sigma^2), carrier wavenumber k0.
ComplexField gaussian_packet(const Grid& grid, double center, double sigma, double k0 = 0.0);

/// 1D product exp(-(x-cx)^2/4sx^2 - (y-cy)^2/4sy^2) on a 2D grid.
ComplexField gaussian_product_2d(const Grid& grid, std::array<double, 2> center, std::array<double, 2> sigma);

/// Oscillator eigenstate n for V = m omega^2 x^2 / 2 (Hermite recursion), normalized on the grid.
ComplexField harmonic_eigenstate(const Grid& grid, int n, double mass, double omega, double hbar = 1.0);

/// Plane wave exp(i k x) for grid mode `mode` (k = 2 pi mode / L), 1D.
ComplexField plane_wave(const Grid& grid, long long mode);

/// V = sum over axes of m_a omega^2 x_a^2 / 2.
std::vector<double> harmonic_potential(const Grid& grid, const Units& units, double omega);

/// sigma0 sqrt(1 + (hbar t / 2 m sigma0^2)^2).
double free_gaussian_width(double sigma0, double t, double mass = 1.0, double hbar = 1.0);

}  // namespace typlab::bohmian
