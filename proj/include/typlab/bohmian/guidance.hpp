#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "typlab/bohmian/wavefunction.hpp"

namespace typlab::bohmian {

/// Default node threshold: |Psi|^2 < 1e-10 max |Psi|^2 is masked.
inline constexpr double kNodeThreshold = 1e-10;

/// Guiding velocity on the grid, one component per axis.
///
/// Masked points keep the raw (possibly huge) value; callers decide how to
/// treat them.
struct VelocityField {
  Grid grid{1, 16, 1.0};
  std::array<std::vector<double>, 2> component;
  std::vector<std::uint8_t> valid;

  /// Linear (1D) or bilinear (2D) periodic interpolation of component `axis`.
  /// `all_valid` is cleared when any contributing grid point is masked.
  double interpolate(int axis, std::span<const double> q, bool& all_valid) const;
};

/// v_a = (hbar / m_a) Im(conj(psi) d_a psi) / |psi|^2 with spectral derivatives.
VelocityField bohmian_velocity(const ComplexField& psi, const Units& units, double node_threshold = kNodeThreshold);
inline VelocityField bohmian_velocity(const WaveFunction& wf, double node_threshold = kNodeThreshold) {
  return bohmian_velocity(wf.field(), wf.units(), node_threshold);
}

/// Spectral derivative along `axis` (Nyquist mode dropped).
ComplexField spectral_derivative(const ComplexField& psi, int axis);

/// Probability current j_a = (hbar / m_a) Im(conj(psi) d_a psi).
std::vector<double> probability_current(const ComplexField& psi, const Units& units, int axis);

}  // namespace typlab::bohmian
