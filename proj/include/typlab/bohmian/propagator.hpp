#pragma once

#include <cstddef>
#include <vector>

#include "typlab/bohmian/wavefunction.hpp"
#include "typlab/numerics/fft.hpp"

namespace typlab::bohmian {

struct PropagatorOptions {
  /// Spectral modes with |k| above this fraction of the Nyquist wavenumber form the tail.
  double tail_band = 0.75;
  /// Largest tolerated fraction of spectral mass in the tail.
  double tail_threshold = 1e-8;
};

/// Strang split-step propagator: half potential kick, exact kinetic drift in
/// Fourier space, half potential kick. Every factor has unit modulus.
class SplitStepPropagator {
 public:
  SplitStepPropagator(const Grid& grid, const Units& units, std::span<const double> potential, double dt,
                      PropagatorOptions options = {});
  explicit SplitStepPropagator(const WaveFunction& wf, double dt, PropagatorOptions options = {})
      : SplitStepPropagator(wf.grid(), wf.units(), wf.potential(), dt, options) {}

  double dt() const { return dt_; }
  const Grid& grid() const { return grid_; }

  void step(ComplexField& psi) const;
  /// `count` steps with the adjacent half kicks merged.
  void steps(ComplexField& psi, std::size_t count) const;

  /// Fraction of spectral mass in the tail band.
  double spectral_tail(const ComplexField& psi) const;
  /// Throws ResolutionError when the tail exceeds the threshold.
  void check_resolution(const ComplexField& psi) const;

 private:
  void kinetic(ComplexField& psi) const;
  void transform(ComplexField& psi, bool inverse) const;

  Grid grid_;
  double dt_;
  PropagatorOptions options_;
  Fft fft_;
  bool has_potential_ = false;
  std::vector<Complex> half_kick_;
  std::vector<Complex> full_kick_;
  std::vector<Complex> drift_;
};

/// One Strang step of a copy of `wf`; checks resolution first.
WaveFunction schrodinger_step(const WaveFunction& wf, double dt);

}  // namespace typlab::bohmian
