#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "typlab/classical/hamiltonian.hpp"
#include "typlab/numerics/stats.hpp"
#include "typlab/report.hpp"

namespace typlab::classical {

/// Coordinate-aligned box in phase space. Coordinates are ordered as all
/// q (particle-major) followed by all p, i.e. 2*N*d entries.
struct PhaseBox {
  std::vector<double> lo;
  std::vector<double> hi;

  std::size_t dims() const { return lo.size(); }
  double volume() const;
  bool contains(const Microstate& s) const;
  void validate() const;
};

struct LiouvilleOptions {
  std::size_t samples = 100000;
  double dt = 1e-3;
  std::uint64_t seed = 1;
  int workers = 1;
  /// Names the RNG streams, so several checks under one seed stay independent.
  std::string stream_tag = "liouville";
  /// Random interior probes (besides the corners) used to bound the image of A.
  std::size_t probes = 4096;
  /// Target lambda(A) / lambda(B) for the reference box B.
  double reference_fraction = 0.5;
  /// Jittered-grid sampling of B: the first m^dims points take one cell each of
  /// an m-per-axis grid, the rest are plain uniform. Its variance never exceeds
  /// that of plain sampling, so the binomial interval stays valid (conservative).
  bool stratified = true;
};

struct LiouvilleReport {
  double time = 0.0;
  /// Fraction of uniform points in the reference box whose preimage lies in A.
  MeasureEstimate hit_fraction;
  /// Estimate of lambda(Phi_t A) / lambda(A) and its 99% interval.
  double ratio = 0.0;
  ConfidenceInterval ratio_ci;
  PhaseBox reference_box;
  /// Probes of A whose forward image fell outside the reference box (should be 0).
  std::size_t containment_violations = 0;
  bool consistent_with_unity() const { return ratio_ci.contains(1.0); }
};

/// Monte Carlo estimate of lambda(Phi_{t,0} A) / lambda(A).
///
/// A reference box B is built around the forward image of A; points uniform
/// in B are integrated back over [0, t] and tested for membership in A, so
/// lambda(Phi_t A) = lambda(B) * hit fraction.
LiouvilleReport liouville_volume_check(const HamiltonianSystem& system, const PhaseBox& region, double t,
                                       const LiouvilleOptions& options);

struct LiouvilleParams {
  double mass = 1.0;
  double stiffness = 1.0;
  /// Phase-space square A as (q, p) intervals.
  PhaseBox region{{0.5, -0.5}, {1.5, 0.5}};
  /// Default: a quarter and a full period of the unit oscillator.
  std::vector<double> times{1.5707963267948966, 6.283185307179586};
  std::size_t samples = 100000;
  /// Verlet maps are symplectic at any step, so dt sets accuracy only.
  double dt = 1e-2;
  /// Also run the free particle (a shear) as a control.
  bool free_particle_control = true;
};

/// 1D harmonic oscillator (and free particle) volume-ratio checks.
ExperimentReport liouville_experiment(const LiouvilleParams& params, const RunContext& ctx);

}  // namespace typlab::classical
