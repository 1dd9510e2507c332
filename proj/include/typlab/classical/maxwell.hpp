#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "typlab/classical/hamiltonian.hpp"
#include "typlab/report.hpp"

namespace typlab::classical {

/// Interval [lo, hi] for one velocity component; bounds may be infinite.
struct VelocityWindow {
  int axis = 0;
  double lo = -1.0;
  double hi = 1.0;

  static VelocityWindow around(double v0, double delta, int axis = 0);
  void validate() const;
  bool contains(double v) const { return lo <= v && v <= hi; }
};

struct ThermalSpec {
  double kT = 1.0;
  double mass = 1.0;
  void validate() const;
};

/// Integral of the one-component Maxwell density (m / 2 pi kT)^{1/2} exp(-m v^2 / 2kT) over the window.
double maxwell_target_fraction(const VelocityWindow& window, const ThermalSpec& thermal);

/// Same integral by adaptive Gauss-Kronrod quadrature, independent of the erf route.
double maxwell_target_fraction_quadrature(const VelocityWindow& window, const ThermalSpec& thermal);

/// Fraction of particles whose velocity component p_{i,axis}/m lies in the window.
double empirical_velocity_fraction(const Microstate& state, const VelocityWindow& window, double mass);

/// Probability, under the microcanonical measure conditioned on the direction
/// of the window-axis momentum components of `state`, that the empirical
/// fraction deviates from `target` by more than eps.
///
/// On the momentum sphere the axis components are r * sqrt(B) * u with u
/// uniform on the N-sphere and B ~ Beta(N/2, N(d-1)/2) independent of u, so
/// the fraction is a step function of s = sqrt(B) and the conditional
/// probability is an exact sum of incomplete-beta increments. Averaging this
/// over sampled states is a lower-variance estimator of the deviation measure
/// than counting hits.
double conditional_deviation_probability(const Microstate& state, const VelocityWindow& window, double mass,
                                         double target, double eps);

struct MaxwellLlnParams {
  std::vector<std::size_t> ladder{100, 1000, 10000, 100000};
  VelocityWindow window{0, -1.0, 1.0};
  ThermalSpec thermal{};
  double epsilon = 0.02;
  std::size_t seeds = 100;
  double box_length = 1.0;
  int dim = 3;
  double tau = kDefaultTypicalityThreshold;
  /// Pass threshold for the deviation measure at the largest N.
  double final_measure_tolerance = 0.01;
  /// Pass threshold for |erf route - quadrature|.
  double quadrature_tolerance = 1e-10;
};

/// LLN for the velocity distribution of a microcanonical ideal gas.
ExperimentReport maxwell_lln_experiment(const MaxwellLlnParams& params, const RunContext& ctx);

}  // namespace typlab::classical
