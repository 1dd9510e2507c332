#pragma once

#include <cstddef>
#include <vector>

#include "typlab/bohmian/wavefunction.hpp"
#include "typlab/report.hpp"

namespace typlab::subsystems {

/// Free Gaussians of shrinking width; times and box scale with each sigma0
/// through tau = 2 m sigma0^2 / hbar and the box length L = length_over_sigma * sigma0.
struct AbsoluteUncertaintyParams {
  std::vector<double> sigma_ladder{1.0, 0.5, 0.25};
  std::size_t samples = 100000;
  bohmian::Units units{};
  std::size_t points = 2048;
  double length_over_sigma = 320.0;
  double t_final_over_tau = 20.0;
  double frame_interval_over_tau = 0.05;
  double trajectory_dt_over_tau = 0.05;
  double product_tolerance = 0.02;
  double ratio_target = 2.0;
  double ratio_tolerance = 0.05;
  double spread_tolerance = 0.01;
  /// Smallest sigma(t_final) / sigma0 accepted as asymptotic.
  double min_spread_factor = 5.0;
};

/// Velocities (X(t_final) - X(t_final/2)) / (t_final/2) of Bohmian
/// trajectories started from |phi|^2, compared with hbar / 2.
ExperimentReport absolute_uncertainty_experiment(const AbsoluteUncertaintyParams& params, const RunContext& ctx);

}  // namespace typlab::subsystems
