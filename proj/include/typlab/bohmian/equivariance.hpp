#pragma once

#include <cstddef>
#include <string>

#include "typlab/bohmian/trajectory.hpp"
#include "typlab/report.hpp"

namespace typlab::bohmian {

/// Weak-form continuity check over a box [a, b] of a 1D wave function.
struct ContinuityResidual {
  double time = 0.0;        ///< time of the centered difference
  double rate = 0.0;        ///< d/dt of the box probability
  double net_outflow = 0.0; ///< j(b) - j(a)
  double residual = 0.0;    ///< |rate + net_outflow|
};

/// Box probabilities and currents are evaluated exactly on the trigonometric
/// interpolant of the grid field; d/dt is a centered difference over
/// Psi(0), Psi(h), Psi(2h), propagated with `substeps` split steps per h.
ContinuityResidual continuity_residual(const WaveFunction& wf, double a, double b, double h,
                                       std::size_t substeps = 10);

/// Exact integral of |psi|^2 over [a, b] for the trigonometric interpolant of a 1D field.
double box_probability(const ComplexField& psi, double a, double b);

struct EquivarianceParams {
  std::size_t points = 1024;
  double length = 20.0;
  double omega = 1.0;
  Units units{};
  /// "superposition" (equal n = 0, 1 mix) or "ground".
  std::string state = "superposition";
  double dt = 1e-3;
  std::size_t frame_stride = 10;
  double trajectory_dt = 0.01;
  std::size_t checkpoints = 8;
  /// 0 means one beat period 2 pi / omega.
  double duration = 0.0;
  std::size_t samples = 10000;
  std::size_t bins = 24;
  double bin_lo = -4.8;
  double bin_hi = 4.8;
  double l1_tolerance = 0.05;
  double clamp_rate_tolerance = 1e-3;
  double noise_band_factor = 3.0;
  double noise_quantile = 0.999;
  int noise_replicas = 1000;
  std::size_t bundle_size = 20;
};

ExperimentReport equivariance_experiment(const EquivarianceParams& params, const RunContext& ctx);

}  // namespace typlab::bohmian
