#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "typlab/bohmian/history.hpp"
#include "typlab/numerics/sampling.hpp"

namespace typlab::bohmian {

struct TrajectoryOptions {
  double dt = 0.01;
  /// Smallest step reached by halving near masked nodes or where RK4 stages disagree; 0 means dt / 1024.
  double dt_min = 0.0;
  /// Velocity clamp; 0 means 1e3 grid spacings per unit time.
  double v_max = 0.0;
};

struct TrajectoryQuality {
  std::uint64_t steps = 0;
  std::uint64_t halvings = 0;
  /// Steps taken at dt_min through a masked region or with a clamped velocity.
  std::uint64_t clamps = 0;
  std::uint64_t wraps = 0;

  void merge(const TrajectoryQuality& other);
  double clamp_rate() const { return steps == 0 ? 0.0 : static_cast<double>(clamps) / static_cast<double>(steps); }
};

struct Trajectory {
  int dim = 1;
  std::vector<double> times;
  /// Point k occupies points[k*dim .. k*dim+dim).
  std::vector<double> points;
  TrajectoryQuality quality;
};

/// RK4 integration of dQ/dt = v(Q, t) from t = 0, recording Q at each output
/// time (non-decreasing, >= 0). Positions are wrapped into the periodic box.
Trajectory advance_trajectory(const PsiHistory& history, std::span<const double> q0,
                              std::span<const double> output_times, const TrajectoryOptions& options = {});

struct EnsembleResult {
  std::vector<double> times;
  /// Ensemble positions at each output time.
  std::vector<Samples> positions;
  TrajectoryQuality quality;
};

/// Every member of `starts` advanced independently; the result does not
/// depend on the worker count.
EnsembleResult advance_ensemble(const PsiHistory& history, const Samples& starts, std::span<const double> output_times,
                                const TrajectoryOptions& options, int workers);

}  // namespace typlab::bohmian
