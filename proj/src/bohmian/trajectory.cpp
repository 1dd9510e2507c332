#include "typlab/bohmian/trajectory.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "typlab/errors.hpp"
#include "typlab/numerics/parallel.hpp"

namespace typlab::bohmian {

void TrajectoryQuality::merge(const TrajectoryQuality& other) {
  steps += other.steps;
  halvings += other.halvings;
  clamps += other.clamps;
  wraps += other.wraps;
}

namespace {

constexpr std::size_t kChunk = 256;
/// Largest accepted h * (stage velocity spread), in grid spacings.
constexpr double kSpreadFraction = 0.05;

class Stepper {
 public:
  Stepper(const PsiHistory& history, const TrajectoryOptions& options)
      : history_(history), dim_(history.grid().dimension()) {
    if (!(options.dt > 0.0)) throw ConfigError("trajectory dt must be positive");
    dt_ = options.dt;
    dt_min_ = options.dt_min > 0.0 ? options.dt_min : options.dt / 1024.0;
    v_max_ = options.v_max > 0.0 ? options.v_max : 1e3 * history.grid().spacing();
  }

  /// Advances q from t to t_end.
  void segment(std::array<double, 2>& q, double t, double t_end, TrajectoryQuality& quality) const {
    if (!(t_end > t)) return;
    const auto n = static_cast<std::size_t>(std::ceil((t_end - t) / dt_ - 1e-9));
    const double h = (t_end - t) / static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) {
      step(q, t + static_cast<double>(k) * h, h, quality);
    }
  }

 private:
  void velocity(const std::array<double, 2>& q, double t, std::array<double, 2>& v, bool& valid, bool& clamped) const {
    history_.velocity_at(std::span<const double>(q.data(), static_cast<std::size_t>(dim_)), t,
                         std::span<double>(v.data(), static_cast<std::size_t>(dim_)), valid);
    for (int a = 0; a < dim_; ++a) {
      auto& c = v[static_cast<std::size_t>(a)];
      if (std::abs(c) > v_max_) {
        c = std::copysign(v_max_, c);
        clamped = true;
      }
    }
  }

  void step(std::array<double, 2>& q, double t, double h, TrajectoryQuality& quality) const {
    std::array<double, 2> k1{}, k2{}, k3{}, k4{}, tmp{};
    bool valid = true;
    bool clamped = false;
    velocity(q, t, k1, valid, clamped);
    for (int a = 0; a < dim_; ++a) tmp[a] = q[a] + 0.5 * h * k1[a];
    velocity(tmp, t + 0.5 * h, k2, valid, clamped);
    for (int a = 0; a < dim_; ++a) tmp[a] = q[a] + 0.5 * h * k2[a];
    velocity(tmp, t + 0.5 * h, k3, valid, clamped);
    for (int a = 0; a < dim_; ++a) tmp[a] = q[a] + h * k3[a];
    velocity(tmp, t + h, k4, valid, clamped);
    // Stage spread bounds the local error; near a node it keeps the flow map
    // monotone, so ordered 1D starts cannot overtake each other.
    double spread = 0.0;
    for (int a = 0; a < dim_; ++a) {
      spread = std::max({spread, std::abs(k2[a] - k1[a]), std::abs(k3[a] - k1[a]), std::abs(k4[a] - k1[a])});
    }
    const bool rough = h * spread > kSpreadFraction * history_.grid().spacing();
    if ((!valid || rough) && 0.5 * h >= dt_min_) {
      ++quality.halvings;
      step(q, t, 0.5 * h, quality);
      step(q, t + 0.5 * h, 0.5 * h, quality);
      return;
    }
    ++quality.steps;
    if (!valid || clamped) ++quality.clamps;
    const Grid& g = history_.grid();
    for (int a = 0; a < dim_; ++a) {
      const double moved = q[a] + h / 6.0 * (k1[a] + 2.0 * k2[a] + 2.0 * k3[a] + k4[a]);
      if (moved < g.box_low() || moved >= g.box_low() + g.length()) {
        ++quality.wraps;
        q[a] = g.wrap(moved);
      } else {
        q[a] = moved;
      }
    }
  }

  const PsiHistory& history_;
  int dim_;
  double dt_;
  double dt_min_;
  double v_max_;
};

void check_times(std::span<const double> times) {
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] >= 0.0) || (i > 0 && times[i] < times[i - 1])) {
      throw ConfigError("output times must be non-negative and non-decreasing");
    }
  }
}

}  // namespace

Trajectory advance_trajectory(const PsiHistory& history, std::span<const double> q0,
                              std::span<const double> output_times, const TrajectoryOptions& options) {
  const int dim = history.grid().dimension();
  if (q0.size() != static_cast<std::size_t>(dim)) throw ConfigError("start point dimension does not match the grid");
  check_times(output_times);
  const Stepper stepper(history, options);
  Trajectory tr;
  tr.dim = dim;
  tr.times.assign(output_times.begin(), output_times.end());
  std::array<double, 2> q{};
  for (int a = 0; a < dim; ++a) q[a] = history.grid().wrap(q0[static_cast<std::size_t>(a)]);
  double t = 0.0;
  for (const double target : output_times) {
    stepper.segment(q, t, target, tr.quality);
    t = std::max(t, target);
    for (int a = 0; a < dim; ++a) tr.points.push_back(q[a]);
  }
  return tr;
}

EnsembleResult advance_ensemble(const PsiHistory& history, const Samples& starts, std::span<const double> output_times,
                                const TrajectoryOptions& options, int workers) {
  const int dim = history.grid().dimension();
  if (starts.dim != dim) throw ConfigError("ensemble dimension does not match the grid");
  check_times(output_times);
  const Stepper stepper(history, options);
  const std::size_t n = starts.size();
  const std::size_t outputs = output_times.size();
  EnsembleResult result;
  result.times.assign(output_times.begin(), output_times.end());
  result.positions.assign(outputs, Samples{dim, std::vector<double>(n * static_cast<std::size_t>(dim))});
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  std::vector<TrajectoryQuality> quality(chunks);
  parallel_for(chunks, workers, [&](std::size_t c) {
    const std::size_t end = std::min(n, (c + 1) * kChunk);
    for (std::size_t i = c * kChunk; i < end; ++i) {
      std::array<double, 2> q{};
      for (int a = 0; a < dim; ++a) q[a] = history.grid().wrap(starts(i, a));
      double t = 0.0;
      for (std::size_t k = 0; k < outputs; ++k) {
        stepper.segment(q, t, output_times[k], quality[c]);
        t = std::max(t, output_times[k]);
        for (int a = 0; a < dim; ++a) {
          result.positions[k].coords[i * static_cast<std::size_t>(dim) + static_cast<std::size_t>(a)] = q[a];
        }
      }
    }
  });
  for (const auto& q : quality) result.quality.merge(q);
  return result;
}

}  // namespace typlab::bohmian
