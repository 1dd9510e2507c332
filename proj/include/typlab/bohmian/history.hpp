#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "typlab/bohmian/guidance.hpp"
#include "typlab/bohmian/propagator.hpp"

namespace typlab::bohmian {

/// Frames Psi(k * dt * stride) for k = 0..frames-1 and their velocity fields.
/// Immutable once built; trajectory workers share it read-only.
class PsiHistory {
 public:
  PsiHistory(Units units, double dt, std::size_t frame_stride, std::vector<ComplexField> frames,
             double node_threshold = kNodeThreshold);

  /// Propagates `wf` until the last frame time is at least `duration`.
  /// Every stored frame is checked for resolution.
  static PsiHistory propagate(const WaveFunction& wf, double dt, std::size_t frame_stride, double duration,
                              PropagatorOptions options = {}, double node_threshold = kNodeThreshold);

  const Grid& grid() const { return frames_.front().grid(); }
  const Units& units() const { return units_; }
  double dt() const { return dt_; }
  std::size_t frame_stride() const { return stride_; }
  double frame_interval() const { return dt_ * static_cast<double>(stride_); }
  std::size_t frame_count() const { return frames_.size(); }
  double final_time() const { return frame_interval() * static_cast<double>(frames_.size() - 1); }
  const ComplexField& frame(std::size_t k) const { return frames_[k]; }
  const VelocityField& velocity(std::size_t k) const { return velocities_[k]; }

  /// Frame pair bracketing t and the weight of the later one; t is clamped to the stored range.
  void bracket(double t, std::size_t& k0, std::size_t& k1, double& w) const;

  /// Velocity at (q, t), linear in time between frames. `all_valid` is
  /// cleared when a contributing grid point is masked.
  void velocity_at(std::span<const double> q, double t, std::span<double> v, bool& all_valid) const;

  /// Binary file: "TYPLPSI1", little-endian header (dimension, points, length,
  /// dt, stride, frame count, hbar, masses, node threshold), then frames of
  /// (re, im) float64 pairs, row-major.
  void save(const std::filesystem::path& path) const;
  static PsiHistory load(const std::filesystem::path& path);

 private:
  Units units_;
  double dt_;
  std::size_t stride_;
  double node_threshold_;
  std::vector<ComplexField> frames_;
  std::vector<VelocityField> velocities_;
};

}  // namespace typlab::bohmian
