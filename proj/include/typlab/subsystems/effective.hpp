#pragma once

#include <cstddef>
#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "typlab/report.hpp"
#include "typlab/subsystems/conditional.hpp"
#include "typlab/subsystems/states.hpp"

namespace typlab::subsystems {

struct EffectiveOptions {
  /// Neighborhood radius in y grid cells.
  std::size_t radius = 5;
  double tol_eff = 1e-3;
  double tol_res = 2e-3;
  double degenerate_threshold = kDegenerateSlice;
};

enum class Detection { detected, not_detected, undecidable };
std::string to_string(Detection d);

/// Psi = phi chi + Psi_perp tested on the y-neighborhood of Y.
struct EffectiveDecomposition {
  Detection status = Detection::undecidable;
  /// min over valid neighbors y of |<psi^y, psi^Y>|.
  double score = 0.0;
  /// Mass of Psi - phi chi over the neighborhood rows, relative to the mass of Psi there.
  double residual_mass = 0.0;
  /// Weighted RMS of the doubly centered potential (0 without a potential).
  double coupling = 0.0;
  std::size_t neighbors_used = 0;
  std::size_t neighbors_degenerate = 0;
  /// Normalized psi^Y; set when detected.
  std::optional<ComplexField> phi;
  /// chi(y_j) = <phi, Psi(., y_j)> on every y grid row; set when detected.
  std::vector<Complex> chi;

  bool detected() const { return status == Detection::detected; }
};

/// Throws DegenerateSliceError when the slice at Y itself is degenerate.
EffectiveDecomposition detect_effective_wavefunction(const ComplexField& psi, double y,
                                                     const EffectiveOptions& options = {},
                                                     std::span<const double> potential = {});

struct EffectiveDetectParams {
  std::size_t points = 256;
  double length = 16.0;
  EffectiveOptions options{};
  /// Product control phi(x) chi(y).
  std::array<double, 2> product_sigma{1.0, 0.8};
  /// Two branches separated far beyond the neighborhood radius.
  Branch branch1{-2.0, -4.0, 0.7, 0.5};
  Branch branch2{2.0, 4.0, 1.1, 0.5};
  /// Correlated Gaussians with fixed S and a shrinking s.
  double big_s = 2.0;
  std::vector<double> s_ladder{1.0, 0.5, 0.25};
  /// Conditioning value for the product and correlated states.
  double y = 0.0;
  double score_threshold = 0.999;
};

ExperimentReport effective_detect_experiment(const EffectiveDetectParams& params, const RunContext& ctx);

}  // namespace typlab::subsystems
