#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "typlab/classical/hamiltonian.hpp"
#include "typlab/numerics/rng.hpp"
#include "typlab/report.hpp"

namespace typlab::classical {

/// Center-of-mass throw in 3D with gravity along -z.
struct StoneThrowSpec {
  std::array<double, 3> x0{0.0, 0.0, 0.0};
  std::array<double, 3> v0{10.0, 0.0, 10.0};
  double mass = 1.0;
  double gravity = 9.8;
  double horizon = 2.0;
  double dt = 1e-3;
  /// Magnitude of the initial-velocity jitter.
  double delta_pert = 1e-2;
  /// Deviation threshold for sup_t |x~(t) - x(t)|.
  double epsilon = 0.2;

  void validate() const;
};

/// Weak attracting point mass standing in for the rest of the world.
struct ThirdBody {
  double gm = 1e-2;
  std::array<double, 3> position{50.0, 0.0, -20.0};
};

/// Gravity plus, when given, the third body.
HamiltonianSystem stone_system(const StoneThrowSpec& spec, const ThirdBody* third_body = nullptr);

/// Positions along the trajectory from (x0, v) at every step 0..ceil(T/dt).
std::vector<std::array<double, 3>> stone_trajectory(const HamiltonianSystem& system, const StoneThrowSpec& spec,
                                                     const std::array<double, 3>& velocity);

/// sup over the shared time grid of |x~(t) - x(t)| for n throws whose
/// initial velocity is v0 + delta_pert * (isotropic unit vector).
std::vector<double> stone_sup_deviations(const HamiltonianSystem& system, const StoneThrowSpec& spec, std::size_t n,
                                         std::uint64_t seed, std::uint64_t stream_base, int workers);

struct StoneParams {
  StoneThrowSpec spec{};
  std::size_t perturbations = 2000;
  /// Tolerance of the analytic check sup deviation == delta * T.
  double analytic_tolerance = 1e-10;
  bool third_body = true;
  ThirdBody body{};
  /// Levels of the delta halving ladder.
  std::size_t halving_levels = 5;
  std::size_t halving_samples = 200;
  double tau = kDefaultTypicalityThreshold;
};

/// Defaults tie delta_pert to 1e-3 |v0| and eps to 10 delta_pert T.
StoneParams default_stone_params();

ExperimentReport stone_robustness_experiment(const StoneParams& params, const RunContext& ctx);

}  // namespace typlab::classical
