#pragma once

#include <vector>

#include "typlab/classical/hamiltonian.hpp"

namespace typlab::classical {

struct VerletOptions {
  /// A step fails when |H_after - H_before| exceeds this fraction of the
  /// energy scale |K| + |V|. Zero or negative disables the check.
  double energy_jump_factor = 1e-2;
};

/// Velocity Verlet with a cached force, advancing a state in place.
///
/// Hard walls are handled inside the drift by specular reflection; the drift
/// is a straight line so the reflected position and the momentum sign flip
/// are exact.
class VerletIntegrator {
 public:
  VerletIntegrator(const HamiltonianSystem& system, const Microstate& state, VerletOptions options = {});

  void step(Microstate& state, double dt);
  /// Advances by exactly `duration` in ceil(duration / dt) equal steps. The
  /// energy check compares only the start and end of the run.
  void advance(Microstate& state, double duration, double dt);

 private:
  void kick_drift_kick(Microstate& state, double dt);
  void drift(Microstate& state, double dt) const;
  double energy_scale(const Microstate& state) const;

  const HamiltonianSystem& system_;
  VerletOptions options_;
  std::vector<double> force_;
};

Microstate verlet_step(const HamiltonianSystem& system, const Microstate& state, double dt,
                       const VerletOptions& options = {});

/// Copy of `state` integrated over `duration`.
Microstate integrate(const HamiltonianSystem& system, const Microstate& state, double duration, double dt,
                     const VerletOptions& options = {});

/// Integrates backwards in time: negate momenta, run forward, negate again.
Microstate integrate_backward(const HamiltonianSystem& system, const Microstate& state, double duration, double dt,
                              const VerletOptions& options = {});

}  // namespace typlab::classical
