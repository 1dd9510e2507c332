#include "typlab/classical/verlet.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "typlab/errors.hpp"

namespace typlab::classical {

VerletIntegrator::VerletIntegrator(const HamiltonianSystem& system, const Microstate& state, VerletOptions options)
    : system_(system), options_(options), force_(state.q.size()) {
  system_.check_state(state);
  system_.forces(state.q, force_);
}

double VerletIntegrator::energy_scale(const Microstate& state) const {
  return std::abs(system_.kinetic_energy(state)) + std::abs(system_.potential_energy(state.q));
}

void VerletIntegrator::drift(Microstate& state, double dt) const {
  const auto d = static_cast<std::size_t>(state.dim);
  const auto masses = system_.masses();
  const HardWalls* walls = system_.walls();
  for (std::size_t i = 0; i < state.particles; ++i) {
    const double inv_m = 1.0 / masses[i];
    for (std::size_t a = 0; a < d; ++a) {
      const std::size_t k = i * d + a;
      double x = state.q[k] + state.p[k] * inv_m * dt;
      if (walls) {
        const double lo = walls->lo[a];
        const double hi = walls->hi[a];
        if (x < lo || x > hi) {
          // unfold the straight path: an odd number of wall hits reverses the momentum
          const double width = hi - lo;
          const double bounces = std::floor((x - lo) / width);
          const double rest = (x - lo) - bounces * width;
          const bool odd = std::fmod(std::abs(bounces), 2.0) == 1.0;
          x = odd ? hi - rest : lo + rest;
          if (odd) state.p[k] = -state.p[k];
        }
      }
      state.q[k] = x;
    }
  }
}

void VerletIntegrator::kick_drift_kick(Microstate& state, double dt) {
  const double half = 0.5 * dt;
  for (std::size_t k = 0; k < state.p.size(); ++k) state.p[k] += half * force_[k];
  drift(state, dt);
  system_.forces(state.q, force_);
  for (std::size_t k = 0; k < state.p.size(); ++k) state.p[k] += half * force_[k];
}

void VerletIntegrator::step(Microstate& state, double dt) {
  if (!(dt > 0.0)) throw ConfigError("time step must be positive");
  const bool check = options_.energy_jump_factor > 0.0;
  double h0 = 0.0;
  double scale = 0.0;
  if (check) {
    h0 = system_.energy(state);
    scale = energy_scale(state);
  }
  kick_drift_kick(state, dt);
  if (check) {
    const double h1 = system_.energy(state);
    if (!std::isfinite(h1) || std::abs(h1 - h0) > options_.energy_jump_factor * scale) {
      std::ostringstream msg;
      msg << "unstable Verlet step: energy " << h0 << " -> " << h1 << " at dt=" << dt;
      throw IntegrationError(msg.str());
    }
  }
}

void VerletIntegrator::advance(Microstate& state, double duration, double dt) {
  if (duration < 0.0) throw ConfigError("integration time must be non-negative");
  if (duration == 0.0) return;
  if (!(dt > 0.0)) throw ConfigError("time step must be positive");
  const auto steps = static_cast<std::size_t>(std::ceil(duration / dt - 1e-9));
  const double h = duration / static_cast<double>(steps);
  const bool check = options_.energy_jump_factor > 0.0;
  const double h0 = check ? system_.energy(state) : 0.0;
  const double scale = check ? energy_scale(state) : 0.0;
  for (std::size_t s = 0; s < steps; ++s) kick_drift_kick(state, h);
  if (check) {
    const double h1 = system_.energy(state);
    if (!std::isfinite(h1) || std::abs(h1 - h0) > options_.energy_jump_factor * std::max(scale, energy_scale(state))) {
      std::ostringstream msg;
      msg << "energy not conserved over integration: " << h0 << " -> " << h1;
      throw IntegrationError(msg.str());
    }
  }
}

Microstate verlet_step(const HamiltonianSystem& system, const Microstate& state, double dt,
                       const VerletOptions& options) {
  Microstate next = state;
  VerletIntegrator integrator(system, next, options);
  integrator.step(next, dt);
  return next;
}

Microstate integrate(const HamiltonianSystem& system, const Microstate& state, double duration, double dt,
                     const VerletOptions& options) {
  Microstate next = state;
  VerletIntegrator integrator(system, next, options);
  integrator.advance(next, duration, dt);
  return next;
}

Microstate integrate_backward(const HamiltonianSystem& system, const Microstate& state, double duration, double dt,
                              const VerletOptions& options) {
  Microstate next = state;
  for (auto& p : next.p) p = -p;
  VerletIntegrator integrator(system, next, options);
  integrator.advance(next, duration, dt);
  for (auto& p : next.p) p = -p;
  return next;
}

}  // namespace typlab::classical
