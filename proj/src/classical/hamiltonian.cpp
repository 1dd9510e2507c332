#include "typlab/classical/hamiltonian.hpp"

#include <cmath>
#include <string>

#include "typlab/errors.hpp"

namespace typlab::classical {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

Microstate::Microstate(std::size_t n, int d)
    : particles(n), dim(d), q(n * static_cast<std::size_t>(d), 0.0), p(n * static_cast<std::size_t>(d), 0.0) {}

void Microstate::validate() const {
  const std::size_t expected = particles * static_cast<std::size_t>(dim);
  if (dim < 1 || q.size() != expected || p.size() != expected) {
    throw DomainError("microstate arrays must both be N x d");
  }
}

HamiltonianSystem::HamiltonianSystem(std::vector<double> masses, int dim, PairInteraction pair,
                                     std::vector<ExternalPotential> external)
    : masses_(std::move(masses)), dim_(dim), pair_(pair), external_(std::move(external)) {
  if (dim_ < 1) throw ConfigError("system dimension must be positive");
  if (masses_.empty()) throw ConfigError("system needs at least one particle");
  for (const double m : masses_) {
    if (!(m > 0.0)) throw ConfigError("particle masses must be positive");
  }
  int walls = 0;
  for (const auto& e : external_) {
    if (const auto* w = std::get_if<HardWalls>(&e)) {
      ++walls;
      if (w->lo.size() != static_cast<std::size_t>(dim_) || w->hi.size() != static_cast<std::size_t>(dim_)) {
        throw ConfigError("hard walls need one [lo, hi] per axis");
      }
      for (int a = 0; a < dim_; ++a) {
        if (!(w->hi[static_cast<std::size_t>(a)] > w->lo[static_cast<std::size_t>(a)])) {
          throw ConfigError("hard wall interval must be nonempty");
        }
      }
    }
    if (const auto* g = std::get_if<UniformGravity>(&e); g && (g->axis < 0 || g->axis >= dim_)) {
      throw ConfigError("gravity axis out of range");
    }
    if (const auto* pm = std::get_if<PointMass>(&e); pm && pm->position.size() != static_cast<std::size_t>(dim_)) {
      throw ConfigError("point mass position must have one entry per axis");
    }
  }
  if (walls > 1) throw ConfigError("at most one set of hard walls");
}

HamiltonianSystem HamiltonianSystem::free_particles(std::size_t n, int dim, double mass) {
  return HamiltonianSystem(std::vector<double>(n, mass), dim);
}

const HardWalls* HamiltonianSystem::walls() const {
  for (const auto& e : external_) {
    if (const auto* w = std::get_if<HardWalls>(&e)) return w;
  }
  return nullptr;
}

void HamiltonianSystem::check_state(const Microstate& s) const {
  s.validate();
  if (s.particles != masses_.size() || s.dim != dim_) {
    throw DomainError("microstate shape does not match the system");
  }
}

double HamiltonianSystem::kinetic_energy(const Microstate& s) const {
  double k = 0.0;
  const auto d = static_cast<std::size_t>(dim_);
  for (std::size_t i = 0; i < masses_.size(); ++i) {
    double p2 = 0.0;
    for (std::size_t a = 0; a < d; ++a) p2 += s.p[i * d + a] * s.p[i * d + a];
    k += p2 / (2.0 * masses_[i]);
  }
  return k;
}

double HamiltonianSystem::potential_energy(std::span<const double> q) const {
  const auto d = static_cast<std::size_t>(dim_);
  const std::size_t n = masses_.size();
  double v = 0.0;
  if (!std::holds_alternative<NoInteraction>(pair_)) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        double r2 = 0.0;
        for (std::size_t a = 0; a < d; ++a) {
          const double dq = q[i * d + a] - q[j * d + a];
          r2 += dq * dq;
        }
        std::visit(overloaded{[](NoInteraction) {},
                              [&](const InverseDistance& c) {
                                if (r2 == 0.0) {
                                  throw SingularityError("coincident particles " + std::to_string(i) + " and " +
                                                         std::to_string(j) + " under inverse-distance interaction");
                                }
                                v += c.strength / std::sqrt(r2);
                              },
                              [&](const HarmonicPair& c) { v += 0.5 * c.stiffness * r2; }},
                   pair_);
      }
    }
  }
  for (const auto& e : external_) {
    std::visit(overloaded{[&](const UniformGravity& g) {
                            for (std::size_t i = 0; i < n; ++i) {
                              v += masses_[i] * g.g * q[i * d + static_cast<std::size_t>(g.axis)];
                            }
                          },
                          [&](const HarmonicTrap& t) {
                            for (std::size_t k = 0; k < n * d; ++k) v += 0.5 * t.stiffness * q[k] * q[k];
                          },
                          [&](const HardWalls& w) {
                            for (std::size_t i = 0; i < n; ++i) {
                              for (std::size_t a = 0; a < d; ++a) {
                                const double x = q[i * d + a];
                                if (x < w.lo[a] || x > w.hi[a]) throw DomainError("particle outside hard walls");
                              }
                            }
                          },
                          [&](const PointMass& pm) {
                            for (std::size_t i = 0; i < n; ++i) {
                              double r2 = 0.0;
                              for (std::size_t a = 0; a < d; ++a) {
                                const double dq = q[i * d + a] - pm.position[a];
                                r2 += dq * dq;
                              }
                              if (r2 == 0.0) throw SingularityError("particle at point-mass location");
                              v -= pm.gm * masses_[i] / std::sqrt(r2);
                            }
                          }},
               e);
  }
  return v;
}

void HamiltonianSystem::forces(std::span<const double> q, std::span<double> force) const {
  const auto d = static_cast<std::size_t>(dim_);
  const std::size_t n = masses_.size();
  std::fill(force.begin(), force.end(), 0.0);
  if (!std::holds_alternative<NoInteraction>(pair_)) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        double r2 = 0.0;
        for (std::size_t a = 0; a < d; ++a) {
          const double dq = q[i * d + a] - q[j * d + a];
          r2 += dq * dq;
        }
        // scalar s with F_i = s * (q_i - q_j)
        double s = 0.0;
        std::visit(overloaded{[](NoInteraction) {},
                              [&](const InverseDistance& c) {
                                if (r2 == 0.0) throw SingularityError("coincident particles under inverse-distance interaction");
                                s = c.strength / (r2 * std::sqrt(r2));
                              },
                              [&](const HarmonicPair& c) { s = -c.stiffness; }},
                   pair_);
        for (std::size_t a = 0; a < d; ++a) {
          const double f = s * (q[i * d + a] - q[j * d + a]);
          force[i * d + a] += f;
          force[j * d + a] -= f;
        }
      }
    }
  }
  for (const auto& e : external_) {
    std::visit(overloaded{[&](const UniformGravity& g) {
                            for (std::size_t i = 0; i < n; ++i) {
                              force[i * d + static_cast<std::size_t>(g.axis)] -= masses_[i] * g.g;
                            }
                          },
                          [&](const HarmonicTrap& t) {
                            for (std::size_t k = 0; k < n * d; ++k) force[k] -= t.stiffness * q[k];
                          },
                          [](const HardWalls&) {},
                          [&](const PointMass& pm) {
                            for (std::size_t i = 0; i < n; ++i) {
                              double r2 = 0.0;
                              for (std::size_t a = 0; a < d; ++a) {
                                const double dq = q[i * d + a] - pm.position[a];
                                r2 += dq * dq;
                              }
                              if (r2 == 0.0) throw SingularityError("particle at point-mass location");
                              const double s = -pm.gm * masses_[i] / (r2 * std::sqrt(r2));
                              for (std::size_t a = 0; a < d; ++a) force[i * d + a] += s * (q[i * d + a] - pm.position[a]);
                            }
                          }},
               e);
  }
}

double hamiltonian_energy(const HamiltonianSystem& system, const Microstate& state) {
  system.check_state(state);
  return system.energy(state);
}

}  // namespace typlab::classical
