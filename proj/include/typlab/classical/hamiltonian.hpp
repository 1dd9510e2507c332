#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

namespace typlab::classical {

/// Phase-space point of N particles in d dimensions; q and p are N*d, particle-major.
struct Microstate {
  std::size_t particles = 0;
  int dim = 3;
  std::vector<double> q;
  std::vector<double> p;

  Microstate() = default;
  Microstate(std::size_t n, int d);

  double& q_at(std::size_t i, int a) { return q[i * static_cast<std::size_t>(dim) + static_cast<std::size_t>(a)]; }
  double& p_at(std::size_t i, int a) { return p[i * static_cast<std::size_t>(dim) + static_cast<std::size_t>(a)]; }
  double q_at(std::size_t i, int a) const { return q[i * static_cast<std::size_t>(dim) + static_cast<std::size_t>(a)]; }
  double p_at(std::size_t i, int a) const { return p[i * static_cast<std::size_t>(dim) + static_cast<std::size_t>(a)]; }
  std::size_t coordinates() const { return q.size(); }
  /// Throws DomainError when q and p disagree with N x d.
  void validate() const;
};

struct NoInteraction {};
/// V(r) = strength / r.
struct InverseDistance {
  double strength = 1.0;
};
/// V(r) = stiffness * r^2 / 2.
struct HarmonicPair {
  double stiffness = 1.0;
};
using PairInteraction = std::variant<NoInteraction, InverseDistance, HarmonicPair>;

/// V = m g q_axis.
struct UniformGravity {
  double g = 9.8;
  int axis = 2;
};
/// V = k |q|^2 / 2 around the origin.
struct HarmonicTrap {
  double stiffness = 1.0;
};
/// Specular walls bounding each axis to [lo, hi]; contributes no force.
struct HardWalls {
  std::vector<double> lo;
  std::vector<double> hi;
};
/// V = -gm * m / |q - position|.
struct PointMass {
  double gm = 1.0;
  std::vector<double> position;
};
using ExternalPotential = std::variant<UniformGravity, HarmonicTrap, HardWalls, PointMass>;

class HamiltonianSystem {
 public:
  HamiltonianSystem(std::vector<double> masses, int dim, PairInteraction pair = NoInteraction{},
                    std::vector<ExternalPotential> external = {});

  static HamiltonianSystem free_particles(std::size_t n, int dim, double mass = 1.0);

  std::size_t particles() const { return masses_.size(); }
  int dim() const { return dim_; }
  std::span<const double> masses() const { return masses_; }
  const PairInteraction& pair() const { return pair_; }
  std::span<const ExternalPotential> external() const { return external_; }
  const HardWalls* walls() const;
  bool has_singular_interaction() const { return std::holds_alternative<InverseDistance>(pair_); }

  double kinetic_energy(const Microstate& s) const;
  double potential_energy(std::span<const double> q) const;
  double energy(const Microstate& s) const { return kinetic_energy(s) + potential_energy(s.q); }
  /// F = -grad V, written into `force` (size N*d).
  void forces(std::span<const double> q, std::span<double> force) const;

  void check_state(const Microstate& s) const;

 private:
  std::vector<double> masses_;
  int dim_;
  PairInteraction pair_;
  std::vector<ExternalPotential> external_;
};

double hamiltonian_energy(const HamiltonianSystem& system, const Microstate& state);

}  // namespace typlab::classical
