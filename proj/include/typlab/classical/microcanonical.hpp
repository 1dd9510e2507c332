#pragma once

#include <vector>

#include "typlab/classical/hamiltonian.hpp"
#include "typlab/numerics/rng.hpp"

namespace typlab::classical {

/// Draws an ideal-gas microstate from the microcanonical measure on H = E.
///
/// Positions are i.i.d. uniform in the box [0, box[a]) per axis. The momentum
/// vector is uniform on the sphere |p| = sqrt(2 m E) in N*d dimensions,
/// obtained by normalizing a standard Gaussian vector.
Microstate sample_microcanonical_ideal_gas(std::size_t particles, const std::vector<double>& box, double mass,
                                           double energy, RngStream& rng);

}  // namespace typlab::classical
