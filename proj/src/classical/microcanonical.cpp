#include "typlab/classical/microcanonical.hpp"

#include <cmath>

#include "typlab/errors.hpp"

namespace typlab::classical {

Microstate sample_microcanonical_ideal_gas(std::size_t particles, const std::vector<double>& box, double mass,
                                           double energy, RngStream& rng) {
  if (particles == 0) throw ConfigError("ideal gas needs at least one particle");
  if (box.empty()) throw ConfigError("box needs at least one axis");
  if (!(mass > 0.0)) throw ConfigError("mass must be positive");
  if (!(energy > 0.0)) throw ConfigError("microcanonical energy must be positive");
  for (const double l : box) {
    if (!(l > 0.0)) throw ConfigError("box extents must be positive");
  }
  const int dim = static_cast<int>(box.size());
  Microstate s(particles, dim);
  for (std::size_t i = 0; i < particles; ++i) {
    for (int a = 0; a < dim; ++a) s.q_at(i, a) = box[static_cast<std::size_t>(a)] * rng.uniform();
  }
  double norm2 = 0.0;
  for (auto& p : s.p) {
    p = rng.normal();
    norm2 += p * p;
  }
  const double radius = std::sqrt(2.0 * mass * energy);
  const double scale = radius / std::sqrt(norm2);
  for (auto& p : s.p) p *= scale;
  return s;
}

}  // namespace typlab::classical
