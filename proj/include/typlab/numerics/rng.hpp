#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace typlab {

/// Philox-4x32-10 counter-based generator.
///
/// The key is the 64-bit seed, the upper half of the 128-bit counter is the
/// stream index and the lower half counts blocks, so (seed, stream) pairs give
/// independent, platform-independent sequences and any worker can open its
/// own stream without coordination.
class RngStream {
 public:
  using Block = std::array<std::uint32_t, 4>;

  RngStream(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  std::uint32_t next_u32();
  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on (0, 1).
  double uniform_open();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal via Box-Muller.
  double normal();
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  static Block philox(Block counter, std::array<std::uint32_t, 2> key);

 private:
  void refill();

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t block_index_ = 0;
  Block buffer_{};
  int used_ = 4;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

/// Stream index for a named purpose and a unit index (seed replica, chunk, ...).
std::uint64_t derive_stream(std::string_view purpose, std::uint64_t index);

}  // namespace typlab
