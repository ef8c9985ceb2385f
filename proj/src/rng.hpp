#pragma once

#include <cstdint>

namespace rtnsim {

// splitmix64 finalizer (Steele/Lea/Flood; Vigna's fixed-increment variant).
inline constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// One independent draw stream per (master seed, stream index). The stream is a
// pure function of its key, so trajectories can be sampled in any order and on
// any thread and always see the same numbers.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream) noexcept
      : state_(mix64(master_seed + kGolden) ^ mix64((stream + 1) * kGolden)) {}

  std::uint64_t next_u64() noexcept {
    state_ += kGolden;
    return mix64(state_);
  }

  // Uniform on the open interval (0, 1); never 0 or 1, so log() is safe.
  double next_open01() noexcept {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
  std::uint64_t state_;
};

}  // namespace rtnsim
