#pragma once

#include <cstdint>

namespace cpa {

inline constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// SplitMix64 stream keyed by (seed, index). Each simulation run owns the stream for its index,
// so draws do not depend on how runs are scheduled across threads.
class Stream {
 public:
  constexpr Stream(std::uint64_t seed, std::uint64_t index) noexcept
      : state_(mix64(seed + 0x9e3779b97f4a7c15ULL) ^ mix64(~index * 0xd1b54a32d192ed03ULL)) {}

  constexpr std::uint64_t next() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_);
  }

  // Uniform on the open interval (0, 1).
  constexpr double uniform() noexcept {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

}  // namespace cpa
