#pragma once

#include <cstdint>

// Counter-based random streams built on the SplitMix64 finalizer
// (Steele/Lea/Flood, "Fast splittable pseudorandom number generators").
//
// Every draw is a pure function of (seed, counter):
//
//   bits(seed, k) = mix64(seed + (k + 1) * GOLDEN_GAMMA)
//
// so there is no hidden state, draws can be made in any order, and the
// stream is identical on every platform (integer ops only).  Independent
// logical streams are derived by hashing a tag into the seed.

namespace oscsim {

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ull;

constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

constexpr std::uint64_t counter_bits(std::uint64_t seed, std::uint64_t counter) {
  return mix64(seed + (counter + 1) * kGoldenGamma);
}

// Uniform on [0, 1), 53-bit mantissa.
constexpr double counter_uniform(std::uint64_t seed, std::uint64_t counter) {
  return static_cast<double>(counter_bits(seed, counter) >> 11) * 0x1.0p-53;
}

// Child stream seed for a subsystem identified by a fixed tag.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) {
  return mix64(seed ^ mix64(tag));
}

// Subsystem tags (ASCII bytes of "init", "nois", "dlay", "topo").
inline constexpr std::uint64_t kInitialStreamTag = 0x696e6974;
inline constexpr std::uint64_t kNoiseStreamTag = 0x6e6f6973;
inline constexpr std::uint64_t kDelayStreamTag = 0x646c6179;
inline constexpr std::uint64_t kTopologyStreamTag = 0x746f706f;

}  // namespace oscsim
