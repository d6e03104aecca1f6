#pragma once

#include <cstdint>

// Small deterministic hashing helpers. Keyed hashing (rather than a stateful
// stream) makes per-node random values independent of evaluation order.

namespace scrank {

inline constexpr std::uint64_t kGolden64 = 0x9E3779B97F4A7C15ull;

inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// splitmix64 step: advances the state and returns the next value.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += kGolden64;
  return mix64(state);
}

// Stateless hash of (seed, key); double-mixed to break linear structure.
inline std::uint64_t hash_key(std::uint64_t seed, std::uint64_t key) {
  return mix64(mix64(seed + kGolden64 * (key + 1)) + key);
}

// Uniform double in [0,1) derived from (seed, key).
inline double unit_from_key(std::uint64_t seed, std::uint64_t key) {
  return static_cast<double>(hash_key(seed, key) >> 11) * 0x1.0p-53;
}

}  // namespace scrank
