#pragma once

#include <cstdint>

// Counter-based random numbers: the value at (seed, counter) is a pure hash,
// so sampling order never matters and replays are exact across platforms.

namespace hyperclust::rng {

// SplitMix64 finalizer, bijective on 64-bit words.
inline std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t at(std::uint64_t seed, std::uint64_t counter) {
  return mix(mix(seed) ^ mix(counter * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL));
}

// 53-bit mantissa draw in [0, 1).
inline double to_unit(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

inline double uniform(std::uint64_t seed, std::uint64_t counter) {
  return to_unit(at(seed, counter));
}

// Derive an independent stream seed, used to hand separate streams to
// replicates, restarts, and pipeline stages.
inline std::uint64_t split(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
  return mix(mix(seed) ^ mix(a ^ 0x9e3779b97f4a7c15ULL) ^ (mix(b) << 1));
}

}  // namespace hyperclust::rng
