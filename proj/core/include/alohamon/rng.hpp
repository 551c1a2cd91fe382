#pragma once

#include <cstdint>
#include <random>

namespace alohamon {

/// SplitMix64 finalizer; used to derive independent seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Deterministic fan-out of a master seed into independent streams.
/// Stream 0 of seed s differs from stream 1, from stream 0 of seed s+1, etc.
/// Used for per-node generators inside a simulation run and for per-cell
/// seeds inside parameter sweeps, so results do not depend on scheduling.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  return splitmix64(master ^ splitmix64(stream + 0x9E3779B97F4A7C15ULL));
}

/// Uniform double in [0,1) with 53 random bits. Unlike
/// std::uniform_real_distribution the output is fully determined by the
/// engine stream, independent of the standard library implementation.
inline double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

}  // namespace alohamon
