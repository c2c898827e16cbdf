#pragma once

#include <cstdint>
#include <random>

namespace qloss {

/// SplitMix64 finalizer; a cheap, well-mixed 64-bit hash.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Stream-splitting rule for parallel trials: the seed of trial `index`
/// under master seed `master` is splitmix64(master + (index+1) * golden).
/// Trials are therefore reproducible independently of execution order.
inline std::uint64_t trialSeed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(master + (index + 1) * 0x9E3779B97F4A7C15ULL);
}

inline std::mt19937_64 makeRng(std::uint64_t seed) {
  return std::mt19937_64(seed);
}

}  // namespace qloss
