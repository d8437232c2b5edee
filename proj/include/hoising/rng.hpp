#pragma once

#include <cstdint>
#include <random>

namespace hoising {

using Rng = std::mt19937_64;

// splitmix64 finalizer
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Per-task seed stream: the counter-th output of splitmix64 started at the
/// master seed. Stable under any parallel execution order.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t counter) {
  return splitmix64(master + counter * 0x9E3779B97F4A7C15ULL);
}

}  // namespace hoising
