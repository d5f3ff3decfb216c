#pragma once

#include <cstdint>
#include <random>

namespace osqbc {

using Rng = std::mt19937_64;

// splitmix64, used only to expand seeds into independent streams.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Counter-based stream derivation: the stream for (seed, index) is a pure
// function of its arguments, so trials can run in any order or in parallel
// without changing results.
inline Rng make_stream(std::uint64_t master_seed, std::uint64_t index) {
  return Rng(mix64(mix64(master_seed) ^ mix64(index + 0x51ed2701)));
}

inline int flip(Rng& rng, double p) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p ? 1 : 0;
}

}  // namespace osqbc
