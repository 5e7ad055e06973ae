#pragma once

#include <cstdint>
#include <random>

namespace congest {

// SplitMix64 finalizer. Used to derive independent streams from a single seed.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  return mix64(mix64(seed) ^ mix64(stream + 0x632be59bd9b4e019ULL));
}

// std::mt19937_64 is specified bit-exactly by the standard; the distribution
// helpers below replace std::uniform_*_distribution, whose output differs
// between standard library implementations.
using Rng = std::mt19937_64;

inline Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
  return Rng{derive_seed(seed, stream)};
}

// Uniform integer in [lo, hi], inclusive. Rejection sampling, no modulo bias.
inline std::uint64_t uniform_int(Rng& rng, std::uint64_t lo, std::uint64_t hi) {
  const std::uint64_t span = hi - lo;
  if (span == UINT64_MAX) return rng();
  const std::uint64_t range = span + 1;
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % range);
  std::uint64_t x = rng();
  while (x >= limit) x = rng();
  return lo + x % range;
}

// Uniform double in [0, 1) with 53 random bits.
inline double uniform_real(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace congest
