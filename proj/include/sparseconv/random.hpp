#pragma once

#include <cstdint>
#include <random>

namespace sparseconv {

/// Every randomized routine takes one of these by reference; nothing in the
/// library owns a generator.
using Rng = std::mt19937_64;

/// Named sub-streams derived from a single user seed.
enum class Stream : std::uint64_t {
  generation = 0x67656e,
  locate = 0x6c6f63,
  fingerprint = 0x66707274,
  bench = 0x62656e63,
};

inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) {
  return splitmix64(splitmix64(seed) ^ salt);
}

inline Rng make_stream(std::uint64_t seed, Stream stream) {
  return Rng(derive_seed(seed, static_cast<std::uint64_t>(stream)));
}

/// Uniform integer in [lo, hi].
inline std::uint64_t uniform_u64(Rng& rng, std::uint64_t lo, std::uint64_t hi) {
  return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng);
}

}  // namespace sparseconv
