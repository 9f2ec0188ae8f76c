#pragma once

#include <cstdint>
#include <random>

namespace stratsim {

using Rng = std::mt19937_64;

/// Independent per-role streams within a trial.
enum class StreamRole : std::uint64_t { Learner = 1, Adversary = 2, Instance = 3 };

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t trial, StreamRole role) {
  return mix64(mix64(mix64(base) ^ trial) ^ static_cast<std::uint64_t>(role));
}

inline Rng make_stream(std::uint64_t base, std::uint64_t trial, StreamRole role) {
  return Rng(derive_seed(base, trial, role));
}

/// Uniform double in [0, 1) from the top 53 bits.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Uniform integer in [0, n).
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
  return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(rng);
}

}  // namespace stratsim
