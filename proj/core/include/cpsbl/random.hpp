#ifndef CPSBL_RANDOM_HPP
#define CPSBL_RANDOM_HPP

#include <cmath>
#include <cstdint>
#include <random>

#include "cpsbl/types.hpp"

namespace cpsbl {

using RandomStream = std::mt19937_64;

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Purpose tags for the independent sub-streams of one Monte Carlo trial.
enum class StreamTag : std::uint64_t {
  kChannel = 1,
  kNoise = 2,
  kCrossPredictive = 3,
  kGradCheck = 4,
};

/// Seed that depends only on (master, trial, tag), so trials can be scheduled
/// in any order or on any thread.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t trial,
                                    StreamTag tag) noexcept {
  return mix64(mix64(mix64(master) ^ trial) ^ static_cast<std::uint64_t>(tag));
}

inline RandomStream make_stream(std::uint64_t master, std::uint64_t trial,
                                StreamTag tag) {
  return RandomStream(derive_seed(master, trial, tag));
}

/// Draw from CN(0, variance): real and imaginary parts each N(0, variance/2).
inline Complex complex_normal(RandomStream& rng, double variance = 1.0) {
  std::normal_distribution<double> normal(0.0, std::sqrt(variance / 2.0));
  const double re = normal(rng);
  const double im = normal(rng);
  return {re, im};
}

inline double uniform(RandomStream& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace cpsbl

#endif  // CPSBL_RANDOM_HPP
