#pragma once

#include <cstdint>
#include <random>

#include "spdeconv/types.hpp"

namespace spdeconv {

/// Deterministic Poisson sampler.
///
/// Uses inversion by sequential search for means below 30 and a transformed
/// rejection method for larger means. All draws come from an explicitly
/// seeded mt19937_64, so a fixed seed replays the exact same sequence.
class PoissonSampler {
 public:
  explicit PoissonSampler(std::uint64_t seed) : rng_(seed) {}

  std::int64_t sample(double mean);

 private:
  double uniform(); // [0, 1)
  std::mt19937_64 rng_;
};

/// Independent Poisson draw per pixel with the pixel's value as mean.
/// Pixels are consumed in row-major order from a single stream.
Image poissonize(const Image& mean, std::uint64_t seed);

} // namespace spdeconv
