#include "spdeconv/poisson.hpp"

#include <cmath>
#include <stdexcept>

namespace spdeconv {

namespace {
constexpr double kInversionCutoff = 30.0;
}

double PoissonSampler::uniform() {
  // 53-bit mantissa from the raw engine output; avoids the
  // implementation-defined std::uniform_real_distribution.
  return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
}

std::int64_t PoissonSampler::sample(double mean) {
  if (mean < 0 || !std::isfinite(mean))
    throw std::invalid_argument("PoissonSampler: mean must be finite and >= 0");
  if (mean == 0) return 0;

  if (mean < kInversionCutoff) {
    // Inversion by sequential search.
    double p = std::exp(-mean);
    double s = p;
    const double u = uniform();
    std::int64_t k = 0;
    while (u > s && p > 0) {
      ++k;
      p *= mean / static_cast<double>(k);
      s += p;
    }
    return k;
  }

  // Transformed rejection with squeeze (Hormann's PTRS).
  const double b = 0.931 + 2.53 * std::sqrt(mean);
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double v_r = 0.9277 - 3.6224 / (b - 2.0);
  const double log_mean = std::log(mean);

  for (;;) {
    const double u = uniform() - 0.5;
    const double v = uniform();
    const double us = 0.5 - std::abs(u);
    const double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= v_r) return static_cast<std::int64_t>(kf);
    if (kf < 0 || (us < 0.013 && v > us)) continue;
    const auto k = static_cast<std::int64_t>(kf);
    const double lhs = std::log(v * inv_alpha / (a / (us * us) + b));
    const double rhs = kf * log_mean - mean - std::lgamma(kf + 1.0);
    if (lhs <= rhs) return k;
  }
}

Image poissonize(const Image& mean, std::uint64_t seed) {
  if ((mean < 0).any())
    throw std::invalid_argument("poissonize: negative mean pixel");
  PoissonSampler sampler(seed);
  Image out(mean.rows(), mean.cols());
  for (Index i = 0; i < mean.size(); ++i)
    out.data()[i] = static_cast<double>(sampler.sample(mean.data()[i]));
  return out;
}

} // namespace spdeconv
