#pragma once

#include <stdexcept>

#include "spdeconv/types.hpp"

namespace spdeconv {

/// Per-pixel restoration quality of an estimate against a reference.
struct MetricReport {
  double mae = 0.0;            // (1/n) sum |ref - est|
  double mse = 0.0;            // (1/n) sum (ref - est)^2
  double peak_intensity = 0.0; // max(reference)

  /// MAE normalized to the reference's peak intensity.
  double normalized_mae() const { return mae / peak_intensity; }
};

template <typename DerivedA, typename DerivedB>
MetricReport metrics(const Eigen::ArrayBase<DerivedA>& reference,
                     const Eigen::ArrayBase<DerivedB>& estimate) {
  if (reference.rows() != estimate.rows() || reference.cols() != estimate.cols())
    throw std::invalid_argument("metrics: dimension mismatch");
  const double n = static_cast<double>(reference.size());
  MetricReport r;
  r.mae = (reference - estimate).abs().sum() / n;
  r.mse = (reference - estimate).square().sum() / n;
  r.peak_intensity = reference.maxCoeff();
  return r;
}

/// Linearly scales a nonnegative image so its maximum equals `peak`.
inline Image rescale_peak(const Image& img, double peak) {
  if (peak <= 0) throw std::invalid_argument("rescale_peak: peak must be > 0");
  const double mx = img.maxCoeff();
  if (mx <= 0) throw std::invalid_argument("rescale_peak: image has no positive values");
  return img * (peak / mx);
}

template <typename Derived>
bool all_finite(const Eigen::DenseBase<Derived>& a) {
  return a.derived().array().isFinite().all();
}

} // namespace spdeconv
