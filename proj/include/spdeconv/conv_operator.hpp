#pragma once

#include <filesystem>
#include <string>

#include <Eigen/Core>

#include "spdeconv/types.hpp"

namespace spdeconv {

enum class PsfKind { moving_average, gaussian, delta };

/// Point spread function: a small kernel with odd dimensions whose origin is
/// the center pixel.
struct Psf {
  Image kernel;

  explicit Psf(Image k);

  double sum() const { return kernel.sum(); }
  /// Returns a copy scaled to unit sum.
  Psf normalized() const;
};

/// Builds a PSF.
///   moving_average: param = k (odd side length), k x k entries 1/k^2
///   gaussian:       param = sigma > 0, support (2*ceil(4*sigma)+1)^2
///   delta:          1x1 identity kernel
Psf make_psf(PsfKind kind, double param = 0.0, bool normalize = true);

/// Loads a PSF from a PGM/rawf32 image and normalizes it to unit sum.
Psf load_psf(const std::filesystem::path& path);

/// Circular (periodic-boundary) convolution by a PSF on a fixed image size.
///
/// The transfer function of the zero-padded, center-shifted kernel is
/// precomputed once, so apply/apply_adjoint cost two FFTs each. apply and
/// apply_adjoint are exact adjoints of one another.
class ConvOperator {
 public:
  ConvOperator(const Psf& psf, Index width, Index height);

  Image apply(const Image& x) const;
  Image apply_adjoint(const Image& y) const;

  /// ||H||_2 = max frequency magnitude (exact for circular convolution).
  double spectral_norm() const { return spectral_norm_; }

  Index width() const { return width_; }
  Index height() const { return height_; }
  const Psf& psf() const { return psf_; }
  const Eigen::ArrayXXcd& transfer() const { return transfer_; }

 private:
  Psf psf_;
  Index width_, height_;
  Eigen::ArrayXXcd transfer_;
  double spectral_norm_;
};

} // namespace spdeconv
