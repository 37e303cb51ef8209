#include "spdeconv/conv_operator.hpp"

#include <cmath>
#include <stdexcept>

#include <unsupported/Eigen/FFT>

#include "spdeconv/errors.hpp"
#include "spdeconv/image_io.hpp"

namespace spdeconv {

namespace {

// Separable 2-D FFT built from 1-D transforms: rows first, then columns.
Eigen::ArrayXXcd fft2(const Eigen::ArrayXXcd& in, bool inverse) {
  Eigen::FFT<double> fft;
  const Index rows = in.rows(), cols = in.cols();
  Eigen::ArrayXXcd tmp(rows, cols), out(rows, cols);
  Eigen::VectorXcd line_in, line_out;

  line_in.resize(cols);
  line_out.resize(cols);
  for (Index r = 0; r < rows; ++r) {
    line_in = in.row(r).matrix().transpose();
    if (inverse)
      fft.inv(line_out, line_in);
    else
      fft.fwd(line_out, line_in);
    tmp.row(r) = line_out.transpose().array();
  }
  line_in.resize(rows);
  line_out.resize(rows);
  for (Index c = 0; c < cols; ++c) {
    line_in = tmp.col(c).matrix();
    if (inverse)
      fft.inv(line_out, line_in);
    else
      fft.fwd(line_out, line_in);
    out.col(c) = line_out.array();
  }
  return out;
}

Eigen::ArrayXXcd convolve_freq(const Eigen::ArrayXXcd& transfer, const Image& x) {
  Eigen::ArrayXXcd spec = fft2(x.cast<std::complex<double>>(), /*inverse=*/false);
  spec *= transfer;
  return fft2(spec, /*inverse=*/true);
}

} // namespace

Psf::Psf(Image k) : kernel(std::move(k)) {
  if (kernel.rows() % 2 == 0 || kernel.cols() % 2 == 0 || kernel.size() == 0)
    throw std::invalid_argument("Psf: kernel dimensions must be odd");
}

Psf Psf::normalized() const {
  const double s = kernel.sum();
  if (s == 0) throw std::invalid_argument("Psf: cannot normalize zero-sum kernel");
  return Psf(Image(kernel / s));
}

Psf make_psf(PsfKind kind, double param, bool normalize) {
  switch (kind) {
    case PsfKind::delta:
      return Psf(Image::Constant(1, 1, 1.0));
    case PsfKind::moving_average: {
      const auto k = static_cast<Index>(param);
      if (k < 1 || k % 2 == 0 || static_cast<double>(k) != param)
        throw std::invalid_argument("make_psf: moving_average needs odd k >= 1");
      Image kern = Image::Constant(k, k, 1.0);
      Psf psf{std::move(kern)};
      return normalize ? psf.normalized() : psf;
    }
    case PsfKind::gaussian: {
      if (!(param > 0)) throw std::invalid_argument("make_psf: gaussian needs sigma > 0");
      const auto half = static_cast<Index>(std::ceil(4.0 * param));
      const Index k = 2 * half + 1;
      Image kern(k, k);
      for (Index r = 0; r < k; ++r)
        for (Index c = 0; c < k; ++c) {
          const double dr = static_cast<double>(r - half);
          const double dc = static_cast<double>(c - half);
          kern(r, c) = std::exp(-(dr * dr + dc * dc) / (2.0 * param * param));
        }
      Psf psf{std::move(kern)};
      return normalize ? psf.normalized() : psf;
    }
  }
  throw std::invalid_argument("make_psf: unknown kind");
}

Psf load_psf(const std::filesystem::path& path) {
  Image k = read_image(path);
  if (k.rows() % 2 == 0 || k.cols() % 2 == 0)
    throw DataError("psf file must have odd dimensions: " + path.string());
  return Psf(std::move(k)).normalized();
}

ConvOperator::ConvOperator(const Psf& psf, Index width, Index height)
    : psf_(psf), width_(width), height_(height) {
  if (width < 1 || height < 1)
    throw std::invalid_argument("ConvOperator: nonpositive dimensions");
  if (psf.kernel.rows() > height || psf.kernel.cols() > width)
    throw std::invalid_argument("ConvOperator: kernel larger than image");

  // Zero-pad with the kernel center at pixel (0,0), wrapping negative
  // offsets, so a delta kernel yields the identity operator.
  Image padded = Image::Zero(height, width);
  const Index cr = psf.kernel.rows() / 2, cc = psf.kernel.cols() / 2;
  for (Index r = 0; r < psf.kernel.rows(); ++r)
    for (Index c = 0; c < psf.kernel.cols(); ++c) {
      const Index pr = ((r - cr) % height + height) % height;
      const Index pc = ((c - cc) % width + width) % width;
      padded(pr, pc) += psf.kernel(r, c);
    }
  transfer_ = fft2(padded.cast<std::complex<double>>(), /*inverse=*/false);
  spectral_norm_ = transfer_.abs().maxCoeff();
}

Image ConvOperator::apply(const Image& x) const {
  if (x.rows() != height_ || x.cols() != width_)
    throw std::invalid_argument("ConvOperator::apply: dimension mismatch");
  return convolve_freq(transfer_, x).real();
}

Image ConvOperator::apply_adjoint(const Image& y) const {
  if (y.rows() != height_ || y.cols() != width_)
    throw std::invalid_argument("ConvOperator::apply_adjoint: dimension mismatch");
  return convolve_freq(transfer_.conjugate(), y).real();
}

} // namespace spdeconv
