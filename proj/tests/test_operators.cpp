#include <doctest.h>

#include <cmath>
#include <utility>

#include "spdeconv/conv_operator.hpp"
#include "spdeconv/errors.hpp"
#include "spdeconv/image.hpp"
#include "spdeconv/image_io.hpp"
#include "test_util.hpp"

using namespace spdeconv;

namespace {

// Direct O(n k^2) periodic convolution; the frequency-domain path must match.
Image spatial_circular_conv(const Psf& psf, const Image& x) {
  const Index rows = x.rows(), cols = x.cols();
  const Index kr = psf.kernel.rows(), kc = psf.kernel.cols();
  const Index cr = kr / 2, cc = kc / 2;
  Image out = Image::Zero(rows, cols);
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c) {
      double acc = 0;
      for (Index i = 0; i < kr; ++i)
        for (Index j = 0; j < kc; ++j) {
          const Index sr = ((r - (i - cr)) % rows + rows) % rows;
          const Index sc = ((c - (j - cc)) % cols + cols) % cols;
          acc += psf.kernel(i, j) * x(sr, sc);
        }
      out(r, c) = acc;
    }
  return out;
}

} // namespace

TEST_CASE("make_psf moving_average(7)") {
  const Psf psf = make_psf(PsfKind::moving_average, 7);
  REQUIRE(psf.kernel.rows() == 7);
  REQUIRE(psf.kernel.cols() == 7);
  CHECK((psf.kernel == 1.0 / 49.0).all());
  CHECK(psf.sum() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("make_psf delta and gaussian") {
  const Psf delta = make_psf(PsfKind::delta);
  CHECK(delta.kernel.size() == 1);
  CHECK(delta.kernel(0, 0) == 1.0);

  const Psf gauss = make_psf(PsfKind::gaussian, 1.0);
  CHECK(gauss.kernel.rows() == 9);
  CHECK(gauss.kernel.cols() == 9);
  CHECK(std::abs(gauss.sum() - 1.0) < 1e-12);
  CHECK((gauss.kernel >= 0).all());

  CHECK_THROWS_AS(make_psf(PsfKind::moving_average, 4), std::invalid_argument);
  CHECK_THROWS_AS(make_psf(PsfKind::gaussian, 0.0), std::invalid_argument);
}

TEST_CASE("delta PSF gives the identity operator") {
  testutil::Rng rng(11);
  const Image x = rng.image(12, 20, -5, 5);
  const ConvOperator op(make_psf(PsfKind::delta), 20, 12);
  CHECK((op.apply(x) - x).abs().maxCoeff() < 1e-12);
  CHECK((op.apply_adjoint(x) - x).abs().maxCoeff() < 1e-12);
  CHECK(op.spectral_norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("unit-sum PSF preserves flat images") {
  const Image flat = Image::Constant(16, 16, 3.25);
  const ConvOperator op(make_psf(PsfKind::moving_average, 5), 16, 16);
  CHECK((op.apply(flat) - flat).abs().maxCoeff() < 1e-12);
}

TEST_CASE("corner impulse wraps circularly") {
  Image x = Image::Zero(8, 8);
  x(0, 0) = 1.0;
  const ConvOperator op(make_psf(PsfKind::moving_average, 3), 8, 8);
  const Image y = op.apply(x);
  int hits = 0;
  for (Index r = 0; r < 8; ++r)
    for (Index c = 0; c < 8; ++c) {
      const bool in_row = (r <= 1 || r == 7);
      const bool in_col = (c <= 1 || c == 7);
      if (in_row && in_col) {
        CHECK(y(r, c) == doctest::Approx(1.0 / 9.0).epsilon(1e-12));
        ++hits;
      } else {
        CHECK(std::abs(y(r, c)) < 1e-12);
      }
    }
  CHECK(hits == 9);
}

TEST_CASE("frequency-domain apply matches the spatial oracle") {
  testutil::Rng rng(22);
  for (auto [kind, param] : {std::pair{PsfKind::moving_average, 3.0},
                             std::pair{PsfKind::moving_average, 7.0},
                             std::pair{PsfKind::gaussian, 0.8}}) {
    const Psf psf = make_psf(kind, param);
    for (Index size : {9, 16}) {
      if (psf.kernel.rows() > size) continue;
      const Image x = rng.image(size, size, -2, 2);
      const ConvOperator op(psf, size, size);
      const Image expected = spatial_circular_conv(psf, x);
      CHECK((op.apply(x) - expected).abs().maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("apply and apply_adjoint are exact adjoints") {
  testutil::Rng rng(33);
  const ConvOperator op(make_psf(PsfKind::gaussian, 1.2), 16, 16);
  for (int trial = 0; trial < 20; ++trial) {
    const Image x = rng.image(16, 16, -1, 1);
    const Image y = rng.image(16, 16, -1, 1);
    const double lhs = (op.apply(x) * y).sum();
    const double rhs = (x * op.apply_adjoint(y)).sum();
    CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(std::abs(lhs), 1.0));
  }
}

TEST_CASE("symmetric PSF adjoint equals forward") {
  testutil::Rng rng(44);
  const Image x = rng.image(16, 16, -1, 1);
  const ConvOperator op(make_psf(PsfKind::moving_average, 5), 16, 16);
  CHECK((op.apply(x) - op.apply_adjoint(x)).abs().maxCoeff() < 1e-10);
}

TEST_CASE("spectral norm of unit-sum nonnegative PSF is one") {
  const ConvOperator ma(make_psf(PsfKind::moving_average, 7), 32, 32);
  CHECK(ma.spectral_norm() == doctest::Approx(1.0).epsilon(1e-12));
  const ConvOperator g(make_psf(PsfKind::gaussian, 1.5), 32, 32);
  CHECK(g.spectral_norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("spectral norm is homogeneous in the kernel") {
  const Psf psf = make_psf(PsfKind::moving_average, 3, /*normalize=*/false);
  Psf doubled = psf;
  doubled.kernel *= 2.0;
  const ConvOperator a(psf, 16, 16);
  const ConvOperator b(doubled, 16, 16);
  CHECK(b.spectral_norm() == doctest::Approx(2.0 * a.spectral_norm()).epsilon(1e-12));
}

TEST_CASE("spectral norm agrees with power iteration on HtH") {
  testutil::Rng rng(55);
  const ConvOperator op(make_psf(PsfKind::moving_average, 3), 16, 16);
  Image v = rng.image(16, 16, 0.1, 1.0);
  v /= std::sqrt(v.square().sum());
  double eig = 0;
  for (int it = 0; it < 600; ++it) {
    const Image w = op.apply_adjoint(op.apply(v));
    eig = (v * w).sum();
    v = w / std::sqrt(w.square().sum());
  }
  CHECK(std::sqrt(eig) == doctest::Approx(op.spectral_norm()).epsilon(1e-6));
}

TEST_CASE("dimension mismatches throw") {
  const ConvOperator op(make_psf(PsfKind::delta), 8, 8);
  CHECK_THROWS_AS(op.apply(Image::Zero(4, 4)), std::invalid_argument);
  CHECK_THROWS_AS(op.apply_adjoint(Image::Zero(8, 4)), std::invalid_argument);
}

TEST_CASE("psf file loading normalizes") {
  testutil::TempDir dir("psf_file");
  Image k(3, 3);
  k << 1, 2, 1, 2, 4, 2, 1, 2, 1;
  const auto p = dir.path() / "k.rawf32";
  write_image(k, p, ImageFormat::rawf32);
  const Psf psf = load_psf(p);
  CHECK(psf.sum() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(psf.kernel(1, 1) == doctest::Approx(0.25));
}
