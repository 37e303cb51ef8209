#include <doctest.h>

#include <cmath>
#include <fstream>

#include "spdeconv/errors.hpp"
#include "spdeconv/image.hpp"
#include "spdeconv/image_io.hpp"
#include "spdeconv/phantom.hpp"
#include "spdeconv/poisson.hpp"
#include "test_util.hpp"

using namespace spdeconv;

TEST_CASE("pgm P2 read") {
  testutil::TempDir dir("pgm_p2");
  const auto p = dir.path() / "a.pgm";
  {
    std::ofstream f(p);
    f << "P2\n# comment line\n2 2\n255\n0 1\n2 3\n";
  }
  const Image img = read_image(p, ImageFormat::pgm);
  REQUIRE(img.rows() == 2);
  REQUIRE(img.cols() == 2);
  CHECK(img(0, 0) == 0);
  CHECK(img(0, 1) == 1);
  CHECK(img(1, 0) == 2);
  CHECK(img(1, 1) == 3);
}

TEST_CASE("pgm P2 size mismatch is a distinct error") {
  testutil::TempDir dir("pgm_bad");
  const auto missing = dir.path() / "short.pgm";
  {
    std::ofstream f(missing);
    f << "P2\n2 2\n255\n0 1 2\n";
  }
  CHECK_THROWS_AS(read_image(missing, ImageFormat::pgm), DataError);

  const auto extra = dir.path() / "long.pgm";
  {
    std::ofstream f(extra);
    f << "P2\n2 2\n255\n0 1 2 3 4\n";
  }
  CHECK_THROWS_AS(read_image(extra, ImageFormat::pgm), DataError);

  const auto garbled = dir.path() / "garbled.pgm";
  {
    std::ofstream f(garbled);
    f << "P2\n2 x\n255\n0 1 2 3\n";
  }
  CHECK_THROWS_AS(read_image(garbled, ImageFormat::pgm), DataError);

  CHECK_THROWS_AS(read_image(dir.path() / "absent.pgm", ImageFormat::pgm), DataError);
}

TEST_CASE("pgm write clamps and quantizes; round-trip is idempotent") {
  testutil::TempDir dir("pgm_clamp");
  Image img(1, 3);
  img << 70000.0, -3.0, 1234.4;
  const auto p = dir.path() / "c.pgm";
  write_image(img, p, ImageFormat::pgm);
  const Image back = read_image(p);
  CHECK(back(0, 0) == 65535);
  CHECK(back(0, 1) == 0);
  CHECK(back(0, 2) == 1234);

  // One quantization fixes the image; a second write/read changes nothing.
  const auto p2 = dir.path() / "c2.pgm";
  write_image(back, p2, ImageFormat::pgm);
  const Image back2 = read_image(p2);
  CHECK((back2 == back).all());
}

TEST_CASE("pgm binary P5 16-bit round trip") {
  testutil::TempDir dir("pgm_p5");
  testutil::Rng rng(7);
  Image img = rng.image(5, 9, 0.0, 65535.0);
  img = img.round();
  const auto p = dir.path() / "b.pgm";
  write_image(img, p, ImageFormat::pgm);
  const Image back = read_image(p, ImageFormat::pgm);
  CHECK((back == img).all());
}

TEST_CASE("rawf32 round trip is bit exact") {
  testutil::TempDir dir("rawf32");
  testutil::Rng rng(3);
  // Values quantized to float32: the format holds them losslessly.
  Image img(8, 8);
  for (Index i = 0; i < img.size(); ++i)
    img.data()[i] = static_cast<double>(static_cast<float>(rng.uniform(-50, 50)));
  const auto p = dir.path() / "img.rawf32";
  write_image(img, p, ImageFormat::rawf32);
  const Image back = read_image(p);
  REQUIRE(back.rows() == 8);
  REQUIRE(back.cols() == 8);
  for (Index i = 0; i < img.size(); ++i) CHECK(back.data()[i] == img.data()[i]);
}

TEST_CASE("rawf32 sidecar mismatch errors") {
  testutil::TempDir dir("rawf32_bad");
  const auto p = dir.path() / "img.rawf32";
  write_image(Image::Constant(2, 2, 1.0), p, ImageFormat::rawf32);
  {
    std::ofstream f(p.string() + ".json");
    f << "{\"width\": 3, \"height\": 2, \"dtype\": \"f32\"}";
  }
  CHECK_THROWS_AS(read_image(p), DataError);
}

TEST_CASE("phantom flat") {
  const Image img = phantom(PhantomKind::flat, 4, 4, {7.0});
  CHECK((img == 7.0).all());
}

TEST_CASE("phantom point_grid 32x32 spacing 8") {
  const Image img = phantom(PhantomKind::point_grid, 32, 32, {8.0, 30.0});
  CHECK((img > 0).count() == 16);
  CHECK(img.maxCoeff() == 30.0);
  CHECK(img.minCoeff() == 0.0);
}

TEST_CASE("phantom lines_gaussians content") {
  const Image img = phantom(PhantomKind::lines_gaussians, 128, 128);
  CHECK(img.minCoeff() >= 0.0);
  CHECK(img.maxCoeff() > 0.0);
  CHECK(all_finite(img));
  const auto& params = LinesGaussiansParams::defaults();
  CHECK(params.points.size() >= 1);
  CHECK(params.blobs.size() >= 2);
  CHECK(params.lines.size() >= 2);
  // The point source stays isolated from the other structures.
  const Index pr = std::lround(params.points[0].cy * 127);
  const Index pc = std::lround(params.points[0].cx * 127);
  const double ambient = img(pr - 4, pc - 4);
  CHECK(img(pr, pc) > 100 * std::max(ambient, 1e-12));
}

TEST_CASE("phantom errors") {
  CHECK_THROWS_AS(phantom(PhantomKind::flat, 0, 4), std::invalid_argument);
  CHECK_THROWS_AS(phantom(PhantomKind::lines_gaussians, 8, 8), std::invalid_argument);
  CHECK_THROWS_AS(phantom_kind_from_string("blob"), UsageError);
}

TEST_CASE("rescale_peak") {
  Image img(1, 3);
  img << 0, 2, 4;
  const Image scaled = rescale_peak(img, 30.0);
  CHECK(scaled(0, 0) == 0.0);
  CHECK(scaled(0, 1) == 15.0);
  CHECK(scaled(0, 2) == 30.0);

  const Image same = rescale_peak(scaled, 30.0);
  CHECK((same == scaled).all());

  CHECK_THROWS_AS(rescale_peak(Image::Zero(2, 2), 30.0), std::invalid_argument);
}

TEST_CASE("metrics values and symmetry") {
  Image ref(1, 2), est(1, 2);
  ref << 0, 0;
  est << 1, 3;
  const MetricReport r = metrics(ref, est);
  CHECK(r.mae == doctest::Approx(2.0));
  CHECK(r.mse == doctest::Approx(5.0));

  const MetricReport swapped = metrics(est, ref);
  CHECK(swapped.mae == r.mae);
  CHECK(swapped.mse == r.mse);

  const MetricReport self = metrics(est, est);
  CHECK(self.mae == 0.0);
  CHECK(self.mse == 0.0);

  const Image flat30 = Image::Constant(4, 4, 30.0);
  const Image flat27 = Image::Constant(4, 4, 27.0);
  CHECK(metrics(flat30, flat27).normalized_mae() == doctest::Approx(0.1));

  CHECK_THROWS_AS(metrics(ref, Image::Zero(2, 2)), std::invalid_argument);
}

TEST_CASE("poissonize zero mean and determinism") {
  const Image zeros = Image::Zero(16, 16);
  CHECK((poissonize(zeros, 42) == 0).all());

  const Image mean = Image::Constant(32, 32, 50.0);
  const Image a = poissonize(mean, 99);
  const Image b = poissonize(mean, 99);
  CHECK((a == b).all());
  const Image c = poissonize(mean, 100);
  CHECK((a != c).any());

  CHECK_THROWS_AS(poissonize(Image::Constant(2, 2, -1.0), 1), std::invalid_argument);
}

TEST_CASE("poissonize flat mean 50 sample mean band") {
  const Image mean = Image::Constant(64, 64, 50.0);
  for (std::uint64_t seed : {1, 2, 3}) {
    const double m = poissonize(mean, seed).mean();
    CHECK(m > 47.0);
    CHECK(m < 53.0);
  }
}

TEST_CASE("poissonize law of large numbers at mean 20") {
  // 10^4 pixels at intensity 20; the sample mean stays within three
  // standard errors.
  const Image mean = Image::Constant(100, 100, 20.0);
  const double se = std::sqrt(20.0 / 1e4);
  const double m = poissonize(mean, 2024).mean();
  CHECK(std::abs(m - 20.0) <= 3.0 * se);
}

TEST_CASE("poissonize integer valued across sampling regimes") {
  // Means straddle the inversion/rejection switch at 30.
  Image mean(1, 4);
  mean << 0.5, 12.0, 29.9, 500.0;
  const Image out = poissonize(mean.replicate(64, 1), 5);
  CHECK((out == out.round()).all());
  CHECK(out.minCoeff() >= 0);
}

TEST_CASE("poisson sampler agrees with theoretical variance at high mean") {
  PoissonSampler s(31337);
  const int n = 20000;
  const double mu = 200.0;
  double sum = 0, sum2 = 0;
  for (int i = 0; i < n; ++i) {
    const double v = static_cast<double>(s.sample(mu));
    sum += v;
    sum2 += v * v;
  }
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  CHECK(std::abs(mean - mu) < 4.0 * std::sqrt(mu / n));
  CHECK(var > 0.9 * mu);
  CHECK(var < 1.1 * mu);
}
