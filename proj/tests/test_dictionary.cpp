#include <doctest.h>

#include <cmath>
#include <vector>

#include "spdeconv/dictionary.hpp"
#include "spdeconv/errors.hpp"
#include "test_util.hpp"

using namespace spdeconv;

namespace {

std::vector<DictionaryPtr> sample_dictionaries(Index size) {
  return {
      make_identity_dictionary(size, size),
      make_dwt_dictionary(size, size, 3),
      make_tidwt_dictionary(size, size, 3),
      make_union_dictionary({make_tidwt_dictionary(size, size, 2),
                             make_dwt_dictionary(size, size, 2)}),
      make_scaled_dictionary(make_tidwt_dictionary(size, size, 2), std::sqrt(2.0)),
  };
}

} // namespace

TEST_CASE("wavelet filters satisfy the orthonormality conditions") {
  for (const char* family : {"haar", "sym4", "db4"}) {
    const Eigen::VectorXd h = wavelets::lowpass(family);
    const Eigen::VectorXd g = wavelets::highpass_from_lowpass(h);
    CHECK(h.sum() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(std::abs(g.sum()) < 1e-12);
    // sum_k h[k] h[k+2m] = delta_m, and h is orthogonal to every even
    // translate of g.
    const Index n = h.size();
    for (Index m = 0; 2 * m < n; ++m) {
      double hh = 0, hg = 0, gg = 0;
      for (Index k = 0; k + 2 * m < n; ++k) {
        hh += h[k] * h[k + 2 * m];
        hg += h[k] * g[k + 2 * m];
        gg += g[k] * g[k + 2 * m];
      }
      const double expect = m == 0 ? 1.0 : 0.0;
      CHECK(hh == doctest::Approx(expect).epsilon(1e-10));
      CHECK(gg == doctest::Approx(expect).epsilon(1e-10));
      if (m > 0) CHECK(std::abs(hg) < 1e-10);
    }
  }
  CHECK_THROWS_AS(wavelets::lowpass("nope"), UsageError);
}

TEST_CASE("orthobasis round trip and isometry") {
  testutil::Rng rng(5);
  for (Index size : {16, 32}) {
    for (int levels = 1; levels <= 4; ++levels) {
      const auto dict = make_dwt_dictionary(size, size, levels);
      REQUIRE(dict->num_coefficients() == size * size);
      const Image x = rng.image(size, size, -3, 3);
      const CoefVec a = dict->analyze(x);
      CHECK(a.norm() == doctest::Approx(std::sqrt(x.square().sum())).epsilon(1e-10));
      const Image back = dict->synthesize(a);
      CHECK((back - x).abs().maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("perfect reconstruction up to the frame constant at all supported depths") {
  testutil::Rng rng(6);
  for (Index size : {16, 32, 64, 128}) {
    const int max_levels = static_cast<int>(std::log2(static_cast<double>(size)));
    for (int levels = 1; levels <= std::min(5, max_levels); ++levels) {
      const Image x = rng.image(size, size, -1, 1);
      for (const auto& dict : {make_dwt_dictionary(size, size, levels),
                               make_tidwt_dictionary(size, size, levels)}) {
        const double c = dict->frame_constant();
        const Image back = dict->synthesize(dict->analyze(x));
        CHECK((back - c * x).abs().maxCoeff() < 1e-10);
      }
    }
  }
}

TEST_CASE("tidwt is a Parseval frame") {
  testutil::Rng rng(7);
  const auto dict = make_tidwt_dictionary(32, 32, 4);
  CHECK(dict->frame_constant() == 1.0);
  CHECK(dict->num_coefficients() == (3 * 4 + 1) * 32 * 32);

  // The energy ratio ||a||^2 / ||x||^2 is constant across inputs.
  double mean = 0, m2 = 0;
  const int trials = 50;
  for (int i = 0; i < trials; ++i) {
    const Image x = rng.image(32, 32, -1, 1);
    const double ratio = dict->analyze(x).squaredNorm() / x.square().sum();
    const double d = ratio - mean;
    mean += d / (i + 1);
    m2 += d * (ratio - mean);
  }
  CHECK(mean == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(m2 / trials < 1e-18);
}

TEST_CASE("analysis and synthesis are adjoint on every dictionary kind") {
  testutil::Rng rng(8);
  for (const auto& dict : sample_dictionaries(16)) {
    CAPTURE(dict->spec());
    for (int trial = 0; trial < 5; ++trial) {
      const Image x = rng.image(16, 16, -1, 1);
      const CoefVec a = rng.coefs(dict->num_coefficients());
      const double lhs = dict->analyze(x).dot(a);
      const double rhs = (x * dict->synthesize(a)).sum();
      CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max({std::abs(lhs), std::abs(rhs), 1.0}));
    }
  }
}

TEST_CASE("frame operator is c times identity on random vectors") {
  testutil::Rng rng(9);
  for (const auto& dict : sample_dictionaries(16)) {
    CAPTURE(dict->spec());
    const double c = dict->frame_constant();
    const Image x = rng.image(16, 16, -1, 1);
    const Image y = dict->synthesize(dict->analyze(x));
    CHECK((y - c * x).abs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("zero image gives zero coefficients") {
  const auto dict = make_tidwt_dictionary(16, 16, 2);
  CHECK(dict->analyze(Image::Zero(16, 16)).norm() == 0.0);
}

TEST_CASE("orthobasis atoms have unit norm") {
  const auto dict = make_dwt_dictionary(16, 16, 3);
  testutil::Rng rng(10);
  for (int trial = 0; trial < 8; ++trial) {
    const Index idx = static_cast<Index>(rng.uniform(0, 1) * (dict->num_coefficients() - 1));
    CoefVec e = CoefVec::Zero(dict->num_coefficients());
    e[idx] = 1.0;
    const Image atom = dict->synthesize(e);
    CHECK(std::sqrt(atom.square().sum()) == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("frame constants") {
  CHECK(make_dwt_dictionary(16, 16, 2)->frame_constant() == 1.0);
  CHECK(make_identity_dictionary(8, 8)->frame_constant() == 1.0);
  CHECK(make_tidwt_dictionary(16, 16, 3)->frame_constant() == 1.0);
  const auto uni = make_union_dictionary(
      {make_tidwt_dictionary(16, 16, 2), make_dwt_dictionary(16, 16, 2)});
  CHECK(uni->frame_constant() == 2.0);
  const auto scaled = make_scaled_dictionary(make_dwt_dictionary(16, 16, 2), 2.0);
  CHECK(scaled->frame_constant() == 4.0);

  // Measured tightness constant matches the declared one for c != 1.
  testutil::Rng rng(11);
  const Image x = rng.image(16, 16, -1, 1);
  const double measured = scaled->analyze(x).squaredNorm() / x.square().sum();
  CHECK(measured == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("subband layout covers the coefficient vector") {
  for (const auto& dict : sample_dictionaries(16)) {
    Index total = 0;
    for (const auto& sb : dict->subbands()) {
      CHECK(sb.offset == total);
      total += sb.rows * sb.cols;
    }
    CHECK(total == dict->num_coefficients());
  }
}

TEST_CASE("dictionary spec parsing") {
  CHECK(parse_dictionary_spec("identity", 16, 16)->spec() == "identity");
  CHECK(parse_dictionary_spec("dwt:J=3", 16, 16)->spec() == "dwt:J=3");
  CHECK(parse_dictionary_spec("dwt", 16, 16)->spec() == "dwt:J=4");
  CHECK(parse_dictionary_spec("tidwt:J=2", 16, 16)->spec() == "tidwt:J=2");
  const auto uni = parse_dictionary_spec("union:tidwt:J=2+dwt:J=2", 16, 16);
  CHECK(uni->spec() == "union:tidwt:J=2+dwt:J=2");
  CHECK(uni->num_coefficients() == (3 * 2 + 1) * 256 + 256);

  CHECK_THROWS_AS(parse_dictionary_spec("curvelet", 16, 16), UsageError);
  CHECK_THROWS_AS(parse_dictionary_spec("dwt:J=zero", 16, 16), UsageError);
  CHECK_THROWS_AS(parse_dictionary_spec("union:", 16, 16), UsageError);
}

TEST_CASE("size and level validation") {
  CHECK_THROWS_AS(make_dwt_dictionary(24, 24, 2), std::invalid_argument);
  CHECK_THROWS_AS(make_dwt_dictionary(16, 16, 5), std::invalid_argument);
  CHECK_THROWS_AS(make_tidwt_dictionary(16, 16, 0), std::invalid_argument);
  CHECK_NOTHROW(make_dwt_dictionary(16, 16, 4));

  const auto dict = make_dwt_dictionary(16, 16, 2);
  CHECK_THROWS_AS(dict->analyze(Image::Zero(8, 8)), std::invalid_argument);
  CHECK_THROWS_AS(dict->synthesize(CoefVec::Zero(7)), std::invalid_argument);
}
