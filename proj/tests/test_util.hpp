#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>

#include "spdeconv/types.hpp"

namespace testutil {

// Deterministic uniforms independent of the library's sampling path.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0) {
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return lo + u * (hi - lo);
  }

  spdeconv::Image image(spdeconv::Index rows, spdeconv::Index cols, double lo = 0.0,
                        double hi = 1.0) {
    spdeconv::Image img(rows, cols);
    for (spdeconv::Index i = 0; i < img.size(); ++i) img.data()[i] = uniform(lo, hi);
    return img;
  }

  spdeconv::CoefVec coefs(spdeconv::Index n, double lo = -1.0, double hi = 1.0) {
    spdeconv::CoefVec v(n);
    for (spdeconv::Index i = 0; i < n; ++i) v[i] = uniform(lo, hi);
    return v;
  }

 private:
  std::mt19937_64 engine_;
};

// Fresh scratch directory under the system temp root, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("spdeconv_test_" + tag + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

} // namespace testutil
