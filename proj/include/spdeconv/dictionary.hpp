#pragma once

#include <memory>
#include <string>
#include <vector>

#include "spdeconv/types.hpp"

namespace spdeconv {

enum class DictionaryKind { orthobasis, tight_frame };

enum class SubbandKind { approx, horizontal, vertical, diagonal, pixel };

/// One block of the coefficient vector: a (rows x cols) raster stored
/// row-major at [offset, offset + rows*cols).
struct Subband {
  int scale;        // 0 for pixel/approx-free dictionaries, else 1..J
  SubbandKind kind;
  Index offset;
  Index rows, cols;
};

/// Analysis/synthesis pair. analyze applies the transpose of the synthesis
/// operator; for a tight frame with constant c, synthesize(analyze(x)) = c*x.
class Dictionary {
 public:
  virtual ~Dictionary() = default;

  virtual CoefVec analyze(const Image& x) const = 0;
  virtual Image synthesize(const CoefVec& a) const = 0;

  virtual double frame_constant() const = 0;
  virtual DictionaryKind kind() const = 0;
  virtual Index width() const = 0;
  virtual Index height() const = 0;
  virtual Index num_coefficients() const = 0;
  virtual const std::vector<Subband>& subbands() const = 0;
  /// Round-trippable selection string (e.g. "tidwt:J=4").
  virtual std::string spec() const = 0;

  Index num_pixels() const { return width() * height(); }

 protected:
  void check_image(const Image& x) const;
  void check_coefs(const CoefVec& a) const;
};

using DictionaryPtr = std::shared_ptr<const Dictionary>;

DictionaryPtr make_identity_dictionary(Index width, Index height);

/// Orthogonal 2-D wavelet transform with periodic boundaries, `levels`
/// decomposition levels. Sides must be powers of two with 2^levels <= side.
DictionaryPtr make_dwt_dictionary(Index width, Index height, int levels,
                                  const std::string& family = "sym4");

/// Undecimated (translation-invariant) wavelet transform, normalized as a
/// Parseval tight frame (frame constant 1). Same size restrictions as the
/// decimated transform; L = (3*levels + 1) * n.
DictionaryPtr make_tidwt_dictionary(Index width, Index height, int levels,
                                    const std::string& family = "sym4");

/// Concatenates coefficient blocks; synthesis sums member syntheses. The
/// frame constant is the sum of the member constants.
DictionaryPtr make_union_dictionary(std::vector<DictionaryPtr> members);

/// Multiplies both analysis and synthesis by `gain`, giving frame constant
/// gain^2 * c. Useful for exercising non-unit frame constants.
DictionaryPtr make_scaled_dictionary(DictionaryPtr inner, double gain);

/// Grammar: identity | dwt:J=<j> | tidwt:J=<j> | union:<spec>+<spec>[+...]
DictionaryPtr parse_dictionary_spec(const std::string& spec, Index width, Index height);

namespace wavelets {
/// Orthogonal lowpass filters; families: "haar", "sym4" (8-tap
/// least-asymmetric), "db4" (8-tap extremal phase).
Eigen::VectorXd lowpass(const std::string& family);
/// Conjugate mirror: g[k] = (-1)^k h[len-1-k].
Eigen::VectorXd highpass_from_lowpass(const Eigen::VectorXd& h);
} // namespace wavelets

} // namespace spdeconv
