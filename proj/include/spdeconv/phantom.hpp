#pragma once

#include <vector>

#include "spdeconv/types.hpp"

namespace spdeconv {

enum class PhantomKind { lines_gaussians, point_grid, flat };

// Relative coordinates throughout: cx, cy, x0, ... in [0,1] with (0,0) the
// top-left corner; sigma and width as fractions of min(width, height).
struct PointSource {
  double cx, cy;
  double amplitude;
};
struct GaussianBlob {
  double cx, cy;
  double sigma;
  double amplitude;
};
struct LineSegment {
  double x0, y0, x1, y1;
  double amplitude;
  double width;
};

struct LinesGaussiansParams {
  std::vector<PointSource> points;
  std::vector<GaussianBlob> blobs;
  std::vector<LineSegment> lines;

  /// One isolated point source upper-left, three isotropic blobs, two lines.
  static LinesGaussiansParams defaults();
};

Image lines_gaussians_phantom(Index width, Index height, const LinesGaussiansParams& params);

/// Synthetic test images.
///
/// Interpretation of `params` by kind:
///   flat:            {value}             default {1}
///   point_grid:      {spacing, amplitude} default {8, 30}
///   lines_gaussians: ignored; uses LinesGaussiansParams::defaults()
///     (call lines_gaussians_phantom directly to customize placements).
Image phantom(PhantomKind kind, Index width, Index height,
              const std::vector<double>& params = {});

PhantomKind phantom_kind_from_string(const std::string& name);

} // namespace spdeconv
