#include "spdeconv/phantom.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "spdeconv/errors.hpp"

namespace spdeconv {

namespace {

// Distance from point q to segment [p0, p1].
double segment_distance(double qx, double qy, double p0x, double p0y,
                        double p1x, double p1y) {
  const double dx = p1x - p0x, dy = p1y - p0y;
  const double len2 = dx * dx + dy * dy;
  double t = len2 > 0 ? ((qx - p0x) * dx + (qy - p0y) * dy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  const double cx = p0x + t * dx, cy = p0y + t * dy;
  return std::hypot(qx - cx, qy - cy);
}

Image flat_phantom(Index width, Index height, double value) {
  return Image::Constant(height, width, value);
}

Image point_grid_phantom(Index width, Index height, double spacing, double amplitude) {
  if (spacing < 1) throw std::invalid_argument("point_grid: spacing must be >= 1");
  Image img = Image::Zero(height, width);
  const auto s = static_cast<Index>(spacing);
  for (Index r = s / 2; r < height; r += s)
    for (Index c = s / 2; c < width; c += s) img(r, c) = amplitude;
  return img;
}

} // namespace

LinesGaussiansParams LinesGaussiansParams::defaults() {
  LinesGaussiansParams p;
  p.points = {{0.15, 0.15, 1.0}};
  p.blobs = {{0.65, 0.28, 0.040, 0.85},
             {0.32, 0.62, 0.075, 0.60},
             {0.80, 0.62, 0.025, 0.90}};
  p.lines = {{0.10, 0.90, 0.90, 0.55, 0.70, 0.009},
             {0.55, 0.12, 0.88, 0.88, 0.50, 0.009}};
  return p;
}

Image lines_gaussians_phantom(Index width, Index height, const LinesGaussiansParams& p) {
  if (width < 16 || height < 16)
    throw std::invalid_argument("lines_gaussians: size must be at least 16x16");
  Image img = Image::Zero(height, width);
  const double scale = static_cast<double>(std::min(width, height));

  for (const auto& ps : p.points) {
    const auto c = static_cast<Index>(std::lround(ps.cx * (width - 1)));
    const auto r = static_cast<Index>(std::lround(ps.cy * (height - 1)));
    if (r >= 0 && r < height && c >= 0 && c < width) img(r, c) += ps.amplitude;
  }
  for (Index r = 0; r < height; ++r) {
    for (Index c = 0; c < width; ++c) {
      const double x = static_cast<double>(c), y = static_cast<double>(r);
      double v = 0;
      for (const auto& b : p.blobs) {
        const double sx = b.sigma * scale;
        const double d2 = std::pow(x - b.cx * (width - 1), 2) +
                          std::pow(y - b.cy * (height - 1), 2);
        v += b.amplitude * std::exp(-d2 / (2 * sx * sx));
      }
      for (const auto& l : p.lines) {
        const double w = std::max(l.width * scale, 0.7);
        const double d = segment_distance(x, y, l.x0 * (width - 1), l.y0 * (height - 1),
                                          l.x1 * (width - 1), l.y1 * (height - 1));
        v += l.amplitude * std::exp(-(d * d) / (2 * w * w));
      }
      img(r, c) += v;
    }
  }
  return img;
}

Image phantom(PhantomKind kind, Index width, Index height,
              const std::vector<double>& params) {
  if (width < 1 || height < 1)
    throw std::invalid_argument("phantom: nonpositive dimensions");
  switch (kind) {
    case PhantomKind::flat:
      return flat_phantom(width, height, params.empty() ? 1.0 : params[0]);
    case PhantomKind::point_grid:
      return point_grid_phantom(width, height, params.size() > 0 ? params[0] : 8.0,
                                params.size() > 1 ? params[1] : 30.0);
    case PhantomKind::lines_gaussians:
      return lines_gaussians_phantom(width, height, LinesGaussiansParams::defaults());
  }
  throw std::invalid_argument("phantom: unknown kind");
}

PhantomKind phantom_kind_from_string(const std::string& name) {
  if (name == "lines_gaussians") return PhantomKind::lines_gaussians;
  if (name == "point_grid") return PhantomKind::point_grid;
  if (name == "flat") return PhantomKind::flat;
  throw UsageError("unknown phantom kind '" + name + "'");
}

} // namespace spdeconv
