#pragma once

#include <filesystem>

#include "spdeconv/types.hpp"

namespace spdeconv {

enum class ImageFormat { pgm, rawf32 };

/// Reads a PGM (P2 or P5, maxval <= 65535) or a rawf32 image.
///
/// rawf32 files hold little-endian IEEE float32 samples in row-major order
/// and carry a JSON sidecar `<path>.json` with {"width": W, "height": H,
/// "dtype": "f32"}.
Image read_image(const std::filesystem::path& path, ImageFormat format);

/// Infers the format from the extension (.pgm / .rawf32).
Image read_image(const std::filesystem::path& path);

/// Writes `img` in the given format.
///
/// PGM output is binary P5 with maxval 65535; values are rounded and clamped
/// to [0, 65535] (2-byte big-endian samples). rawf32 output is lossless for
/// float32-representable data and writes the JSON sidecar described above.
void write_image(const Image& img, const std::filesystem::path& path, ImageFormat format);

void write_image(const Image& img, const std::filesystem::path& path);

ImageFormat format_from_extension(const std::filesystem::path& path);
const char* format_extension(ImageFormat format);

} // namespace spdeconv
