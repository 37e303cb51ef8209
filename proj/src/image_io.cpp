#include "spdeconv/image_io.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "spdeconv/errors.hpp"

namespace spdeconv {

namespace {

constexpr int kPgmMaxval = 65535;

// Skips whitespace and '#' comment lines, then reads one unsigned token.
long next_pnm_value(std::istream& in, const std::string& what) {
  int c = in.get();
  while (c != EOF) {
    if (c == '#') {
      while (c != EOF && c != '\n') c = in.get();
    } else if (std::isspace(c)) {
      c = in.get();
    } else {
      break;
    }
  }
  if (c == EOF) throw DataError("pgm: truncated header while reading " + what);
  std::string tok;
  while (c != EOF && !std::isspace(c)) {
    tok.push_back(static_cast<char>(c));
    c = in.get();
  }
  try {
    size_t pos = 0;
    long v = std::stol(tok, &pos);
    if (pos != tok.size() || v < 0) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw DataError("pgm: malformed " + what + " token '" + tok + "'");
  }
}

Image read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());

  char m0 = 0, m1 = 0;
  in.get(m0);
  in.get(m1);
  if (m0 != 'P' || (m1 != '2' && m1 != '5'))
    throw DataError("pgm: bad magic in " + path.string());
  const bool binary = (m1 == '5');

  const long width = next_pnm_value(in, "width");
  const long height = next_pnm_value(in, "height");
  const long maxval = next_pnm_value(in, "maxval");
  if (width < 1 || height < 1)
    throw DataError("pgm: nonpositive dimensions in " + path.string());
  if (maxval < 1 || maxval > kPgmMaxval)
    throw DataError("pgm: unsupported maxval " + std::to_string(maxval));

  Image img(height, width);
  const long n = width * height;
  if (binary) {
    // Header ends with exactly one whitespace byte (already consumed by the
    // maxval token reader).
    const int bytes = maxval > 255 ? 2 : 1;
    std::string buf(static_cast<size_t>(n) * bytes, '\0');
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (in.gcount() != static_cast<std::streamsize>(buf.size()))
      throw DataError("pgm: pixel data shorter than declared size in " + path.string());
    const auto* u = reinterpret_cast<const unsigned char*>(buf.data());
    for (long i = 0; i < n; ++i) {
      long v = bytes == 2 ? (static_cast<long>(u[2 * i]) << 8) | u[2 * i + 1] : u[i];
      img.data()[i] = static_cast<double>(v);
    }
  } else {
    for (long i = 0; i < n; ++i) {
      long v = next_pnm_value(in, "pixel");
      if (v > maxval) throw DataError("pgm: sample exceeds maxval in " + path.string());
      img.data()[i] = static_cast<double>(v);
    }
    // A trailing extra sample means the declared size is wrong.
    int c = in.get();
    while (c != EOF && std::isspace(c)) c = in.get();
    if (c != EOF) throw DataError("pgm: more samples than declared size in " + path.string());
  }
  return img;
}

void write_pgm(const Image& img, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << "P5\n" << img.cols() << " " << img.rows() << "\n" << kPgmMaxval << "\n";
  const Index n = img.size();
  std::string buf(static_cast<size_t>(n) * 2, '\0');
  for (Index i = 0; i < n; ++i) {
    double v = std::round(img.data()[i]);
    v = std::clamp(v, 0.0, static_cast<double>(kPgmMaxval));
    const auto q = static_cast<std::uint16_t>(v);
    buf[2 * i] = static_cast<char>(q >> 8);
    buf[2 * i + 1] = static_cast<char>(q & 0xff);
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw DataError("short write to " + path.string());
}

std::filesystem::path sidecar_path(const std::filesystem::path& path) {
  auto p = path;
  p += ".json";
  return p;
}

Image read_rawf32(const std::filesystem::path& path) {
  std::ifstream meta(sidecar_path(path));
  if (!meta) throw DataError("cannot open sidecar " + sidecar_path(path).string());
  nlohmann::json j;
  try {
    meta >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("sidecar " + sidecar_path(path).string() + ": " + e.what());
  }
  if (!j.contains("width") || !j.contains("height"))
    throw DataError("sidecar " + sidecar_path(path).string() + ": missing width/height");
  if (j.value("dtype", "f32") != "f32")
    throw DataError("sidecar " + sidecar_path(path).string() + ": unsupported dtype");
  const long width = j["width"].get<long>();
  const long height = j["height"].get<long>();
  if (width < 1 || height < 1)
    throw DataError("sidecar " + sidecar_path(path).string() + ": nonpositive dimensions");

  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  const long n = width * height;
  std::vector<float> raw(static_cast<size_t>(n));
  in.read(reinterpret_cast<char*>(raw.data()),
          static_cast<std::streamsize>(raw.size() * sizeof(float)));
  if (in.gcount() != static_cast<std::streamsize>(raw.size() * sizeof(float)))
    throw DataError("rawf32: file size does not match sidecar dimensions for " + path.string());
  in.get();
  if (!in.eof())
    throw DataError("rawf32: file size does not match sidecar dimensions for " + path.string());

  Image img(height, width);
  for (long i = 0; i < n; ++i) img.data()[i] = static_cast<double>(raw[i]);
  return img;
}

void write_rawf32(const Image& img, const std::filesystem::path& path) {
  static_assert(std::endian::native == std::endian::little,
                "rawf32 writer assumes a little-endian host");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  const Index n = img.size();
  std::vector<float> raw(static_cast<size_t>(n));
  for (Index i = 0; i < n; ++i) raw[i] = static_cast<float>(img.data()[i]);
  out.write(reinterpret_cast<const char*>(raw.data()),
            static_cast<std::streamsize>(raw.size() * sizeof(float)));
  if (!out) throw DataError("short write to " + path.string());

  nlohmann::json j{{"width", img.cols()}, {"height", img.rows()}, {"dtype", "f32"}};
  std::ofstream meta(sidecar_path(path));
  if (!meta) throw DataError("cannot write sidecar " + sidecar_path(path).string());
  meta << j.dump(2) << "\n";
}

} // namespace

ImageFormat format_from_extension(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".pgm") return ImageFormat::pgm;
  if (ext == ".rawf32") return ImageFormat::rawf32;
  throw UsageError("cannot infer image format from extension '" + ext + "'");
}

const char* format_extension(ImageFormat format) {
  return format == ImageFormat::pgm ? ".pgm" : ".rawf32";
}

Image read_image(const std::filesystem::path& path, ImageFormat format) {
  return format == ImageFormat::pgm ? read_pgm(path) : read_rawf32(path);
}

Image read_image(const std::filesystem::path& path) {
  return read_image(path, format_from_extension(path));
}

void write_image(const Image& img, const std::filesystem::path& path, ImageFormat format) {
  if (img.size() == 0) throw std::invalid_argument("write_image: empty image");
  if (format == ImageFormat::pgm)
    write_pgm(img, path);
  else
    write_rawf32(img, path);
}

void write_image(const Image& img, const std::filesystem::path& path) {
  write_image(img, path, format_from_extension(path));
}

} // namespace spdeconv
