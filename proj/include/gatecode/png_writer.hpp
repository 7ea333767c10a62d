#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include "gatecode/bitgrid.hpp"

// Minimal grayscale PNG writer: stored (uncompressed) deflate blocks, so no
// zlib dependency. Fine for module matrices, wasteful for photographs.

namespace gatecode {
namespace detail {

inline std::uint32_t crc32_of(std::string_view data, std::uint32_t seed = 0) {
  static const auto table = [] {
    std::array<std::uint32_t, 256> t{};
    for (std::uint32_t n = 0; n < 256; ++n) {
      std::uint32_t c = n;
      for (int k = 0; k < 8; ++k) c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
      t[n] = c;
    }
    return t;
  }();
  std::uint32_t crc = seed ^ 0xFFFFFFFFu;
  for (unsigned char ch : data) crc = table[(crc ^ ch) & 0xFF] ^ (crc >> 8);
  return crc ^ 0xFFFFFFFFu;
}

inline void append_be32(std::string& out, std::uint32_t v) {
  out += static_cast<char>(v >> 24);
  out += static_cast<char>(v >> 16 & 0xFF);
  out += static_cast<char>(v >> 8 & 0xFF);
  out += static_cast<char>(v & 0xFF);
}

inline void append_chunk(std::string& out, const char type[5], std::string_view payload) {
  append_be32(out, static_cast<std::uint32_t>(payload.size()));
  std::string body(type, 4);
  body += payload;
  out += body;
  append_be32(out, crc32_of(body));
}

/// zlib stream holding raw data in stored deflate blocks.
inline std::string zlib_stored(std::string_view raw) {
  std::string out;
  out += '\x78';
  out += '\x01';
  size_t pos = 0;
  do {
    const size_t n = std::min<size_t>(raw.size() - pos, 65535);
    const bool final = pos + n == raw.size();
    out += static_cast<char>(final ? 1 : 0);
    out += static_cast<char>(n & 0xFF);
    out += static_cast<char>(n >> 8);
    out += static_cast<char>(~n & 0xFF);
    out += static_cast<char>(~(n >> 8) & 0xFF);
    out.append(raw.substr(pos, n));
    pos += n;
  } while (pos < raw.size());
  // adler32 of the raw bytes
  std::uint32_t a = 1, b = 0;
  for (unsigned char ch : raw) {
    a = (a + ch) % 65521;
    b = (b + a) % 65521;
  }
  append_be32(out, b << 16 | a);
  return out;
}

}  // namespace detail

/// Renders the grid as an 8-bit grayscale PNG, `scale` pixels per module,
/// dark = 0, light = 255.
inline std::string write_png(const BitGrid& grid, int scale = 8) {
  if (scale < 1 || scale > 64) throw std::invalid_argument("scale out of range");
  const int w = grid.width * scale, h = grid.height * scale;

  std::string raster;
  raster.reserve(static_cast<size_t>(h) * (static_cast<size_t>(w) + 1));
  for (int y = 0; y < h; ++y) {
    raster += '\0';  // filter type none
    for (int x = 0; x < w; ++x)
      raster += grid.get(y / scale, x / scale) ? '\0' : '\xFF';
  }

  std::string out("\x89PNG\r\n\x1a\n", 8);
  std::string ihdr;
  detail::append_be32(ihdr, static_cast<std::uint32_t>(w));
  detail::append_be32(ihdr, static_cast<std::uint32_t>(h));
  ihdr += '\x08';  // bit depth
  ihdr += '\0';    // grayscale
  ihdr += '\0';    // compression
  ihdr += '\0';    // filter
  ihdr += '\0';    // no interlace
  detail::append_chunk(out, "IHDR", ihdr);
  detail::append_chunk(out, "IDAT", detail::zlib_stored(raster));
  detail::append_chunk(out, "IEND", "");
  return out;
}

}  // namespace gatecode
