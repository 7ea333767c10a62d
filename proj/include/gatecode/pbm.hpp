#pragma once

#include <cctype>
#include <stdexcept>
#include <string>
#include <string_view>

#include "gatecode/bitgrid.hpp"

namespace gatecode {

class PbmError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// ASCII PBM (P1), one character per pixel, LF row separators, 1 = dark.
inline std::string write_pbm(const BitGrid& grid) {
  std::string out = "P1\n";
  out += std::to_string(grid.width);
  out += ' ';
  out += std::to_string(grid.height);
  out += '\n';
  for (int r = 0; r < grid.height; ++r) {
    for (int c = 0; c < grid.width; ++c) out += grid.get(r, c) ? '1' : '0';
    out += '\n';
  }
  return out;
}

/// Parses ASCII PBM, tolerating comments and arbitrary whitespace between
/// tokens per the format's definition.
inline BitGrid read_pbm(std::string_view text) {
  size_t pos = 0;
  auto skip_separators = [&] {
    while (pos < text.size()) {
      const char c = text[pos];
      if (c == '#') {
        while (pos < text.size() && text[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos;
      } else {
        break;
      }
    }
  };
  auto read_int = [&]() -> int {
    skip_separators();
    size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos == start) throw PbmError("expected integer in PBM header");
    long v = 0;
    for (size_t i = start; i < pos; ++i) {
      v = v * 10 + (text[i] - '0');
      if (v > 1'000'000) throw PbmError("PBM dimension too large");
    }
    return static_cast<int>(v);
  };

  skip_separators();
  if (text.substr(pos, 2) != "P1") throw PbmError("not an ASCII PBM (missing P1 magic)");
  pos += 2;
  const int width = read_int();
  const int height = read_int();
  if (width <= 0 || height <= 0) throw PbmError("PBM dimensions must be positive");

  BitGrid grid(width, height);
  for (int r = 0; r < height; ++r)
    for (int c = 0; c < width; ++c) {
      skip_separators();
      if (pos >= text.size()) throw PbmError("PBM pixel data truncated");
      const char ch = text[pos++];
      if (ch != '0' && ch != '1') throw PbmError("PBM pixel must be 0 or 1");
      grid.set(r, c, ch == '1');
    }
  return grid;
}

}  // namespace gatecode
