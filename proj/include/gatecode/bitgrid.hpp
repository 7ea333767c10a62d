#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace gatecode {

// Row-major boolean raster; 1 = dark module / set pixel.
struct BitGrid {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> bits;

  BitGrid() = default;
  BitGrid(int w, int h)
      : width(w), height(h), bits(static_cast<size_t>(w) * static_cast<size_t>(h), 0) {
    if (w <= 0 || h <= 0) throw std::invalid_argument("grid dimensions must be positive");
  }

  bool get(int row, int col) const {
    return bits[static_cast<size_t>(row) * static_cast<size_t>(width) +
                static_cast<size_t>(col)] != 0;
  }
  void set(int row, int col, bool dark) {
    bits[static_cast<size_t>(row) * static_cast<size_t>(width) + static_cast<size_t>(col)] =
        dark ? 1 : 0;
  }

  friend bool operator==(const BitGrid&, const BitGrid&) = default;
};

}  // namespace gatecode
