// Encodes a digit payload, draws the matrix as ASCII art, and scans it back.
// Usage: qr_ascii_demo [digits] [L|M|Q|H]

#include <cstdio>
#include <string>

#include "gatecode/bitgrid.hpp"
#include "gatecode/qr.hpp"

using namespace gatecode;

int main(int argc, char** argv) {
  const std::string digits = argc > 1 ? argv[1] : "10370137";
  EcLevel ec = EcLevel::M;
  if (argc > 2) {
    const auto parsed = ec_level_from_name(argv[2]);
    if (!parsed) {
      std::fprintf(stderr, "unknown error-correction level '%s'\n", argv[2]);
      return 2;
    }
    ec = *parsed;
  }

  const QrMatrix matrix = encode_numeric(digits, ec);
  std::printf("payload %s -> version %d, ec %s, mask %d\n\n", digits.c_str(),
              matrix.version, std::string(ec_level_name(matrix.ec_level)).c_str(),
              matrix.mask_id);

  // Two modules per character cell keeps the aspect ratio close to square.
  const BitGrid grid = matrix.to_grid(2);
  for (int y = 0; y < grid.height; ++y) {
    for (int x = 0; x < grid.width; ++x) std::printf(grid.get(x, y) ? "##" : "  ");
    std::printf("\n");
  }

  const QrDecoded back = decode_matrix(grid);
  std::printf("\nscanned back: %s (%s)\n", back.text.c_str(),
              back.text == digits ? "matches" : "MISMATCH");
  return back.text == digits ? 0 : 1;
}
