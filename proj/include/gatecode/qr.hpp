#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gatecode/bitgrid.hpp"
#include "gatecode/gf256.hpp"

// QR symbol construction and decoding, versions 1 through 10, numeric and
// byte modes. The decoder consumes clean axis-aligned module matrices; it
// is the inverse of the encoder, not a camera pipeline.

namespace gatecode {

class QrCapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

class QrDecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class EcLevel : std::uint8_t { L, M, Q, H };

constexpr std::string_view ec_level_name(EcLevel e) {
  switch (e) {
    case EcLevel::L: return "L";
    case EcLevel::M: return "M";
    case EcLevel::Q: return "Q";
    case EcLevel::H: return "H";
  }
  throw std::invalid_argument("unknown EC level");
}

inline std::optional<EcLevel> ec_level_from_name(std::string_view s) {
  if (s == "L" || s == "l") return EcLevel::L;
  if (s == "M" || s == "m") return EcLevel::M;
  if (s == "Q" || s == "q") return EcLevel::Q;
  if (s == "H" || s == "h") return EcLevel::H;
  return std::nullopt;
}

inline constexpr int kMinVersion = 1;
inline constexpr int kMaxVersion = 10;

namespace qrspec {

// Error-correction codewords per block and block counts, versions 1-10,
// indexed [level][version-1] with levels ordered L, M, Q, H.
inline constexpr int kEccPerBlock[4][10] = {
    {7, 10, 15, 20, 26, 18, 20, 24, 30, 18},
    {10, 16, 26, 18, 24, 16, 18, 22, 22, 26},
    {13, 22, 18, 26, 18, 24, 18, 22, 20, 24},
    {17, 28, 22, 16, 22, 28, 26, 26, 24, 28},
};

inline constexpr int kNumBlocks[4][10] = {
    {1, 1, 1, 1, 1, 2, 2, 2, 2, 4},
    {1, 1, 1, 2, 2, 4, 4, 4, 5, 5},
    {1, 1, 2, 2, 4, 4, 6, 6, 8, 8},
    {1, 1, 2, 4, 4, 4, 5, 6, 8, 8},
};

constexpr void check_version(int version) {
  if (version < kMinVersion || version > kMaxVersion)
    throw std::invalid_argument("version out of range");
}

/// Modules available for codewords and remainder bits after all function
/// patterns are excluded.
constexpr int raw_data_modules(int version) {
  check_version(version);
  int result = (16 * version + 128) * version + 64;
  if (version >= 2) {
    const int num_align = version / 7 + 2;
    result -= (25 * num_align - 10) * num_align - 55;
    if (version >= 7) result -= 36;
  }
  return result;
}

constexpr int total_codewords(int version) { return raw_data_modules(version) / 8; }

constexpr int ecc_codewords(int version, EcLevel ec) {
  check_version(version);
  return kEccPerBlock[static_cast<int>(ec)][version - 1] *
         kNumBlocks[static_cast<int>(ec)][version - 1];
}

constexpr int data_codewords(int version, EcLevel ec) {
  return total_codewords(version) - ecc_codewords(version, ec);
}

constexpr int numeric_count_bits(int version) { return version <= 9 ? 10 : 12; }
constexpr int byte_count_bits(int version) { return version <= 9 ? 8 : 16; }

/// Largest digit payload that fits the version at the level.
constexpr int numeric_capacity(int version, EcLevel ec) {
  const int bits = data_codewords(version, ec) * 8 - 4 - numeric_count_bits(version);
  if (bits < 0) return 0;
  const int groups = bits / 10;
  const int rest = bits - groups * 10;
  return groups * 3 + (rest >= 7 ? 2 : rest >= 4 ? 1 : 0);
}

constexpr int byte_capacity(int version, EcLevel ec) {
  const int bits = data_codewords(version, ec) * 8 - 4 - byte_count_bits(version);
  return bits < 0 ? 0 : bits / 8;
}

inline std::vector<int> alignment_positions(int version) {
  check_version(version);
  if (version == 1) return {};
  const int num_align = version / 7 + 2;
  const int size = version * 4 + 17;
  const int step = (version * 4 + num_align * 2 + 1) / (num_align * 2 - 2) * 2;
  std::vector<int> result;
  for (int i = 0, pos = size - 7; i < num_align - 1; ++i, pos -= step)
    result.insert(result.begin(), pos);
  result.insert(result.begin(), 6);
  return result;
}

/// 15-bit format word: 2 level bits + 3 mask bits, BCH expanded and XOR
/// masked with 101010000010010.
constexpr int format_word(EcLevel ec, int mask_id) {
  constexpr int kLevelBits[4] = {1, 0, 3, 2};  // L, M, Q, H
  const int data = kLevelBits[static_cast<int>(ec)] << 3 | mask_id;
  int rem = data;
  for (int i = 0; i < 10; ++i) rem = (rem << 1) ^ ((rem >> 9) * 0x537);
  return ((data << 10) | rem) ^ 0x5412;
}

/// 18-bit version word for symbols of version 7 and up.
constexpr int version_word(int version) {
  int rem = version;
  for (int i = 0; i < 12; ++i) rem = (rem << 1) ^ ((rem >> 11) * 0x1F25);
  return version << 12 | rem;
}

constexpr bool mask_bit(int mask_id, int row, int col) {
  switch (mask_id) {
    case 0: return (col + row) % 2 == 0;
    case 1: return row % 2 == 0;
    case 2: return col % 3 == 0;
    case 3: return (col + row) % 3 == 0;
    case 4: return (col / 3 + row / 2) % 2 == 0;
    case 5: return col * row % 2 + col * row % 3 == 0;
    case 6: return (col * row % 2 + col * row % 3) % 2 == 0;
    case 7: return ((col + row) % 2 + col * row % 3) % 2 == 0;
  }
  throw std::invalid_argument("mask id out of range");
}

}  // namespace qrspec

// ---------------------------------------------------------------------------
// Bit stream
// ---------------------------------------------------------------------------

struct BitStream {
  std::vector<std::uint8_t> bits;  // one entry per bit, most significant first

  void append(std::uint32_t value, int n_bits) {
    if (n_bits < 0 || n_bits > 31 || (n_bits < 31 && value >> n_bits))
      throw std::invalid_argument("value does not fit bit width");
    for (int i = n_bits - 1; i >= 0; --i)
      bits.push_back(static_cast<std::uint8_t>((value >> i) & 1));
  }

  size_t size() const { return bits.size(); }

  std::vector<std::uint8_t> to_bytes() const {
    if (bits.size() % 8 != 0) throw std::logic_error("bit stream not byte aligned");
    std::vector<std::uint8_t> out(bits.size() / 8, 0);
    for (size_t i = 0; i < bits.size(); ++i)
      out[i / 8] = static_cast<std::uint8_t>(out[i / 8] << 1 | bits[i]);
    return out;
  }
};

struct BitReader {
  const std::vector<std::uint8_t>* bytes;
  size_t pos = 0;  // bit cursor

  explicit BitReader(const std::vector<std::uint8_t>& b) : bytes(&b) {}

  size_t remaining() const { return bytes->size() * 8 - pos; }

  std::uint32_t take(int n_bits) {
    if (static_cast<size_t>(n_bits) > remaining())
      throw QrDecodeError("bit stream exhausted");
    std::uint32_t v = 0;
    for (int i = 0; i < n_bits; ++i, ++pos)
      v = v << 1 | (((*bytes)[pos / 8] >> (7 - pos % 8)) & 1);
    return v;
  }
};

// ---------------------------------------------------------------------------
// Matrix
// ---------------------------------------------------------------------------

struct QrMatrix {
  int version = 1;
  EcLevel ec_level = EcLevel::M;
  int mask_id = -1;  // -1 while undecided
  std::vector<std::uint8_t> modules;   // 1 = dark
  std::vector<std::uint8_t> function;  // 1 = function pattern, not data

  QrMatrix(int ver, EcLevel ec) : version(ver), ec_level(ec) {
    qrspec::check_version(ver);
    const auto n = static_cast<size_t>(size()) * static_cast<size_t>(size());
    modules.assign(n, 0);
    function.assign(n, 0);
  }

  int size() const { return version * 4 + 17; }

  bool module(int row, int col) const { return modules[index(row, col)] != 0; }
  bool is_function(int row, int col) const { return function[index(row, col)] != 0; }

  void set_function(int row, int col, bool dark) {
    modules[index(row, col)] = dark ? 1 : 0;
    function[index(row, col)] = 1;
  }
  void set_data(int row, int col, bool dark) { modules[index(row, col)] = dark ? 1 : 0; }
  void flip(int row, int col) { modules[index(row, col)] ^= 1; }

  BitGrid to_grid(int quiet_zone = 4) const {
    const int n = size();
    BitGrid g(n + 2 * quiet_zone, n + 2 * quiet_zone);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) g.set(r + quiet_zone, c + quiet_zone, module(r, c));
    return g;
  }

 private:
  size_t index(int row, int col) const {
    const int n = size();
    if (row < 0 || row >= n || col < 0 || col >= n)
      throw std::out_of_range("module coordinates out of range");
    return static_cast<size_t>(row) * static_cast<size_t>(n) + static_cast<size_t>(col);
  }
};

namespace detail {

inline void draw_finder(QrMatrix& m, int center_row, int center_col) {
  const int n = m.size();
  for (int dr = -4; dr <= 4; ++dr)
    for (int dc = -4; dc <= 4; ++dc) {
      const int r = center_row + dr, c = center_col + dc;
      if (r < 0 || r >= n || c < 0 || c >= n) continue;
      const int dist = std::max(std::abs(dr), std::abs(dc));
      m.set_function(r, c, dist != 2 && dist != 4);
    }
}

inline void draw_alignment(QrMatrix& m, int center_row, int center_col) {
  for (int dr = -2; dr <= 2; ++dr)
    for (int dc = -2; dc <= 2; ++dc)
      m.set_function(center_row + dr, center_col + dc,
                     std::max(std::abs(dr), std::abs(dc)) != 1);
}

inline void draw_format(QrMatrix& m, EcLevel ec, int mask_id) {
  const int bits = qrspec::format_word(ec, mask_id);
  auto bit = [bits](int i) { return ((bits >> i) & 1) != 0; };
  const int n = m.size();
  // copy around the top-left finder
  for (int i = 0; i <= 5; ++i) m.set_function(i, 8, bit(i));
  m.set_function(7, 8, bit(6));
  m.set_function(8, 8, bit(7));
  m.set_function(8, 7, bit(8));
  for (int i = 9; i < 15; ++i) m.set_function(8, 14 - i, bit(i));
  // split copy along the other two finders
  for (int i = 0; i < 8; ++i) m.set_function(8, n - 1 - i, bit(i));
  for (int i = 8; i < 15; ++i) m.set_function(n - 15 + i, 8, bit(i));
  m.set_function(n - 8, 8, true);  // always-dark module
}

inline void draw_version_info(QrMatrix& m) {
  if (m.version < 7) return;
  const int bits = qrspec::version_word(m.version);
  const int n = m.size();
  for (int i = 0; i < 18; ++i) {
    const bool dark = ((bits >> i) & 1) != 0;
    const int a = n - 11 + i % 3, b = i / 3;
    m.set_function(b, a, dark);
    m.set_function(a, b, dark);
  }
}

inline void draw_function_patterns(QrMatrix& m) {
  const int n = m.size();
  for (int i = 0; i < n; ++i) {
    m.set_function(6, i, i % 2 == 0);
    m.set_function(i, 6, i % 2 == 0);
  }
  draw_finder(m, 3, 3);
  draw_finder(m, 3, n - 4);
  draw_finder(m, n - 4, 3);
  const auto align = qrspec::alignment_positions(m.version);
  const size_t last = align.size() - 1;
  for (size_t i = 0; i < align.size(); ++i)
    for (size_t j = 0; j < align.size(); ++j) {
      if ((i == 0 && j == 0) || (i == 0 && j == last) || (i == last && j == 0)) continue;
      draw_alignment(m, align[i], align[j]);
    }
  draw_format(m, m.ec_level, 0);  // placeholder, reserves the area
  draw_version_info(m);
}

/// Coordinates of data modules in codeword placement order.
inline std::vector<std::pair<int, int>> data_module_order(const QrMatrix& m) {
  const int n = m.size();
  std::vector<std::pair<int, int>> order;
  order.reserve(static_cast<size_t>(qrspec::raw_data_modules(m.version)));
  for (int right = n - 1; right >= 1; right -= 2) {
    if (right == 6) right = 5;
    const bool upward = ((right + 1) & 2) == 0;
    for (int vert = 0; vert < n; ++vert) {
      const int row = upward ? n - 1 - vert : vert;
      for (int j = 0; j < 2; ++j) {
        const int col = right - j;
        if (!m.is_function(row, col)) order.emplace_back(row, col);
      }
    }
  }
  return order;
}

inline void apply_mask(QrMatrix& m, int mask_id) {
  const int n = m.size();
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      if (!m.is_function(r, c) && qrspec::mask_bit(mask_id, r, c)) m.flip(r, c);
}

/// Splits data codewords into RS blocks, appends parity, interleaves.
inline std::vector<std::uint8_t> interleave_codewords(const std::vector<std::uint8_t>& data,
                                                      int version, EcLevel ec) {
  const int num_blocks = qrspec::kNumBlocks[static_cast<int>(ec)][version - 1];
  const int ecc_len = qrspec::kEccPerBlock[static_cast<int>(ec)][version - 1];
  const int total = qrspec::total_codewords(version);
  const int num_short = num_blocks - total % num_blocks;
  const int short_data_len = total / num_blocks - ecc_len;

  std::vector<std::vector<std::uint8_t>> blocks;
  size_t cursor = 0;
  for (int b = 0; b < num_blocks; ++b) {
    const size_t len = static_cast<size_t>(short_data_len + (b < num_short ? 0 : 1));
    blocks.emplace_back(data.begin() + cursor, data.begin() + cursor + len);
    cursor += len;
  }
  if (cursor != data.size()) throw std::logic_error("block split mismatch");

  std::vector<std::vector<std::uint8_t>> parities;
  for (const auto& b : blocks) parities.push_back(rs_parity(b, ecc_len));

  std::vector<std::uint8_t> out;
  out.reserve(static_cast<size_t>(total));
  const size_t max_data = static_cast<size_t>(short_data_len) + 1;
  for (size_t i = 0; i < max_data; ++i)
    for (const auto& b : blocks)
      if (i < b.size()) out.push_back(b[i]);
  for (size_t i = 0; i < static_cast<size_t>(ecc_len); ++i)
    for (const auto& p : parities) out.push_back(p[i]);
  return out;
}

/// Inverse of interleave_codewords, with per-block RS correction.
inline std::vector<std::uint8_t> deinterleave_and_correct(
    const std::vector<std::uint8_t>& codewords, int version, EcLevel ec) {
  const int num_blocks = qrspec::kNumBlocks[static_cast<int>(ec)][version - 1];
  const int ecc_len = qrspec::kEccPerBlock[static_cast<int>(ec)][version - 1];
  const int total = qrspec::total_codewords(version);
  const int num_short = num_blocks - total % num_blocks;
  const int short_data_len = total / num_blocks - ecc_len;
  if (codewords.size() != static_cast<size_t>(total))
    throw QrDecodeError("codeword count mismatch");

  std::vector<std::vector<std::uint8_t>> blocks(static_cast<size_t>(num_blocks));
  size_t cursor = 0;
  const size_t max_data = static_cast<size_t>(short_data_len) + 1;
  for (size_t i = 0; i < max_data; ++i)
    for (int b = 0; b < num_blocks; ++b) {
      const size_t data_len = static_cast<size_t>(short_data_len + (b < num_short ? 0 : 1));
      if (i < data_len) blocks[static_cast<size_t>(b)].push_back(codewords[cursor++]);
    }
  for (size_t i = 0; i < static_cast<size_t>(ecc_len); ++i)
    for (int b = 0; b < num_blocks; ++b)
      blocks[static_cast<size_t>(b)].push_back(codewords[cursor++]);
  if (cursor != codewords.size()) throw std::logic_error("deinterleave mismatch");

  std::vector<std::uint8_t> data;
  for (auto& block : blocks) {
    try {
      rs_correct(block, ecc_len);
    } catch (const RsError&) {
      throw QrDecodeError("uncorrectable");
    }
    data.insert(data.end(), block.begin(), block.end() - ecc_len);
  }
  return data;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Mask selection
// ---------------------------------------------------------------------------

/// Standard four-rule penalty. Lower is better.
inline long long penalty_score(const QrMatrix& m) {
  const int n = m.size();
  long long score = 0;

  // Rules 1 and 3 operate on rows and columns alike. Rule 3 counts the
  // dark-light-dark-dark-dark-light-dark window with four lights on either
  // flank; the quiet zone counts as light, hence the virtual padding.
  auto scan_line = [&](auto module_at) {
    // runs of equal color (rule 1)
    int run = 1;
    for (int i = 1; i <= n; ++i) {
      if (i < n && module_at(i) == module_at(i - 1)) {
        ++run;
        continue;
      }
      if (run >= 5) score += 3 + (run - 5);
      run = 1;
    }
    // finder-like windows (rule 3)
    std::vector<std::uint8_t> padded(static_cast<size_t>(n) + 8, 0);
    for (int i = 0; i < n; ++i) padded[static_cast<size_t>(i) + 4] = module_at(i) ? 1 : 0;
    static constexpr std::uint8_t kA[11] = {0, 0, 0, 0, 1, 0, 1, 1, 1, 0, 1};
    static constexpr std::uint8_t kB[11] = {1, 0, 1, 1, 1, 0, 1, 0, 0, 0, 0};
    for (size_t i = 0; i + 11 <= padded.size(); ++i) {
      if (std::equal(kA, kA + 11, padded.begin() + static_cast<long>(i))) score += 40;
      if (std::equal(kB, kB + 11, padded.begin() + static_cast<long>(i))) score += 40;
    }
  };
  for (int r = 0; r < n; ++r)
    scan_line([&](int c) { return m.module(r, c); });
  for (int c = 0; c < n; ++c)
    scan_line([&](int r) { return m.module(r, c); });

  // rule 2: 2x2 blocks of one color
  for (int r = 0; r + 1 < n; ++r)
    for (int c = 0; c + 1 < n; ++c) {
      const bool v = m.module(r, c);
      if (v == m.module(r, c + 1) && v == m.module(r + 1, c) && v == m.module(r + 1, c + 1))
        score += 3;
    }

  // rule 4: dark-module balance, 10 points per 5% deviation from 50%
  long long dark = 0;
  for (std::uint8_t v : m.modules) dark += v;
  const long long total = static_cast<long long>(n) * n;
  const long long k = (std::abs(dark * 20 - total * 10) + total - 1) / total - 1;
  score += k * 10;
  return score;
}

/// Picks the mask with minimal penalty for a matrix whose data is placed
/// but not yet masked. Leaves the matrix masked with the winner and its
/// format information drawn.
inline int choose_mask(QrMatrix& m) {
  long long best_score = -1;
  int best_mask = -1;
  for (int mask = 0; mask < 8; ++mask) {
    detail::apply_mask(m, mask);
    detail::draw_format(m, m.ec_level, mask);
    const long long s = penalty_score(m);
    detail::apply_mask(m, mask);  // undo; masking is an involution
    if (best_score < 0 || s < best_score) {
      best_score = s;
      best_mask = mask;
    }
  }
  detail::apply_mask(m, best_mask);
  detail::draw_format(m, m.ec_level, best_mask);
  m.mask_id = best_mask;
  return best_mask;
}

// ---------------------------------------------------------------------------
// Encoding
// ---------------------------------------------------------------------------

namespace detail {

inline QrMatrix assemble(BitStream stream, int version, EcLevel ec) {
  const int capacity_bits = qrspec::data_codewords(version, ec) * 8;
  const int terminator = std::min<int>(4, capacity_bits - static_cast<int>(stream.size()));
  stream.append(0, terminator);
  stream.append(0, (8 - stream.size() % 8) % 8);
  for (std::uint8_t pad = 0xEC; static_cast<int>(stream.size()) < capacity_bits;
       pad ^= 0xEC ^ 0x11)
    stream.append(pad, 8);

  const auto codewords = interleave_codewords(stream.to_bytes(), version, ec);

  QrMatrix m(version, ec);
  draw_function_patterns(m);
  const auto order = data_module_order(m);
  for (size_t i = 0; i < order.size(); ++i) {
    const bool dark = i < codewords.size() * 8 &&
                      ((codewords[i / 8] >> (7 - i % 8)) & 1) != 0;
    m.set_data(order[i].first, order[i].second, dark);
  }
  choose_mask(m);
  return m;
}

template <typename FitsFn>
int pick_version(std::optional<int> requested, FitsFn fits) {
  if (requested) {
    qrspec::check_version(*requested);
    if (!fits(*requested)) throw QrCapacityError("payload too large");
    return *requested;
  }
  for (int v = kMinVersion; v <= kMaxVersion; ++v)
    if (fits(v)) return v;
  throw QrCapacityError("payload too large");
}

}  // namespace detail

inline QrMatrix encode_numeric(std::string_view digits, EcLevel ec,
                               std::optional<int> version = std::nullopt) {
  if (digits.empty()) throw std::invalid_argument("not numeric: empty payload");
  for (char c : digits)
    if (c < '0' || c > '9') throw std::invalid_argument("not numeric");

  const int ver = detail::pick_version(version, [&](int v) {
    return static_cast<int>(digits.size()) <= qrspec::numeric_capacity(v, ec);
  });

  BitStream stream;
  stream.append(0b0001, 4);
  stream.append(static_cast<std::uint32_t>(digits.size()), qrspec::numeric_count_bits(ver));
  size_t i = 0;
  for (; i + 3 <= digits.size(); i += 3) {
    const auto v = static_cast<std::uint32_t>((digits[i] - '0') * 100 +
                                              (digits[i + 1] - '0') * 10 +
                                              (digits[i + 2] - '0'));
    stream.append(v, 10);
  }
  if (digits.size() - i == 2)
    stream.append(static_cast<std::uint32_t>((digits[i] - '0') * 10 + (digits[i + 1] - '0')),
                  7);
  else if (digits.size() - i == 1)
    stream.append(static_cast<std::uint32_t>(digits[i] - '0'), 4);

  return detail::assemble(std::move(stream), ver, ec);
}

inline QrMatrix encode_bytes(std::string_view bytes, EcLevel ec,
                             std::optional<int> version = std::nullopt) {
  const int ver = detail::pick_version(version, [&](int v) {
    return static_cast<int>(bytes.size()) <= qrspec::byte_capacity(v, ec);
  });
  BitStream stream;
  stream.append(0b0100, 4);
  stream.append(static_cast<std::uint32_t>(bytes.size()), qrspec::byte_count_bits(ver));
  for (char c : bytes) stream.append(static_cast<std::uint8_t>(c), 8);
  return detail::assemble(std::move(stream), ver, ec);
}

// ---------------------------------------------------------------------------
// Decoding
// ---------------------------------------------------------------------------

struct QrDecoded {
  std::string text;
  int version = 0;
  EcLevel ec_level = EcLevel::M;
  int mask_id = -1;
  bool numeric = false;  // true when every segment was numeric mode
};

namespace detail {

struct FormatRead {
  EcLevel ec;
  int mask_id;
  int distance;
};

inline std::optional<FormatRead> nearest_format(int word) {
  std::optional<FormatRead> best;
  for (int level = 0; level < 4; ++level)
    for (int mask = 0; mask < 8; ++mask) {
      const int cand = qrspec::format_word(static_cast<EcLevel>(level), mask);
      const int dist = __builtin_popcount(static_cast<unsigned>(cand ^ word));
      if (!best || dist < best->distance)
        best = FormatRead{static_cast<EcLevel>(level), mask, dist};
    }
  if (best && best->distance <= 3) return best;
  return std::nullopt;
}

inline FormatRead read_format(const QrMatrix& m) {
  const int n = m.size();
  int copy1 = 0, copy2 = 0;
  auto put = [](int word, int i, bool dark) {
    return word | (dark ? 1 : 0) << i;
  };
  for (int i = 0; i <= 5; ++i) copy1 = put(copy1, i, m.module(i, 8));
  copy1 = put(copy1, 6, m.module(7, 8));
  copy1 = put(copy1, 7, m.module(8, 8));
  copy1 = put(copy1, 8, m.module(8, 7));
  for (int i = 9; i < 15; ++i) copy1 = put(copy1, i, m.module(8, 14 - i));
  for (int i = 0; i < 8; ++i) copy2 = put(copy2, i, m.module(8, n - 1 - i));
  for (int i = 8; i < 15; ++i) copy2 = put(copy2, i, m.module(n - 15 + i, 8));

  const auto a = nearest_format(copy1);
  const auto b = nearest_format(copy2);
  if (a && (!b || a->distance <= b->distance)) return *a;
  if (b) return *b;
  throw QrDecodeError("bad format information");
}

inline std::string parse_payload(const std::vector<std::uint8_t>& data, int version,
                                 bool* all_numeric) {
  BitReader reader(data);
  std::string text;
  *all_numeric = true;
  while (reader.remaining() >= 4) {
    const std::uint32_t mode = reader.take(4);
    if (mode == 0) break;  // terminator
    if (mode == 1) {
      std::uint32_t count = reader.take(qrspec::numeric_count_bits(version));
      while (count >= 3) {
        const std::uint32_t v = reader.take(10);
        if (v >= 1000) throw QrDecodeError("invalid numeric payload");
        text += static_cast<char>('0' + v / 100);
        text += static_cast<char>('0' + v / 10 % 10);
        text += static_cast<char>('0' + v % 10);
        count -= 3;
      }
      if (count == 2) {
        const std::uint32_t v = reader.take(7);
        if (v >= 100) throw QrDecodeError("invalid numeric payload");
        text += static_cast<char>('0' + v / 10);
        text += static_cast<char>('0' + v % 10);
      } else if (count == 1) {
        const std::uint32_t v = reader.take(4);
        if (v >= 10) throw QrDecodeError("invalid numeric payload");
        text += static_cast<char>('0' + v);
      }
    } else if (mode == 4) {
      *all_numeric = false;
      std::uint32_t count = reader.take(qrspec::byte_count_bits(version));
      for (; count > 0; --count) text += static_cast<char>(reader.take(8));
    } else {
      throw QrDecodeError("unsupported mode");
    }
  }
  return text;
}

}  // namespace detail

/// Decodes a clean module matrix, tolerating a quiet zone of 0 to 8
/// light modules on each side.
inline QrDecoded decode_matrix(const BitGrid& grid) {
  int min_r = grid.height, max_r = -1, min_c = grid.width, max_c = -1;
  for (int r = 0; r < grid.height; ++r)
    for (int c = 0; c < grid.width; ++c)
      if (grid.get(r, c)) {
        min_r = std::min(min_r, r);
        max_r = std::max(max_r, r);
        min_c = std::min(min_c, c);
        max_c = std::max(max_c, c);
      }
  if (max_r < 0) throw QrDecodeError("blank image");
  const int h = max_r - min_r + 1, w = max_c - min_c + 1;
  if (h != w) throw QrDecodeError("symbol is not square");
  if ((w - 17) % 4 != 0) throw QrDecodeError("unsupported version");
  const int version = (w - 17) / 4;
  if (version < kMinVersion || version > kMaxVersion)
    throw QrDecodeError("unsupported version");

  QrMatrix m(version, EcLevel::M);
  for (int r = 0; r < w; ++r)
    for (int c = 0; c < w; ++c) m.set_data(r, c, grid.get(min_r + r, min_c + c));

  const auto fmt = detail::read_format(m);
  m.ec_level = fmt.ec;
  m.mask_id = fmt.mask_id;

  // Rebuild the function map so data modules can be located, then unmask.
  QrMatrix reference(version, fmt.ec);
  detail::draw_function_patterns(reference);
  m.function = reference.function;
  detail::apply_mask(m, fmt.mask_id);

  const auto order = detail::data_module_order(m);
  const int total = qrspec::total_codewords(version);
  std::vector<std::uint8_t> codewords(static_cast<size_t>(total), 0);
  for (size_t i = 0; i < static_cast<size_t>(total) * 8; ++i)
    codewords[i / 8] = static_cast<std::uint8_t>(
        codewords[i / 8] << 1 | (m.module(order[i].first, order[i].second) ? 1 : 0));

  const auto data = detail::deinterleave_and_correct(codewords, version, fmt.ec);

  QrDecoded result;
  result.version = version;
  result.ec_level = fmt.ec;
  result.mask_id = fmt.mask_id;
  result.text = detail::parse_payload(data, version, &result.numeric);
  return result;
}

}  // namespace gatecode
