#include "gatecode/qr.hpp"

#include <gtest/gtest.h>

#include <random>
#include <string>
#include <vector>

#include "gatecode/pbm.hpp"
#include "gatecode/png_writer.hpp"

using namespace gatecode;

namespace {

constexpr EcLevel kLevels[] = {EcLevel::L, EcLevel::M, EcLevel::Q, EcLevel::H};

std::string random_digits(std::mt19937_64& rng, size_t n) {
  std::string s;
  for (size_t i = 0; i < n; ++i) s += static_cast<char>('0' + rng() % 10);
  return s;
}

// --- independent Reed-Solomon parity (bitwise multiply, long division) ---

std::uint8_t naive_mul(std::uint8_t a, std::uint8_t b) {
  unsigned product = 0, aa = a;
  for (unsigned bb = b; bb; bb >>= 1) {
    if (bb & 1) product ^= aa;
    aa <<= 1;
    if (aa & 0x100) aa ^= 0x11D;
  }
  return static_cast<std::uint8_t>(product);
}

std::vector<std::uint8_t> naive_parity(std::vector<std::uint8_t> data, int parity_len) {
  std::vector<std::uint8_t> g = {1};
  std::uint8_t root = 1;
  for (int i = 0; i < parity_len; ++i) {
    std::vector<std::uint8_t> next(g.size() + 1, 0);
    for (size_t j = 0; j < g.size(); ++j) {
      next[j] ^= g[j];
      next[j + 1] ^= naive_mul(g[j], root);
    }
    g = std::move(next);
    root = naive_mul(root, 2);
  }
  const size_t steps = data.size();
  data.resize(data.size() + static_cast<size_t>(parity_len), 0);
  for (size_t i = 0; i < steps; ++i) {
    const std::uint8_t lead = data[i];
    if (lead == 0) continue;
    for (size_t j = 0; j < g.size(); ++j) data[i + j] ^= naive_mul(g[j], lead);
  }
  return {data.end() - parity_len, data.end()};
}

// --- independent penalty scoring for the mask oracle ---

bool oracle_mask_bit(int mask, int r, int c) {
  switch (mask) {
    case 0: return (r + c) % 2 == 0;
    case 1: return r % 2 == 0;
    case 2: return c % 3 == 0;
    case 3: return (r + c) % 3 == 0;
    case 4: return (r / 2 + c / 3) % 2 == 0;
    case 5: return r * c % 2 + r * c % 3 == 0;
    case 6: return (r * c % 2 + r * c % 3) % 2 == 0;
    default: return ((r + c) % 2 + r * c % 3) % 2 == 0;
  }
}

long long oracle_penalty(const QrMatrix& m) {
  const int n = m.size();
  long long total = 0;

  auto line_as_string = [&](bool by_row, int fixed) {
    std::string s(static_cast<size_t>(n), '0');
    for (int i = 0; i < n; ++i)
      s[static_cast<size_t>(i)] = (by_row ? m.module(fixed, i) : m.module(i, fixed)) ? '1' : '0';
    return s;
  };

  for (int pass = 0; pass < 2; ++pass)
    for (int k = 0; k < n; ++k) {
      const std::string line = line_as_string(pass == 0, k);
      // rule 1
      size_t i = 0;
      while (i < line.size()) {
        size_t j = i;
        while (j < line.size() && line[j] == line[i]) ++j;
        const size_t run = j - i;
        if (run >= 5) total += 3 + static_cast<long long>(run - 5);
        i = j;
      }
      // rule 3, with the quiet zone's light modules appended
      const std::string padded = "0000" + line + "0000";
      for (size_t p = 0; (p = padded.find("00001011101", p)) != std::string::npos; ++p)
        total += 40;
      for (size_t p = 0; (p = padded.find("10111010000", p)) != std::string::npos; ++p)
        total += 40;
    }

  // rule 2
  for (int r = 0; r + 1 < n; ++r)
    for (int c = 0; c + 1 < n; ++c) {
      const bool v = m.module(r, c);
      if (m.module(r, c + 1) == v && m.module(r + 1, c) == v && m.module(r + 1, c + 1) == v)
        total += 3;
    }

  // rule 4, floor form: 10 points per full 5% deviation from 50% dark
  long long dark = 0;
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) dark += m.module(r, c) ? 1 : 0;
  const double pct = 100.0 * static_cast<double>(dark) / (static_cast<double>(n) * n);
  total += 10 * static_cast<long long>(std::abs(pct - 50.0) / 5.0);
  return total;
}

}  // namespace

// ---------------------------------------------------------------------------
// Tables and words
// ---------------------------------------------------------------------------

TEST(QrSpecTables, NumericCapacityMatchesPublishedTable) {
  EXPECT_EQ(qrspec::numeric_capacity(1, EcLevel::L), 41);
  EXPECT_EQ(qrspec::numeric_capacity(1, EcLevel::M), 34);
  EXPECT_EQ(qrspec::numeric_capacity(1, EcLevel::Q), 27);
  EXPECT_EQ(qrspec::numeric_capacity(1, EcLevel::H), 17);
  EXPECT_EQ(qrspec::numeric_capacity(10, EcLevel::L), 652);
  EXPECT_EQ(qrspec::numeric_capacity(10, EcLevel::M), 513);
  EXPECT_EQ(qrspec::numeric_capacity(10, EcLevel::Q), 364);
  EXPECT_EQ(qrspec::numeric_capacity(10, EcLevel::H), 288);
}

TEST(QrSpecTables, CodewordCountsAreConsistent) {
  EXPECT_EQ(qrspec::total_codewords(1), 26);
  EXPECT_EQ(qrspec::total_codewords(7), 196);
  EXPECT_EQ(qrspec::total_codewords(10), 346);
  for (int v = 1; v <= 10; ++v)
    for (EcLevel ec : kLevels) {
      EXPECT_GT(qrspec::data_codewords(v, ec), 0);
      EXPECT_LT(qrspec::data_codewords(v, ec), qrspec::total_codewords(v));
      // every block must be longer than its parity
      const int blocks = qrspec::kNumBlocks[static_cast<int>(ec)][v - 1];
      EXPECT_GE(qrspec::data_codewords(v, ec) / blocks, 1);
    }
}

TEST(QrSpecTables, AlignmentPositions) {
  EXPECT_TRUE(qrspec::alignment_positions(1).empty());
  EXPECT_EQ(qrspec::alignment_positions(2), (std::vector<int>{6, 18}));
  EXPECT_EQ(qrspec::alignment_positions(5), (std::vector<int>{6, 30}));
  EXPECT_EQ(qrspec::alignment_positions(7), (std::vector<int>{6, 22, 38}));
  EXPECT_EQ(qrspec::alignment_positions(10), (std::vector<int>{6, 28, 50}));
}

TEST(QrWords, FormatWordsKeepCorrectionDistance) {
  // 32 valid words; BCH(15,5) distance 7 backs the <=3 bit correction.
  std::vector<int> words;
  for (int level = 0; level < 4; ++level)
    for (int mask = 0; mask < 8; ++mask)
      words.push_back(qrspec::format_word(static_cast<EcLevel>(level), mask));
  int min_dist = 15;
  for (size_t i = 0; i < words.size(); ++i)
    for (size_t j = i + 1; j < words.size(); ++j)
      min_dist = std::min(min_dist, __builtin_popcount(
                                        static_cast<unsigned>(words[i] ^ words[j])));
  EXPECT_GE(min_dist, 7);
  for (int w : words) EXPECT_LT(w, 1 << 15);
}

TEST(QrWords, VersionWordsKeepDistance) {
  std::vector<int> words;
  for (int v = 7; v <= 10; ++v) words.push_back(qrspec::version_word(v));
  for (size_t i = 0; i < words.size(); ++i)
    for (size_t j = i + 1; j < words.size(); ++j)
      EXPECT_GE(__builtin_popcount(static_cast<unsigned>(words[i] ^ words[j])), 8);
  for (int w : words) EXPECT_EQ(w >> 12, (w >> 12) & 0x3F);
}

// ---------------------------------------------------------------------------
// Structure of emitted symbols
// ---------------------------------------------------------------------------

namespace {

void expect_finder_at(const QrMatrix& m, int top, int left) {
  for (int dr = 0; dr < 7; ++dr)
    for (int dc = 0; dc < 7; ++dc) {
      const int dist = std::max(std::abs(dr - 3), std::abs(dc - 3));
      EXPECT_EQ(m.module(top + dr, left + dc), dist != 2)
          << "finder at (" << top << "," << left << ") offset " << dr << "," << dc;
    }
}

}  // namespace

TEST(QrStructure, FixedPatternsArePresent) {
  for (int v : {1, 2, 6, 7, 10}) {
    QrMatrix m = encode_numeric("31415926535897932384", EcLevel::Q, v);
    const int n = m.size();
    ASSERT_EQ(n, 4 * v + 17);
    expect_finder_at(m, 0, 0);
    expect_finder_at(m, 0, n - 7);
    expect_finder_at(m, n - 7, 0);
    for (int i = 8; i < n - 8; ++i) {
      EXPECT_EQ(m.module(6, i), i % 2 == 0) << "timing row at col " << i;
      EXPECT_EQ(m.module(i, 6), i % 2 == 0) << "timing col at row " << i;
    }
    EXPECT_TRUE(m.module(4 * v + 9, 8)) << "dark module, version " << v;
  }
}

TEST(QrStructure, FormatAreaEncodesLevelAndMask) {
  QrMatrix m = encode_numeric("10370137", EcLevel::M);
  const int n = m.size();
  int raw = 0;
  auto put = [&raw](int i, bool dark) { raw |= (dark ? 1 : 0) << i; };
  for (int i = 0; i <= 5; ++i) put(i, m.module(i, 8));
  put(6, m.module(7, 8));
  put(7, m.module(8, 8));
  put(8, m.module(8, 7));
  for (int i = 9; i < 15; ++i) put(i, m.module(8, 14 - i));
  EXPECT_EQ(raw, qrspec::format_word(EcLevel::M, m.mask_id));

  int raw2 = 0;
  auto put2 = [&raw2](int i, bool dark) { raw2 |= (dark ? 1 : 0) << i; };
  for (int i = 0; i < 8; ++i) put2(i, m.module(8, n - 1 - i));
  for (int i = 8; i < 15; ++i) put2(i, m.module(n - 15 + i, 8));
  EXPECT_EQ(raw2, raw) << "both format copies must agree";

  const int unmasked = raw ^ 0x5412;
  EXPECT_EQ(unmasked >> 13, 0b00) << "level bits for M";
  EXPECT_EQ((unmasked >> 10) & 7, m.mask_id);
}

TEST(QrStructure, VersionInfoPresentFromVersionSeven) {
  QrMatrix m = encode_numeric("1", EcLevel::H, 7);
  const int n = m.size();
  const int bits = qrspec::version_word(7);
  for (int i = 0; i < 18; ++i) {
    const bool dark = ((bits >> i) & 1) != 0;
    EXPECT_EQ(m.module(i / 3, n - 11 + i % 3), dark);
    EXPECT_EQ(m.module(n - 11 + i % 3, i / 3), dark);
  }
}

// ---------------------------------------------------------------------------
// Worked example: the data codewords of "01234567" at version 1-M
// ---------------------------------------------------------------------------

TEST(QrEncode, WorkedExampleCodewords) {
  QrMatrix m = encode_numeric("01234567", EcLevel::M, 1);

  // Expected stream: mode 0001, count 8, groups 012/345/67, terminator,
  // pads. Parity comes from the independent long-division oracle.
  std::vector<std::uint8_t> expected = {0x10, 0x20, 0x0C, 0x56, 0x61, 0x80,
                                        0xEC, 0x11, 0xEC, 0x11, 0xEC, 0x11,
                                        0xEC, 0x11, 0xEC, 0x11};
  const auto parity = naive_parity(expected, 10);
  expected.insert(expected.end(), parity.begin(), parity.end());

  // Undo the mask with an independently written formula, then read the
  // codeword bits back out of the module matrix.
  QrMatrix clear = m;
  for (int r = 0; r < clear.size(); ++r)
    for (int c = 0; c < clear.size(); ++c)
      if (!clear.is_function(r, c) && oracle_mask_bit(m.mask_id, r, c)) clear.flip(r, c);

  const auto order = detail::data_module_order(clear);
  ASSERT_GE(order.size(), expected.size() * 8);
  std::vector<std::uint8_t> seen(expected.size(), 0);
  for (size_t i = 0; i < expected.size() * 8; ++i)
    seen[i / 8] = static_cast<std::uint8_t>(
        seen[i / 8] << 1 | (clear.module(order[i].first, order[i].second) ? 1 : 0));
  EXPECT_EQ(seen, expected);
}

// ---------------------------------------------------------------------------
// Mask choice against the independent oracle
// ---------------------------------------------------------------------------

TEST(QrMask, ChoiceMatchesExhaustiveRecompute) {
  std::mt19937_64 rng(2718);
  for (int trial = 0; trial < 100; ++trial) {
    const int version = 1 + static_cast<int>(rng() % 10);
    const EcLevel ec = kLevels[rng() % 4];
    const size_t len = 1 + rng() % static_cast<size_t>(qrspec::numeric_capacity(version, ec));
    QrMatrix m = encode_numeric(random_digits(rng, len), ec, version);

    long long best = -1;
    int best_mask = -1;
    for (int mask = 0; mask < 8; ++mask) {
      QrMatrix candidate = m;
      // swap the emitted mask for the candidate one
      for (int r = 0; r < candidate.size(); ++r)
        for (int c = 0; c < candidate.size(); ++c)
          if (!candidate.is_function(r, c) &&
              oracle_mask_bit(m.mask_id, r, c) != oracle_mask_bit(mask, r, c))
            candidate.flip(r, c);
      detail::draw_format(candidate, ec, mask);
      const long long s = oracle_penalty(candidate);
      if (best < 0 || s < best) {
        best = s;
        best_mask = mask;
      }
    }
    ASSERT_EQ(m.mask_id, best_mask) << "trial " << trial << " v" << version;
  }
}

TEST(QrMask, PenaltyAgreesWithOracleOnEmittedSymbols) {
  std::mt19937_64 rng(31337);
  for (int trial = 0; trial < 50; ++trial) {
    const int version = 1 + static_cast<int>(rng() % 10);
    const EcLevel ec = kLevels[rng() % 4];
    const size_t cap = static_cast<size_t>(qrspec::numeric_capacity(version, ec));
    QrMatrix m = encode_numeric(random_digits(rng, 1 + rng() % std::min<size_t>(cap, 30)),
                                ec, version);
    EXPECT_EQ(penalty_score(m), oracle_penalty(m)) << "trial " << trial;
  }
}

// ---------------------------------------------------------------------------
// Round trips and error handling
// ---------------------------------------------------------------------------

TEST(QrRoundTrip, NumericAcrossVersionsAndLevels) {
  std::mt19937_64 rng(99);
  for (int v = 1; v <= 10; ++v)
    for (EcLevel ec : kLevels)
      for (int rep = 0; rep < 5; ++rep) {
        const size_t cap = static_cast<size_t>(qrspec::numeric_capacity(v, ec));
        const size_t len = 1 + rng() % cap;
        const std::string digits = random_digits(rng, len);
        QrMatrix m = encode_numeric(digits, ec, v);
        const QrDecoded d = decode_matrix(m.to_grid());
        ASSERT_EQ(d.text, digits) << "v" << v << " level " << ec_level_name(ec);
        ASSERT_EQ(d.version, v);
        ASSERT_EQ(d.ec_level, ec);
        ASSERT_TRUE(d.numeric);
      }
}

TEST(QrRoundTrip, AutoVersionPicksSmallestFit) {
  const std::string digits48(48, '7');
  QrMatrix m = encode_numeric(digits48, EcLevel::M);
  int smallest = 0;
  for (int v = 1; v <= 10; ++v)
    if (qrspec::numeric_capacity(v, EcLevel::M) >= 48) {
      smallest = v;
      break;
    }
  EXPECT_EQ(m.version, smallest);
  EXPECT_EQ(decode_matrix(m.to_grid()).text, digits48);
}

TEST(QrRoundTrip, ByteMode) {
  const std::string text = "gate stream v1.0 \x01\xFF ok";
  QrMatrix m = encode_bytes(text, EcLevel::Q);
  const QrDecoded d = decode_matrix(m.to_grid());
  EXPECT_EQ(d.text, text);
  EXPECT_FALSE(d.numeric);
}

TEST(QrRoundTrip, QuietZoneZeroToEightAccepted) {
  const std::string digits = "0137";
  QrMatrix m = encode_numeric(digits, EcLevel::L);
  for (int quiet : {0, 1, 4, 8})
    EXPECT_EQ(decode_matrix(m.to_grid(quiet)).text, digits) << "quiet " << quiet;
}

TEST(QrRoundTrip, LeadingZerosSurvive) {
  for (const char* s : {"01", "007", "0000000001", "010101"}) {
    QrMatrix m = encode_numeric(s, EcLevel::M);
    EXPECT_EQ(decode_matrix(m.to_grid()).text, s);
  }
}

TEST(QrErrors, EncodeRejectsBadPayloads) {
  EXPECT_THROW(encode_numeric("", EcLevel::M), std::invalid_argument);
  EXPECT_THROW(encode_numeric("12a4", EcLevel::M), std::invalid_argument);
  EXPECT_THROW(encode_numeric("-12", EcLevel::M), std::invalid_argument);
  EXPECT_THROW(encode_numeric(std::string(653, '1'), EcLevel::L), QrCapacityError);
  EXPECT_THROW(encode_numeric(std::string(35, '1'), EcLevel::M, 1), QrCapacityError);
  EXPECT_THROW(encode_numeric("1", EcLevel::M, 11), std::invalid_argument);
  EXPECT_THROW(encode_numeric("1", EcLevel::M, 0), std::invalid_argument);
}

TEST(QrErrors, SingleFlippedModuleStillDecodes) {
  std::mt19937_64 rng(555);
  for (int trial = 0; trial < 50; ++trial) {
    const int version = 1 + static_cast<int>(rng() % 10);
    const EcLevel ec = kLevels[rng() % 4];
    const size_t cap = static_cast<size_t>(qrspec::numeric_capacity(version, ec));
    const std::string digits = random_digits(rng, 1 + rng() % std::min<size_t>(cap, 20));
    QrMatrix m = encode_numeric(digits, ec, version);
    // flip one non-function module
    const auto order = detail::data_module_order(m);
    const auto& [r, c] = order[rng() % order.size()];
    BitGrid g = m.to_grid();
    g.set(r + 4, c + 4, !g.get(r + 4, c + 4));
    EXPECT_EQ(decode_matrix(g).text, digits) << "trial " << trial;
  }
}

TEST(QrErrors, ComplementedMatrixFailsLoudly) {
  QrMatrix m = encode_numeric("10370137", EcLevel::M);
  BitGrid g = m.to_grid(0);
  for (auto& b : g.bits) b ^= 1;
  EXPECT_THROW(decode_matrix(g), QrDecodeError);
}

TEST(QrErrors, GarbageGridsRejected) {
  BitGrid blank(21, 21);
  EXPECT_THROW(decode_matrix(blank), QrDecodeError);

  BitGrid rect(25, 21);
  rect.set(0, 0, true);
  rect.set(20, 24, true);
  EXPECT_THROW(decode_matrix(rect), QrDecodeError);

  BitGrid wrong(23, 23);
  wrong.set(0, 0, true);
  wrong.set(22, 22, true);
  EXPECT_THROW(decode_matrix(wrong), QrDecodeError);

  // random noise is overwhelmingly likely to fail format or RS checks
  std::mt19937_64 rng(7);
  BitGrid noise(21, 21);
  for (auto& b : noise.bits) b = rng() & 1;
  noise.set(0, 0, true);
  noise.set(20, 20, true);
  EXPECT_THROW(decode_matrix(noise), QrDecodeError);
}

// ---------------------------------------------------------------------------
// PBM and PNG
// ---------------------------------------------------------------------------

TEST(Pbm, WriteReadRoundTrip) {
  QrMatrix m = encode_numeric("10370137", EcLevel::M);
  const std::string pbm = write_pbm(m.to_grid());
  const BitGrid back = read_pbm(pbm);
  EXPECT_EQ(back, m.to_grid());
  EXPECT_EQ(decode_matrix(back).text, "10370137");

  const std::string header = "P1\n" + std::to_string(m.size() + 8) + " " +
                             std::to_string(m.size() + 8) + "\n";
  EXPECT_EQ(pbm.substr(0, header.size()), header);
}

TEST(Pbm, ReaderToleratesCommentsAndSpacing) {
  const BitGrid g = read_pbm("P1 # tiny\n# comment line\n 2 3\n1 0\n0 1\n1 1\n");
  ASSERT_EQ(g.width, 2);
  ASSERT_EQ(g.height, 3);
  EXPECT_TRUE(g.get(0, 0));
  EXPECT_FALSE(g.get(0, 1));
  EXPECT_TRUE(g.get(2, 1));
}

TEST(Pbm, ReaderRejectsMalformedInput) {
  EXPECT_THROW(read_pbm("P2\n1 1\n0\n"), PbmError);
  EXPECT_THROW(read_pbm("P1\n2 2\n1 0 1\n"), PbmError);   // truncated
  EXPECT_THROW(read_pbm("P1\n2 2\n1 0 1 7\n"), PbmError); // bad pixel
  EXPECT_THROW(read_pbm(""), PbmError);
}

TEST(Png, EmitsValidHeaderAndDimensions) {
  QrMatrix m = encode_numeric("0137", EcLevel::L);
  const std::string png = write_png(m.to_grid(), 4);
  ASSERT_GE(png.size(), 33u);
  EXPECT_EQ(png.substr(1, 3), "PNG");
  const int expected = (m.size() + 8) * 4;
  auto be32 = [&](size_t at) {
    return static_cast<int>((static_cast<unsigned char>(png[at]) << 24) |
                            (static_cast<unsigned char>(png[at + 1]) << 16) |
                            (static_cast<unsigned char>(png[at + 2]) << 8) |
                            static_cast<unsigned char>(png[at + 3]));
  };
  EXPECT_EQ(be32(16), expected);  // IHDR width
  EXPECT_EQ(be32(20), expected);  // IHDR height
  EXPECT_EQ(png.substr(png.size() - 8, 4), std::string("IEND"));
}
