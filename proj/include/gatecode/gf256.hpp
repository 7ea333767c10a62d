#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

// GF(256) arithmetic and Reed-Solomon coding, reduction polynomial
// x^8+x^4+x^3+x^2+1 (0x11D), generator element 2. Generator polynomials
// take roots 2^0 .. 2^(p-1), so syndrome indices start at zero.

namespace gatecode {

class RsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace gf {

struct Tables {
  std::array<std::uint8_t, 512> exp{};
  std::array<std::uint8_t, 256> log{};
};

constexpr Tables make_tables() {
  Tables t{};
  int x = 1;
  for (int i = 0; i < 255; ++i) {
    t.exp[static_cast<size_t>(i)] = static_cast<std::uint8_t>(x);
    t.log[static_cast<size_t>(x)] = static_cast<std::uint8_t>(i);
    x <<= 1;
    if (x & 0x100) x ^= 0x11D;
  }
  // duplicated tail lets mul() skip the mod-255 reduction
  for (int i = 255; i < 512; ++i)
    t.exp[static_cast<size_t>(i)] = t.exp[static_cast<size_t>(i - 255)];
  return t;
}

inline constexpr Tables kTables = make_tables();

constexpr std::uint8_t mul(std::uint8_t a, std::uint8_t b) {
  if (a == 0 || b == 0) return 0;
  return kTables.exp[static_cast<size_t>(kTables.log[a]) + kTables.log[b]];
}

/// 2^e for e >= 0.
constexpr std::uint8_t pow2(int e) {
  return kTables.exp[static_cast<size_t>(e % 255)];
}

constexpr std::uint8_t inv(std::uint8_t a) {
  if (a == 0) throw std::domain_error("inverse of zero");
  return kTables.exp[static_cast<size_t>(255 - kTables.log[a])];
}

constexpr std::uint8_t div(std::uint8_t a, std::uint8_t b) { return mul(a, inv(b)); }

}  // namespace gf

/// Generator polynomial with roots 2^0 .. 2^(p-1), coefficients in
/// descending powers; result[0] = 1 is the x^p coefficient.
inline std::vector<std::uint8_t> rs_generator_poly(int parity_len) {
  if (parity_len < 1) throw std::invalid_argument("parity_len must be positive");
  std::vector<std::uint8_t> g = {1};
  for (int i = 0; i < parity_len; ++i) {
    std::vector<std::uint8_t> next(g.size() + 1, 0);
    const std::uint8_t root = gf::pow2(i);
    for (size_t j = 0; j < g.size(); ++j) {
      next[j] ^= g[j];
      next[j + 1] ^= gf::mul(g[j], root);
    }
    g = std::move(next);
  }
  return g;
}

/// Parity codewords: remainder of data(x) * x^p mod the generator polynomial.
inline std::vector<std::uint8_t> rs_parity(std::span<const std::uint8_t> data, int parity_len) {
  const auto g = rs_generator_poly(parity_len);
  std::vector<std::uint8_t> rem(static_cast<size_t>(parity_len), 0);
  for (std::uint8_t d : data) {
    const std::uint8_t factor = static_cast<std::uint8_t>(d ^ rem[0]);
    rem.erase(rem.begin());
    rem.push_back(0);
    for (size_t i = 0; i < rem.size(); ++i) rem[i] ^= gf::mul(g[i + 1], factor);
  }
  return rem;
}

namespace detail {

// Syndrome S_i = r(2^i) where block[0] carries the highest power of x.
inline std::vector<std::uint8_t> rs_syndromes(std::span<const std::uint8_t> block,
                                              int parity_len) {
  std::vector<std::uint8_t> s(static_cast<size_t>(parity_len), 0);
  for (int i = 0; i < parity_len; ++i) {
    const std::uint8_t x = gf::pow2(i);
    std::uint8_t acc = 0;
    for (std::uint8_t c : block) acc = static_cast<std::uint8_t>(gf::mul(acc, x) ^ c);
    s[static_cast<size_t>(i)] = acc;
  }
  return s;
}

}  // namespace detail

/// Corrects up to parity_len/2 byte errors in place (block = data then
/// parity). Returns the number of bytes changed. Throws RsError
/// ("uncorrectable") when the error pattern exceeds capacity; on return
/// the block's syndromes have been re-verified to be zero.
inline int rs_correct(std::vector<std::uint8_t>& block, int parity_len) {
  if (parity_len < 1 || block.size() <= static_cast<size_t>(parity_len))
    throw std::invalid_argument("block must be longer than its parity");
  const int n = static_cast<int>(block.size());
  auto syn = detail::rs_syndromes(block, parity_len);
  bool clean = true;
  for (std::uint8_t s : syn)
    if (s != 0) clean = false;
  if (clean) return 0;

  // Berlekamp-Massey for the error locator Lambda(x), ascending coefficients.
  std::vector<std::uint8_t> lambda = {1}, prev = {1};
  int L = 0, m = 1;
  std::uint8_t b = 1;
  for (int k = 0; k < parity_len; ++k) {
    std::uint8_t delta = syn[static_cast<size_t>(k)];
    for (int i = 1; i <= L && i < static_cast<int>(lambda.size()); ++i)
      delta ^= gf::mul(lambda[static_cast<size_t>(i)], syn[static_cast<size_t>(k - i)]);
    if (delta == 0) {
      ++m;
      continue;
    }
    const std::uint8_t coef = gf::div(delta, b);
    if (2 * L <= k) {
      auto saved = lambda;
      if (lambda.size() < prev.size() + static_cast<size_t>(m))
        lambda.resize(prev.size() + static_cast<size_t>(m), 0);
      for (size_t i = 0; i < prev.size(); ++i)
        lambda[i + static_cast<size_t>(m)] ^= gf::mul(coef, prev[i]);
      L = k + 1 - L;
      prev = std::move(saved);
      b = delta;
      m = 1;
    } else {
      if (lambda.size() < prev.size() + static_cast<size_t>(m))
        lambda.resize(prev.size() + static_cast<size_t>(m), 0);
      for (size_t i = 0; i < prev.size(); ++i)
        lambda[i + static_cast<size_t>(m)] ^= gf::mul(coef, prev[i]);
      ++m;
    }
  }
  while (!lambda.empty() && lambda.back() == 0) lambda.pop_back();
  const int deg = static_cast<int>(lambda.size()) - 1;
  if (deg <= 0 || deg != L || 2 * L > parity_len) throw RsError("uncorrectable");

  // Chien search: degree j holds an error iff Lambda(2^-j) = 0.
  std::vector<int> error_degrees;
  for (int j = 0; j < n; ++j) {
    const std::uint8_t x = gf::kTables.exp[static_cast<size_t>((255 - j % 255) % 255)];
    std::uint8_t acc = 0;
    for (size_t i = lambda.size(); i-- > 0;)
      acc = static_cast<std::uint8_t>(gf::mul(acc, x) ^ lambda[i]);
    if (acc == 0) error_degrees.push_back(j);
  }
  if (static_cast<int>(error_degrees.size()) != deg) throw RsError("uncorrectable");

  // Forney with syndrome exponents starting at zero:
  //   Omega(x) = S(x) Lambda(x) mod x^p,  e = X * Omega(1/X) / Lambda'(1/X).
  std::vector<std::uint8_t> omega(static_cast<size_t>(parity_len), 0);
  for (size_t i = 0; i < omega.size(); ++i)
    for (size_t j = 0; j < lambda.size() && j <= i; ++j)
      omega[i] ^= gf::mul(syn[i - j], lambda[j]);
  for (int j : error_degrees) {
    const std::uint8_t x_inv = gf::kTables.exp[static_cast<size_t>((255 - j % 255) % 255)];
    std::uint8_t num = 0;
    for (size_t i = omega.size(); i-- > 0;)
      num = static_cast<std::uint8_t>(gf::mul(num, x_inv) ^ omega[i]);
    std::uint8_t den = 0;  // Lambda'(x) keeps only odd-degree terms
    for (size_t i = 1; i < lambda.size(); i += 2) {
      std::uint8_t term = lambda[i];
      for (size_t q = 0; q + 1 < i; ++q) term = gf::mul(term, x_inv);
      den ^= term;
    }
    if (den == 0) throw RsError("uncorrectable");
    const std::uint8_t magnitude = gf::mul(gf::pow2(j), gf::div(num, den));
    block[static_cast<size_t>(n - 1 - j)] ^= magnitude;
  }

  // Re-verify: a correction that leaves nonzero syndromes was no correction.
  for (std::uint8_t s : detail::rs_syndromes(block, parity_len))
    if (s != 0) throw RsError("uncorrectable");
  return deg;
}

}  // namespace gatecode
