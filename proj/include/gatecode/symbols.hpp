#pragma once

#include <array>
#include <cctype>
#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

// Symbol alphabets of the digit-pair coding scheme.
//
// The three alphabets are disjoint by construction: gate codes use only
// digits {2,4,6}, proteinoid codes only {3,5,7}, light codes only {0,1}.
// That disjointness is what lets the serializer emit bare concatenations
// and still parse them without delimiters.

namespace gatecode {

// ---------------------------------------------------------------------------
// Boolean gates
// ---------------------------------------------------------------------------

enum class GateKind : std::uint8_t {
  And,
  Or,
  Not,
  Xor,
  Nand,
  Xnor,
  Nor,
  NoGate,
};

inline constexpr std::array<GateKind, 8> kAllGates = {
    GateKind::And,  GateKind::Or,   GateKind::Not, GateKind::Xor,
    GateKind::Nand, GateKind::Xnor, GateKind::Nor, GateKind::NoGate,
};

constexpr std::string_view gate_code(GateKind g) {
  switch (g) {
    case GateKind::And:    return "42";
    case GateKind::Or:     return "44";
    case GateKind::Not:    return "22";
    case GateKind::Xor:    return "24";
    case GateKind::Nand:   return "64";
    case GateKind::Xnor:   return "66";
    case GateKind::Nor:    return "62";
    case GateKind::NoGate: return "26";
  }
  throw std::invalid_argument("unknown gate kind");
}

constexpr std::string_view gate_name(GateKind g) {
  switch (g) {
    case GateKind::And:    return "AND";
    case GateKind::Or:     return "OR";
    case GateKind::Not:    return "NOT";
    case GateKind::Xor:    return "XOR";
    case GateKind::Nand:   return "NAND";
    case GateKind::Xnor:   return "XNOR";
    case GateKind::Nor:    return "NOR";
    case GateKind::NoGate: return "NOGATE";
  }
  throw std::invalid_argument("unknown gate kind");
}

constexpr std::optional<GateKind> gate_from_code(std::string_view code) {
  for (GateKind g : kAllGates)
    if (gate_code(g) == code) return g;
  return std::nullopt;
}

/// Case-insensitive gate name ("and", "NoGate", "no_gate") or code ("42").
inline std::optional<GateKind> gate_from_text(std::string_view text) {
  if (auto g = gate_from_code(text)) return g;
  std::string up;
  for (char c : text)
    if (c != '_') up.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  for (GateKind g : kAllGates)
    if (gate_name(g) == up) return g;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Truth rows
// ---------------------------------------------------------------------------

// Output column of a two-input gate over the fixed input order
// (0,0), (0,1), (1,0), (1,1). Bit i holds the output for input pair
// i = 2*A + B; the string form lists the four outputs in that order,
// so "0001" is AND and "0111" is OR.
struct TruthRow {
  std::uint8_t bits = 0;

  constexpr bool output(int input_index) const { return (bits >> input_index) & 1; }

  std::string to_string() const {
    std::string s(4, '0');
    for (int i = 0; i < 4; ++i)
      if (output(i)) s[static_cast<size_t>(i)] = '1';
    return s;
  }

  static TruthRow from_string(std::string_view s) {
    if (s.size() != 4) throw std::invalid_argument("truth row must have 4 bits");
    TruthRow row;
    for (int i = 0; i < 4; ++i) {
      if (s[static_cast<size_t>(i)] == '1')
        row.bits |= static_cast<std::uint8_t>(1u << i);
      else if (s[static_cast<size_t>(i)] != '0')
        throw std::invalid_argument("truth row must be over {0,1}");
    }
    return row;
  }

  friend constexpr bool operator==(TruthRow, TruthRow) = default;
};

// Canonical output column used when emitting a gate as a stimulus response.
// NOT is one-input; its canonical row negates input A.
constexpr TruthRow canonical_truth_row(GateKind g) {
  switch (g) {
    case GateKind::And:    return TruthRow{0b1000};
    case GateKind::Or:     return TruthRow{0b1110};
    case GateKind::Not:    return TruthRow{0b0011};
    case GateKind::Xor:    return TruthRow{0b0110};
    case GateKind::Nand:   return TruthRow{0b0111};
    case GateKind::Xnor:   return TruthRow{0b1001};
    case GateKind::Nor:    return TruthRow{0b0001};
    case GateKind::NoGate: return TruthRow{0b0000};
  }
  throw std::invalid_argument("unknown gate kind");
}

// Total on all 16 rows. Both single-input rows (negated A, negated B)
// classify as NOT; every row that is not a named gate is NoGate.
constexpr GateKind gate_from_truth_row(TruthRow row) {
  switch (row.bits) {
    case 0b1000: return GateKind::And;
    case 0b1110: return GateKind::Or;
    case 0b0011: return GateKind::Not;  // not A
    case 0b0101: return GateKind::Not;  // not B
    case 0b0110: return GateKind::Xor;
    case 0b0111: return GateKind::Nand;
    case 0b1001: return GateKind::Xnor;
    case 0b0001: return GateKind::Nor;
    default:     return GateKind::NoGate;
  }
}

// ---------------------------------------------------------------------------
// Proteinoid kinds
// ---------------------------------------------------------------------------

// Two-digit code over {3,5,7}. Five compositions carry fixed codes; any
// other pair over the alphabet is preserved verbatim so that strings seen
// in the wild survive a parse/serialize round trip.
class ProteinoidKind {
 public:
  static constexpr ProteinoidKind glu_phe_his() { return {'3', '3'}; }  // L-Glu:L-Phe:L-His
  static constexpr ProteinoidKind glu_phe()     { return {'3', '5'}; }  // L-Glu:L-Phe
  static constexpr ProteinoidKind phe_lys()     { return {'3', '7'}; }  // L-Phe:L-Lys
  static constexpr ProteinoidKind phe()         { return {'5', '5'}; }  // L-Phe
  static constexpr ProteinoidKind asp()         { return {'5', '7'}; }  // L-Asp

  static constexpr bool valid_code(std::string_view code) {
    auto ok = [](char c) { return c == '3' || c == '5' || c == '7'; };
    return code.size() == 2 && ok(code[0]) && ok(code[1]);
  }

  static constexpr ProteinoidKind from_code(std::string_view code) {
    if (!valid_code(code))
      throw std::invalid_argument("proteinoid code must be two digits over {3,5,7}");
    return {code[0], code[1]};
  }

  std::string code() const { return {a_, b_}; }

  constexpr bool named() const {
    return (*this == glu_phe_his()) || (*this == glu_phe()) || (*this == phe_lys()) ||
           (*this == phe()) || (*this == asp());
  }

  std::string name() const {
    if (*this == glu_phe_his()) return "L-Glu:L-Phe:L-His";
    if (*this == glu_phe()) return "L-Glu:L-Phe";
    if (*this == phe_lys()) return "L-Phe:L-Lys";
    if (*this == phe()) return "L-Phe";
    if (*this == asp()) return "L-Asp";
    return "unknown(" + code() + ")";
  }

  friend constexpr bool operator==(ProteinoidKind, ProteinoidKind) = default;
  friend constexpr auto operator<=>(ProteinoidKind, ProteinoidKind) = default;

 private:
  constexpr ProteinoidKind(char a, char b) : a_(a), b_(b) {}
  char a_, b_;
};

inline constexpr std::array<ProteinoidKind, 5> kNamedProteinoids = {
    ProteinoidKind::glu_phe_his(), ProteinoidKind::glu_phe(), ProteinoidKind::phe_lys(),
    ProteinoidKind::phe(), ProteinoidKind::asp(),
};

// ---------------------------------------------------------------------------
// Light conditions
// ---------------------------------------------------------------------------

// Illumination pattern driving the two Boolean inputs. The first named
// light acts as input A, the second as input B (on = 1).
enum class LightCondition : std::uint8_t {
  BlackAndBlackWhite,  // "01"
  WhiteAndBlack,       // "10"
  BlackAndWhite,       // "11"
};

inline constexpr std::array<LightCondition, 3> kAllLights = {
    LightCondition::BlackAndBlackWhite,
    LightCondition::WhiteAndBlack,
    LightCondition::BlackAndWhite,
};

constexpr std::string_view light_code(LightCondition l) {
  switch (l) {
    case LightCondition::BlackAndBlackWhite: return "01";
    case LightCondition::WhiteAndBlack:      return "10";
    case LightCondition::BlackAndWhite:      return "11";
  }
  throw std::invalid_argument("unknown light condition");
}

constexpr std::string_view light_name(LightCondition l) {
  switch (l) {
    case LightCondition::BlackAndBlackWhite: return "black and black-white";
    case LightCondition::WhiteAndBlack:      return "white and black";
    case LightCondition::BlackAndWhite:      return "black and white";
  }
  throw std::invalid_argument("unknown light condition");
}

constexpr std::optional<LightCondition> light_from_code(std::string_view code) {
  for (LightCondition l : kAllLights)
    if (light_code(l) == code) return l;
  return std::nullopt;
}

}  // namespace gatecode
