#pragma once

#include <algorithm>
#include <cctype>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "gatecode/symbols.hpp"

// Serialization grammar for characterized gate data.
//
// A message is a digit string of consecutive two-digit units. The unit
// alphabets are disjoint (see symbols.hpp), so the type of every unit is
// determined by its characters alone. Three schemas exist:
//
//   by_light       blocks of  <proteinoid> <gate>+   labelled by a light
//   by_proteinoid  blocks of  <light> <gate>+        labelled by a proteinoid
//   by_gate        pairs of   <light> <proteinoid>   labelled by a gate
//
// The label (subject) is deliberately NOT part of the digit payload; it
// travels out of band (file name, CLI flag, figure caption). Messages
// therefore carry it as an optional annotation, and serialization ignores
// it entirely.

namespace gatecode {

class GrammarError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Schema : std::uint8_t { ByLight, ByProteinoid, ByGate };

constexpr std::string_view schema_name(Schema s) {
  switch (s) {
    case Schema::ByLight:      return "by_light";
    case Schema::ByProteinoid: return "by_proteinoid";
    case Schema::ByGate:       return "by_gate";
  }
  throw std::invalid_argument("unknown schema");
}

inline std::optional<Schema> schema_from_name(std::string_view name) {
  if (name == "by_light") return Schema::ByLight;
  if (name == "by_proteinoid") return Schema::ByProteinoid;
  if (name == "by_gate") return Schema::ByGate;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Message
// ---------------------------------------------------------------------------

struct ProteinoidGatesBlock {
  ProteinoidKind proteinoid;
  std::vector<GateKind> gates;  // non-empty
  friend bool operator==(const ProteinoidGatesBlock&, const ProteinoidGatesBlock&) = default;
};

struct LightGatesBlock {
  LightCondition light;
  std::vector<GateKind> gates;  // non-empty
  friend bool operator==(const LightGatesBlock&, const LightGatesBlock&) = default;
};

struct LightProteinoidBlock {
  LightCondition light;
  ProteinoidKind proteinoid;
  friend bool operator==(const LightProteinoidBlock&, const LightProteinoidBlock&) = default;
};

struct ByLightMessage {
  std::optional<LightCondition> light;  // out-of-band label
  std::vector<ProteinoidGatesBlock> blocks;
  friend bool operator==(const ByLightMessage&, const ByLightMessage&) = default;
};

struct ByProteinoidMessage {
  std::optional<ProteinoidKind> proteinoid;  // out-of-band label
  std::vector<LightGatesBlock> blocks;
  friend bool operator==(const ByProteinoidMessage&, const ByProteinoidMessage&) = default;
};

struct ByGateMessage {
  std::optional<GateKind> gate;  // out-of-band label
  std::vector<LightProteinoidBlock> blocks;
  friend bool operator==(const ByGateMessage&, const ByGateMessage&) = default;
};

using Message = std::variant<ByLightMessage, ByProteinoidMessage, ByGateMessage>;

inline Schema schema_of(const Message& m) {
  if (std::holds_alternative<ByLightMessage>(m)) return Schema::ByLight;
  if (std::holds_alternative<ByProteinoidMessage>(m)) return Schema::ByProteinoid;
  return Schema::ByGate;
}

/// Subject code of the out-of-band label, if the message carries one.
inline std::optional<std::string> subject_code(const Message& m) {
  if (const auto* bl = std::get_if<ByLightMessage>(&m)) {
    if (bl->light) return std::string(light_code(*bl->light));
    return std::nullopt;
  }
  if (const auto* bp = std::get_if<ByProteinoidMessage>(&m)) {
    if (bp->proteinoid) return bp->proteinoid->code();
    return std::nullopt;
  }
  const auto& bg = std::get<ByGateMessage>(m);
  if (bg.gate) return std::string(gate_code(*bg.gate));
  return std::nullopt;
}

struct DigitString {
  std::string digits;
  Schema schema;
  friend bool operator==(const DigitString&, const DigitString&) = default;
};

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

inline DigitString serialize(const Message& message) {
  std::string out;
  auto append_gates = [&out](const std::vector<GateKind>& gates) {
    if (gates.empty()) throw GrammarError("empty gates in block");
    for (GateKind g : gates) out += gate_code(g);
  };
  if (const auto* bl = std::get_if<ByLightMessage>(&message)) {
    if (bl->blocks.empty()) throw GrammarError("empty message");
    for (const auto& b : bl->blocks) {
      out += b.proteinoid.code();
      append_gates(b.gates);
    }
    return {std::move(out), Schema::ByLight};
  }
  if (const auto* bp = std::get_if<ByProteinoidMessage>(&message)) {
    if (bp->blocks.empty()) throw GrammarError("empty message");
    for (const auto& b : bp->blocks) {
      out += light_code(b.light);
      append_gates(b.gates);
    }
    return {std::move(out), Schema::ByProteinoid};
  }
  const auto& bg = std::get<ByGateMessage>(message);
  if (bg.blocks.empty()) throw GrammarError("empty message");
  for (const auto& b : bg.blocks) {
    out += light_code(b.light);
    out += b.proteinoid.code();
  }
  return {std::move(out), Schema::ByGate};
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

namespace detail {

enum class UnitType { Light, Proteinoid, Gate };

struct Unit {
  UnitType type;
  // exactly one is meaningful, matching `type`
  LightCondition light{};
  ProteinoidKind proteinoid = ProteinoidKind::glu_phe_his();
  GateKind gate{};
};

inline std::string strip_whitespace(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
  return out;
}

// Classifies one two-character unit, or throws on a unit that belongs to
// no alphabet ("23", "00", the unassigned gate pair "46", ...).
inline Unit classify_unit(std::string_view s, size_t unit_index) {
  auto fail = [&] {
    throw GrammarError("illegal unit '" + std::string(s) + "' at position " +
                       std::to_string(unit_index));
  };
  auto in = [](char c, std::string_view set) { return set.find(c) != std::string_view::npos; };
  Unit u;
  if (in(s[0], "01") && in(s[1], "01")) {
    auto l = light_from_code(s);
    if (!l) fail();  // "00"
    u.type = UnitType::Light;
    u.light = *l;
    return u;
  }
  if (in(s[0], "357") && in(s[1], "357")) {
    u.type = UnitType::Proteinoid;
    u.proteinoid = ProteinoidKind::from_code(s);
    return u;
  }
  if (in(s[0], "246") && in(s[1], "246")) {
    auto g = gate_from_code(s);
    if (!g) fail();  // "46" is not an assigned gate code
    u.type = UnitType::Gate;
    u.gate = *g;
    return u;
  }
  fail();
  return u;  // unreachable
}

inline std::vector<Unit> units_of(std::string_view digits) {
  if (digits.empty()) throw GrammarError("empty message");
  if (digits.size() % 2 != 0) throw GrammarError("odd digit count");
  for (size_t i = 0; i < digits.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(digits[i])))
      throw GrammarError("non-digit character at position " + std::to_string(i));
  std::vector<Unit> units;
  units.reserve(digits.size() / 2);
  for (size_t i = 0; i < digits.size(); i += 2)
    units.push_back(classify_unit(digits.substr(i, 2), i / 2));
  return units;
}

}  // namespace detail

/// Determines the schema from the first one or two units of a digit string.
inline Schema infer_schema(std::string_view text) {
  const std::string digits = detail::strip_whitespace(text);
  const auto units = detail::units_of(digits);
  using detail::UnitType;
  if (units[0].type == UnitType::Proteinoid) return Schema::ByLight;
  if (units[0].type == UnitType::Gate)
    throw GrammarError("cannot infer schema: string starts with a gate code");
  // first unit is a light code
  if (units.size() < 2) throw GrammarError("cannot infer schema: lone light unit");
  if (units[1].type == UnitType::Gate) return Schema::ByProteinoid;
  if (units[1].type == UnitType::Proteinoid) return Schema::ByGate;
  throw GrammarError("cannot infer schema: two consecutive light units");
}

inline Message parse(std::string_view text, std::optional<Schema> schema = std::nullopt) {
  const std::string digits = detail::strip_whitespace(text);
  const auto units = detail::units_of(digits);
  const Schema s = schema ? *schema : infer_schema(digits);
  using detail::UnitType;

  auto expect_no_light = [&](const detail::Unit& u, size_t i) {
    if (u.type == UnitType::Light)
      throw GrammarError("schema violation: light unit at position " + std::to_string(i) +
                         " inside a " + std::string(schema_name(s)) + " body");
  };

  switch (s) {
    case Schema::ByLight: {
      ByLightMessage msg;
      for (size_t i = 0; i < units.size(); ++i) {
        const auto& u = units[i];
        expect_no_light(u, i);
        if (u.type == UnitType::Proteinoid) {
          msg.blocks.push_back({u.proteinoid, {}});
        } else {
          if (msg.blocks.empty()) throw GrammarError("dangling gates");
          msg.blocks.back().gates.push_back(u.gate);
        }
      }
      for (const auto& b : msg.blocks)
        if (b.gates.empty()) throw GrammarError("empty gates in block");
      return msg;
    }
    case Schema::ByProteinoid: {
      ByProteinoidMessage msg;
      for (size_t i = 0; i < units.size(); ++i) {
        const auto& u = units[i];
        if (u.type == UnitType::Proteinoid)
          throw GrammarError("schema violation: proteinoid unit at position " +
                             std::to_string(i) + " inside a by_proteinoid body");
        if (u.type == UnitType::Light) {
          msg.blocks.push_back({u.light, {}});
        } else {
          if (msg.blocks.empty()) throw GrammarError("dangling gates");
          msg.blocks.back().gates.push_back(u.gate);
        }
      }
      for (const auto& b : msg.blocks)
        if (b.gates.empty()) throw GrammarError("empty gates in block");
      return msg;
    }
    case Schema::ByGate: {
      ByGateMessage msg;
      if (units.size() % 2 != 0)
        throw GrammarError("schema violation: by_gate body must be (light, proteinoid) pairs");
      for (size_t i = 0; i < units.size(); i += 2) {
        if (units[i].type != UnitType::Light || units[i + 1].type != UnitType::Proteinoid)
          throw GrammarError("schema violation: expected (light, proteinoid) pair at position " +
                             std::to_string(i));
        msg.blocks.push_back({units[i].light, units[i + 1].proteinoid});
      }
      return msg;
    }
  }
  throw std::logic_error("unreachable");
}

// ---------------------------------------------------------------------------
// Message assembly from analysis results
// ---------------------------------------------------------------------------

// One analyzed recording: the stimulus identity plus the mined gate sequence.
struct AnalysisEntry {
  LightCondition light;
  ProteinoidKind proteinoid;
  std::vector<GateKind> gates;
};

namespace detail {

// Canonical block orders: proteinoids ascend by code; lights run 10, 11, 01.
inline int light_rank(LightCondition l) {
  switch (l) {
    case LightCondition::WhiteAndBlack:      return 0;
    case LightCondition::BlackAndWhite:      return 1;
    case LightCondition::BlackAndBlackWhite: return 2;
  }
  return 3;
}

inline void check_unique_keys(const std::vector<AnalysisEntry>& entries) {
  for (size_t i = 0; i < entries.size(); ++i)
    for (size_t j = i + 1; j < entries.size(); ++j)
      if (entries[i].light == entries[j].light &&
          entries[i].proteinoid == entries[j].proteinoid)
        throw GrammarError("duplicate analysis key (" +
                           std::string(light_code(entries[i].light)) + ", " +
                           entries[i].proteinoid.code() + ")");
}

}  // namespace detail

inline Message by_light_message(std::vector<AnalysisEntry> entries, LightCondition subject) {
  detail::check_unique_keys(entries);
  ByLightMessage msg;
  msg.light = subject;
  std::erase_if(entries, [&](const AnalysisEntry& e) { return e.light != subject; });
  if (entries.empty()) throw GrammarError("no data for subject");
  std::sort(entries.begin(), entries.end(), [](const AnalysisEntry& a, const AnalysisEntry& b) {
    return a.proteinoid < b.proteinoid;
  });
  for (auto& e : entries) msg.blocks.push_back({e.proteinoid, std::move(e.gates)});
  return msg;
}

inline Message by_proteinoid_message(std::vector<AnalysisEntry> entries, ProteinoidKind subject) {
  detail::check_unique_keys(entries);
  ByProteinoidMessage msg;
  msg.proteinoid = subject;
  std::erase_if(entries, [&](const AnalysisEntry& e) { return e.proteinoid != subject; });
  if (entries.empty()) throw GrammarError("no data for subject");
  std::sort(entries.begin(), entries.end(), [](const AnalysisEntry& a, const AnalysisEntry& b) {
    return detail::light_rank(a.light) < detail::light_rank(b.light);
  });
  for (auto& e : entries) msg.blocks.push_back({e.light, std::move(e.gates)});
  return msg;
}

inline Message by_gate_message(std::vector<AnalysisEntry> entries, GateKind subject) {
  detail::check_unique_keys(entries);
  ByGateMessage msg;
  msg.gate = subject;
  std::erase_if(entries, [&](const AnalysisEntry& e) {
    return std::find(e.gates.begin(), e.gates.end(), subject) == e.gates.end();
  });
  if (entries.empty()) throw GrammarError("no data for subject");
  std::sort(entries.begin(), entries.end(), [](const AnalysisEntry& a, const AnalysisEntry& b) {
    if (a.light != b.light) return detail::light_rank(a.light) < detail::light_rank(b.light);
    return a.proteinoid < b.proteinoid;
  });
  for (const auto& e : entries) msg.blocks.push_back({e.light, e.proteinoid});
  return msg;
}

/// Schema-dispatched assembly; `subject_code` is the two-digit code of the
/// subject appropriate to the schema (a light for by_light, and so on).
inline Message message_from_analysis(std::vector<AnalysisEntry> entries, Schema schema,
                                     std::string_view subject) {
  switch (schema) {
    case Schema::ByLight: {
      auto l = light_from_code(subject);
      if (!l) throw GrammarError("by_light subject must be a light code");
      return by_light_message(std::move(entries), *l);
    }
    case Schema::ByProteinoid:
      return by_proteinoid_message(std::move(entries), ProteinoidKind::from_code(subject));
    case Schema::ByGate: {
      auto g = gate_from_code(subject);
      if (!g) throw GrammarError("by_gate subject must be a gate code");
      return by_gate_message(std::move(entries), *g);
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace gatecode
