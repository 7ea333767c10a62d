#pragma once

#include <string>
#include <vector>

#include "gatecode/grammar.hpp"
#include "gatecode/spike_gates.hpp"
#include "json.hpp"

namespace gatecode {

using Json = nlohmann::ordered_json;

namespace detail {

inline Json gates_to_json(const std::vector<GateKind>& gates) {
  Json arr = Json::array();
  for (GateKind g : gates) arr.push_back(std::string(gate_code(g)));
  return arr;
}

inline std::vector<GateKind> gates_from_json(const Json& arr) {
  if (!arr.is_array() || arr.empty())
    throw std::invalid_argument("message json: 'gates' must be a non-empty array");
  std::vector<GateKind> gates;
  for (const auto& item : arr) {
    if (!item.is_string())
      throw std::invalid_argument("message json: gate entries must be strings");
    const auto g = gate_from_code(item.get<std::string>());
    if (!g) throw GrammarError("unknown gate code '" + item.get<std::string>() + "'");
    gates.push_back(*g);
  }
  return gates;
}

inline LightCondition light_from_json(const Json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_string())
    throw std::invalid_argument(std::string("message json: block needs a '") + key +
                                "' string");
  const auto light = light_from_code(j[key].get<std::string>());
  if (!light) throw GrammarError("unknown light code '" + j[key].get<std::string>() + "'");
  return *light;
}

inline ProteinoidKind proteinoid_from_json(const Json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_string())
    throw std::invalid_argument(std::string("message json: block needs a '") + key +
                                "' string");
  const auto code = j[key].get<std::string>();
  if (!ProteinoidKind::valid_code(code))
    throw GrammarError("unknown proteinoid code '" + code + "'");
  return ProteinoidKind::from_code(code);
}

}  // namespace detail

/// {"schema": ..., "subject": code-or-null, "blocks": [...]} with every
/// symbol spelled as its two-digit code.
inline Json message_to_json(const Message& m) {
  Json j;
  j["schema"] = std::string(schema_name(schema_of(m)));
  const auto subject = subject_code(m);
  j["subject"] = subject ? Json(*subject) : Json(nullptr);
  Json blocks = Json::array();
  if (const auto* bl = std::get_if<ByLightMessage>(&m)) {
    for (const auto& b : bl->blocks)
      blocks.push_back(Json{{"proteinoid", b.proteinoid.code()},
                            {"gates", detail::gates_to_json(b.gates)}});
  } else if (const auto* bp = std::get_if<ByProteinoidMessage>(&m)) {
    for (const auto& b : bp->blocks)
      blocks.push_back(Json{{"light", std::string(light_code(b.light))},
                            {"gates", detail::gates_to_json(b.gates)}});
  } else {
    for (const auto& b : std::get<ByGateMessage>(m).blocks)
      blocks.push_back(Json{{"light", std::string(light_code(b.light))},
                            {"proteinoid", b.proteinoid.code()}});
  }
  j["blocks"] = std::move(blocks);
  return j;
}

inline Message message_from_json(const Json& j) {
  if (!j.is_object()) throw std::invalid_argument("message json: expected an object");
  if (!j.contains("schema") || !j["schema"].is_string())
    throw std::invalid_argument("message json: missing 'schema'");
  const auto parsed_schema = schema_from_name(j["schema"].get<std::string>());
  if (!parsed_schema)
    throw std::invalid_argument("message json: unknown schema '" +
                                j["schema"].get<std::string>() + "'");
  const Schema schema = *parsed_schema;
  if (!j.contains("blocks") || !j["blocks"].is_array() || j["blocks"].empty())
    throw std::invalid_argument("message json: 'blocks' must be a non-empty array");

  std::optional<std::string> subject;
  if (j.contains("subject") && !j["subject"].is_null()) {
    if (!j["subject"].is_string())
      throw std::invalid_argument("message json: 'subject' must be a string or null");
    subject = j["subject"].get<std::string>();
  }

  switch (schema) {
    case Schema::ByLight: {
      ByLightMessage m;
      if (subject) {
        const auto light = light_from_code(*subject);
        if (!light) throw GrammarError("by_light subject must be a light code");
        m.light = *light;
      }
      for (const auto& b : j["blocks"])
        m.blocks.push_back({detail::proteinoid_from_json(b, "proteinoid"),
                            detail::gates_from_json(b.contains("gates") ? b["gates"]
                                                                        : Json())});
      return m;
    }
    case Schema::ByProteinoid: {
      ByProteinoidMessage m;
      if (subject) {
        if (!ProteinoidKind::valid_code(*subject))
          throw GrammarError("by_proteinoid subject must be a proteinoid code");
        m.proteinoid = ProteinoidKind::from_code(*subject);
      }
      for (const auto& b : j["blocks"])
        m.blocks.push_back({detail::light_from_json(b, "light"),
                            detail::gates_from_json(b.contains("gates") ? b["gates"]
                                                                        : Json())});
      return m;
    }
    case Schema::ByGate: {
      ByGateMessage m;
      if (subject) {
        const auto gate = gate_from_code(*subject);
        if (!gate) throw GrammarError("by_gate subject must be a gate code");
        m.gate = *gate;
      }
      for (const auto& b : j["blocks"])
        m.blocks.push_back({detail::light_from_json(b, "light"),
                            detail::proteinoid_from_json(b, "proteinoid")});
      return m;
    }
  }
  throw std::logic_error("unreachable");
}

inline Json window_analysis_to_json(const WindowAnalysis& wa) {
  Json j;
  j["window"] = wa.window_index;
  j["truth_row"] = wa.truth_row.to_string();
  j["gate"] = std::string(gate_code(wa.gate));
  j["name"] = std::string(gate_name(wa.gate));
  j["spike_counts"] = wa.spike_counts;
  return j;
}

/// One compact JSON object per line, stream-friendly and diffable.
inline std::string analysis_to_json_lines(const std::vector<WindowAnalysis>& analyses) {
  std::string out;
  for (const auto& wa : analyses) {
    out += window_analysis_to_json(wa).dump();
    out += '\n';
  }
  return out;
}

}  // namespace gatecode
