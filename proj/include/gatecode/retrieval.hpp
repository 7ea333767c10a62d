#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "gatecode/grammar.hpp"
#include "gatecode/signal.hpp"
#include "gatecode/trace_csv.hpp"

namespace gatecode {

struct RetrievalParams {
  SpikeTemplate pulse;
  double sample_rate_hz = 1.0;
  double window_len_s = 3000.0;
  bool baseline = true;  // include the slow sinusoid under the pulses

  void validate() const {
    pulse.validate();
    if (!(sample_rate_hz > 0)) throw std::invalid_argument("bad sample rate");
    if (!(window_len_s > 0)) throw std::invalid_argument("bad window length");
  }
};

/// Identity of one reconstructed trace. Either side may be unknown when the
/// message does not pin it down (e.g. a by_proteinoid message without a
/// subject label leaves the proteinoid open).
using RetrievalKey = std::pair<std::optional<LightCondition>, std::optional<ProteinoidKind>>;

using RetrievalResult = std::map<RetrievalKey, VoltageTrace>;

namespace detail {

// One synthesis call per key keeps the baseline phase continuous across
// blocks that share a trace.
inline void glue_block(std::map<RetrievalKey, std::vector<GateKind>>& programs,
                       const RetrievalKey& key, const std::vector<GateKind>& gates) {
  auto& program = programs[key];
  program.insert(program.end(), gates.begin(), gates.end());
}

}  // namespace detail

/// Rebuild one canonical analog trace per (light, proteinoid) key of the
/// message. The waveform is the noise-free synthesis of the decoded gate
/// sequence: the discretised fingerprint survives the trip exactly, the
/// original recording does not.
inline RetrievalResult reconstruct(const Message& message, const RetrievalParams& params) {
  params.validate();
  if (std::holds_alternative<ByGateMessage>(message))
    throw GrammarError("schema carries no reconstructable sequence");

  std::map<RetrievalKey, std::vector<GateKind>> programs;
  if (const auto* bl = std::get_if<ByLightMessage>(&message)) {
    for (const auto& block : bl->blocks)
      detail::glue_block(programs, {bl->light, block.proteinoid}, block.gates);
  } else {
    const auto& bp = std::get<ByProteinoidMessage>(message);
    for (const auto& block : bp.blocks)
      detail::glue_block(programs, {block.light, bp.proteinoid}, block.gates);
  }
  if (programs.empty()) throw GrammarError("empty message");

  RetrievalResult result;
  for (const auto& [key, gates] : programs) {
    StimulusSchedule schedule;
    schedule.window_len_s = params.window_len_s;
    if (key.first) schedule.light = *key.first;
    // A message that never names the proteinoid still reconstructs; the
    // generic baseline period applies.
    const ProteinoidKind kind = key.second ? *key.second : ProteinoidKind::glu_phe();
    result.emplace(key, synthesize_trace(kind, schedule, gates, params.pulse,
                                         params.sample_rate_hz, 0.0, 0, params.baseline));
  }
  return result;
}

/// `<schema>_<subject>_<light>_<proteinoid>.csv`, unknown parts spelled "na".
inline std::string retrieval_file_name(Schema schema,
                                       const std::optional<std::string>& subject,
                                       const RetrievalKey& key) {
  std::string name{schema_name(schema)};
  name += '_';
  name += subject ? *subject : "na";
  name += '_';
  name += key.first ? std::string(light_code(*key.first)) : "na";
  name += '_';
  name += key.second ? key.second->code() : "na";
  name += ".csv";
  return name;
}

/// Reconstruct and write one CSV per key into `out_dir`; returns the paths
/// written, in key order.
inline std::vector<std::filesystem::path> write_reconstruction(
    const Message& message, const RetrievalParams& params,
    const std::filesystem::path& out_dir) {
  const RetrievalResult traces = reconstruct(message, params);
  std::filesystem::create_directories(out_dir);
  std::vector<std::filesystem::path> written;
  for (const auto& [key, trace] : traces) {
    const auto path =
        out_dir / retrieval_file_name(schema_of(message), subject_code(message), key);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CsvError("cannot open " + path.string());
    write_trace_csv(out, trace);
    if (!out) throw CsvError("write failed for " + path.string());
    written.push_back(path);
  }
  return written;
}

}  // namespace gatecode
