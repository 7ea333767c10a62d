// Walks one recording through the whole loop: synthesize a trace for a
// small gate program, measure it back into symbols, pack the symbols into
// a matrix code, scan that, and rebuild a canonical trace.

#include <cstdio>
#include <string>
#include <vector>

#include "gatecode/grammar.hpp"
#include "gatecode/pbm.hpp"
#include "gatecode/qr.hpp"
#include "gatecode/retrieval.hpp"
#include "gatecode/signal.hpp"
#include "gatecode/spike_gates.hpp"
#include "gatecode/symbols.hpp"

using namespace gatecode;

int main() {
  const ProteinoidKind kind = ProteinoidKind::glu_phe();
  const LightCondition light = LightCondition::WhiteAndBlack;
  const std::vector<GateKind> program{GateKind::And, GateKind::Or, GateKind::Xor,
                                      GateKind::Nand, GateKind::NoGate};

  std::printf("program:");
  for (GateKind g : program) std::printf(" %s", std::string(gate_name(g)).c_str());
  std::printf("\n");

  // Measurement: a noisy recording of the program.
  const VoltageTrace recording = synthesize_trace(kind, {}, program, {}, 1.0, 0.05, 7);
  std::printf("recording: %zu samples over %.0f s\n", recording.samples_mv.size(),
              trace_duration_s(recording));

  // Discretisation: windows to spike counts to truth rows to gates.
  const auto analyses = analyze_trace(recording, {}, {});
  std::printf("windows:\n");
  for (const auto& wa : analyses)
    std::printf("  %d: row %s -> %s (spikes %d %d %d %d)\n", wa.window_index,
                wa.truth_row.to_string().c_str(),
                std::string(gate_name(wa.gate)).c_str(), wa.spike_counts[0],
                wa.spike_counts[1], wa.spike_counts[2], wa.spike_counts[3]);

  ByLightMessage message;
  message.light = light;
  message.blocks.push_back({kind, gates_of(analyses)});
  const std::string digits = serialize(Message{message}).digits;
  std::printf("digits: %s\n", digits.c_str());

  // Into the symbol and back out.
  const QrMatrix matrix = encode_numeric(digits, EcLevel::M);
  std::printf("symbol: version %d, %dx%d modules, mask %d\n", matrix.version,
              matrix.size(), matrix.size(), matrix.mask_id);
  const QrDecoded scanned = decode_matrix(matrix.to_grid());
  std::printf("scanned: %s (%s)\n", scanned.text.c_str(),
              scanned.text == digits ? "matches" : "MISMATCH");

  // Retrieval: a canonical trace carrying the same gate sequence.
  const Message recovered = parse(scanned.text);
  const RetrievalResult rebuilt = reconstruct(recovered, {});
  for (const auto& [key, trace] : rebuilt) {
    const auto again = gates_of(analyze_trace(trace, {}, {}));
    std::printf("rebuilt trace: %zu samples; re-measured gates %s\n",
                trace.samples_mv.size(),
                again == program ? "match the program" : "DIFFER");
  }
  return 0;
}
