// Command-line front end: files in, files out, exit codes as contract.
//
//   0 success            4 payload exceeds symbol capacity
//   1 mismatch/internal  5 undecodable symbol
//   2 bad input          6 digit grammar violation
//   3 insufficient data

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gatecode/grammar.hpp"
#include "gatecode/json_io.hpp"
#include "gatecode/pbm.hpp"
#include "gatecode/png_writer.hpp"
#include "gatecode/qr.hpp"
#include "gatecode/retrieval.hpp"
#include "gatecode/signal.hpp"
#include "gatecode/spike_gates.hpp"
#include "gatecode/symbols.hpp"
#include "gatecode/trace_csv.hpp"

namespace {

using namespace gatecode;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open " + path + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed for " + path);
}

ProteinoidKind kind_from_flag(const std::string& code) {
  if (!ProteinoidKind::valid_code(code))
    throw std::invalid_argument("unknown proteinoid code '" + code + "'");
  return ProteinoidKind::from_code(code);
}

LightCondition light_from_flag(const std::string& code) {
  const auto light = light_from_code(code);
  if (!light) throw std::invalid_argument("unknown light code '" + code + "'");
  return *light;
}

EcLevel ec_from_flag(const std::string& name) {
  const auto ec = ec_level_from_name(name);
  if (!ec) throw std::invalid_argument("unknown EC level '" + name + "'");
  return *ec;
}

std::optional<Schema> schema_from_flag(const std::string& name) {
  if (name.empty()) return std::nullopt;
  const auto schema = schema_from_name(name);
  if (!schema) throw std::invalid_argument("unknown schema '" + name + "'");
  return schema;
}

std::vector<GateKind> gates_from_flag(const std::string& list) {
  std::vector<GateKind> gates;
  std::string token;
  std::istringstream in(list);
  while (std::getline(in, token, ',')) {
    while (!token.empty() && token.front() == ' ') token.erase(token.begin());
    while (!token.empty() && token.back() == ' ') token.pop_back();
    if (token.empty()) continue;
    const auto g = gate_from_text(token);
    if (!g) throw std::invalid_argument("unknown gate '" + token + "'");
    gates.push_back(*g);
  }
  if (gates.empty()) throw std::invalid_argument("no gates given");
  return gates;
}

// Flags shared by everything that reads or writes message payloads.
struct PayloadFlags {
  std::string digits;
  std::string message_path;
  std::string schema;

  Message to_message() const {
    if (!message_path.empty())
      return message_from_json(Json::parse(read_file(message_path)));
    return parse(digits, schema_from_flag(schema));
  }

  std::string to_digits() const {
    if (!message_path.empty()) return serialize(to_message()).digits;
    return digits;
  }
};

struct SynthFlags {
  std::string kind = "33";
  std::string gates;
  std::string light = "10";
  double window_s = 3000.0;
  double rate_hz = 1.0;
  double noise_mv = 0.0;
  std::uint64_t seed = 0;
  bool no_baseline = false;
  std::string out;
};

int run_synth(const SynthFlags& f) {
  StimulusSchedule schedule;
  schedule.window_len_s = f.window_s;
  schedule.light = light_from_flag(f.light);
  const VoltageTrace trace =
      synthesize_trace(kind_from_flag(f.kind), schedule, gates_from_flag(f.gates), {},
                       f.rate_hz, f.noise_mv, f.seed, !f.no_baseline);
  if (f.out.empty()) {
    write_trace_csv(std::cout, trace);
    return 0;
  }
  std::ofstream out(f.out, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open " + f.out + " for writing");
  write_trace_csv(out, trace);
  if (!out) throw std::runtime_error("write failed for " + f.out);
  std::cout << "wrote " << f.out << ": " << gates_from_flag(f.gates).size()
            << " windows, " << trace.samples_mv.size() << " samples\n";
  return 0;
}

struct AnalyzeFlags {
  std::string csv;
  double window_s = 3000.0;
  double sigma = 2.0;
  double refractory_s = 60.0;
  bool no_detrend = false;
  std::string out;
};

std::vector<WindowAnalysis> analyze_file(const std::string& csv_path, double window_s,
                                         double sigma, double refractory_s,
                                         bool no_detrend) {
  std::ifstream in(csv_path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open " + csv_path);
  const VoltageTrace trace = read_trace_csv(in);
  StimulusSchedule schedule;
  schedule.window_len_s = window_s;
  DetectionParams params;
  params.threshold_sigma = sigma;
  params.refractory_s = refractory_s;
  params.detrend = !no_detrend;
  return analyze_trace(trace, schedule, params);
}

int run_analyze(const AnalyzeFlags& f) {
  const auto analyses =
      analyze_file(f.csv, f.window_s, f.sigma, f.refractory_s, f.no_detrend);
  if (analyses.empty()) {
    std::cerr << "error: no full window in trace\n";
    return 3;
  }
  const std::string lines = analysis_to_json_lines(analyses);
  if (f.out.empty())
    std::cout << lines;
  else
    write_file(f.out, lines);
  return 0;
}

struct EncodeFlags {
  PayloadFlags payload;
  std::string ec = "M";
  int version = 0;  // 0 = pick the smallest that fits
  std::string out = "symbol.pbm";
  std::string png;
};

int run_encode(const EncodeFlags& f) {
  const std::string digits = f.payload.to_digits();
  if (digits.empty()) {
    std::cerr << "error: empty payload\n";
    return 4;
  }
  std::optional<int> version;
  if (f.version != 0) version = f.version;
  const QrMatrix matrix = encode_numeric(digits, ec_from_flag(f.ec), version);
  const BitGrid grid = matrix.to_grid();
  write_file(f.out, write_pbm(grid));
  if (!f.png.empty()) write_file(f.png, write_png(grid));
  std::cout << "version " << matrix.version << " ec " << ec_level_name(matrix.ec_level)
            << " mask " << matrix.mask_id << " modules " << matrix.size() << "x"
            << matrix.size() << "\n";
  return 0;
}

struct DecodeFlags {
  std::string pbm;
  std::string schema;
};

int run_decode(const DecodeFlags& f) {
  const auto schema = schema_from_flag(f.schema);  // validate before any work
  const BitGrid grid = read_pbm(read_file(f.pbm));
  const QrDecoded decoded = decode_matrix(grid);
  std::cout << decoded.text << "\n";
  try {
    const Message m = parse(decoded.text, schema);
    std::cout << message_to_json(m).dump() << "\n";
  } catch (const GrammarError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 6;
  }
  return 0;
}

struct ReconstructFlags {
  PayloadFlags payload;
  std::string out_dir = ".";
  double rate_hz = 1.0;
  double window_s = 3000.0;
  bool no_baseline = false;
};

int run_reconstruct(const ReconstructFlags& f) {
  const Message m = f.payload.to_message();
  RetrievalParams params;
  params.sample_rate_hz = f.rate_hz;
  params.window_len_s = f.window_s;
  params.baseline = !f.no_baseline;
  for (const auto& path : write_reconstruction(m, params, f.out_dir))
    std::cout << path.string() << "\n";
  return 0;
}

struct RoundtripFlags {
  std::string csv;
  std::string schema = "by_light";
  std::string kind = "33";
  std::string light = "10";
  double window_s = 3000.0;
  double sigma = 2.0;
  double refractory_s = 60.0;
  bool no_detrend = false;
  std::string ec = "M";
  int version = 0;
};

int run_roundtrip(const RoundtripFlags& f) {
  const auto schema = schema_from_flag(f.schema);
  const auto kind = kind_from_flag(f.kind);
  const auto light = light_from_flag(f.light);
  if (!schema || *schema == Schema::ByGate)
    throw GrammarError("schema carries no reconstructable sequence");

  // Measurement and discretisation.
  const auto analyses =
      analyze_file(f.csv, f.window_s, f.sigma, f.refractory_s, f.no_detrend);
  if (analyses.empty()) {
    std::cerr << "error: no full window in trace\n";
    return 3;
  }
  const std::vector<GateKind> gates_pre = gates_of(analyses);
  std::cout << "windows " << analyses.size() << "\n";

  AnalysisEntry entry{light, kind, gates_pre};
  const std::string subject =
      *schema == Schema::ByLight ? std::string(light_code(light)) : kind.code();
  const Message message = message_from_analysis({entry}, *schema, subject);
  const std::string digits = serialize(message).digits;
  std::cout << "digits " << digits << "\n";

  // Through the symbol and back.
  std::optional<int> version;
  if (f.version != 0) version = f.version;
  const QrMatrix matrix = encode_numeric(digits, ec_from_flag(f.ec), version);
  std::cout << "symbol version " << matrix.version << " ec "
            << ec_level_name(matrix.ec_level) << " mask " << matrix.mask_id << "\n";
  const QrDecoded decoded = decode_matrix(read_pbm(write_pbm(matrix.to_grid())));
  const Message recovered = parse(decoded.text, schema);

  // Retrieval, then re-measurement of the rebuilt trace.
  RetrievalParams params;
  params.window_len_s = f.window_s;
  std::vector<GateKind> gates_post;
  for (const auto& [key, trace] : reconstruct(recovered, params)) {
    StimulusSchedule schedule;
    schedule.window_len_s = f.window_s;
    for (const auto& wa : analyze_trace(trace, schedule, {}))
      gates_post.push_back(wa.gate);
  }

  if (decoded.text == digits && gates_post == gates_pre) {
    std::cout << "IDENTICAL\n";
    return 0;
  }
  std::cout << "MISMATCH\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"proteinoid gate recordings <-> digit grammar <-> matrix symbols"};
  app.require_subcommand(1);

  SynthFlags synth;
  auto* synth_cmd = app.add_subcommand("synth", "write a synthetic recording as CSV");
  synth_cmd->add_option("--kind", synth.kind, "proteinoid code (33,35,37,55,57,...)");
  synth_cmd->add_option("--gates", synth.gates, "comma-separated gate codes or names")
      ->required();
  synth_cmd->add_option("--light", synth.light, "light condition code (01,10,11)");
  synth_cmd->add_option("--window", synth.window_s, "window length, seconds");
  synth_cmd->add_option("--rate", synth.rate_hz, "sample rate, Hz");
  synth_cmd->add_option("--noise", synth.noise_mv, "drift noise RMS, mV");
  synth_cmd->add_option("--seed", synth.seed, "noise seed");
  synth_cmd->add_flag("--no-baseline", synth.no_baseline, "omit the baseline sinusoid");
  synth_cmd->add_option("--out", synth.out, "output CSV path (default: stdout)");

  AnalyzeFlags analyze;
  auto* analyze_cmd =
      app.add_subcommand("analyze", "classify a recording into gates, JSON per window");
  analyze_cmd->add_option("csv", analyze.csv, "input CSV trace")->required();
  analyze_cmd->add_option("--window", analyze.window_s, "window length, seconds");
  analyze_cmd->add_option("--sigma", analyze.sigma, "detection threshold, sigmas");
  analyze_cmd->add_option("--refractory", analyze.refractory_s, "refractory gap, seconds");
  analyze_cmd->add_flag("--no-detrend", analyze.no_detrend, "skip moving-average detrend");
  analyze_cmd->add_option("--out", analyze.out, "output path (default: stdout)");

  EncodeFlags encode;
  auto* encode_cmd = app.add_subcommand("encode", "render digits or a message as a symbol");
  auto* encode_digits =
      encode_cmd->add_option("digits", encode.payload.digits, "digit payload");
  encode_cmd->add_option("--message", encode.payload.message_path, "message JSON path")
      ->excludes(encode_digits);
  encode_cmd->add_option("--schema", encode.payload.schema,
                         "schema for digit payloads (unused for --message)");
  encode_cmd->add_option("--ec", encode.ec, "error correction level L|M|Q|H");
  encode_cmd->add_option("--version", encode.version, "symbol version 1-10 (0 = auto)");
  encode_cmd->add_option("--out", encode.out, "output PBM path");
  encode_cmd->add_option("--png", encode.png, "also write a PNG here");

  DecodeFlags decode;
  auto* decode_cmd = app.add_subcommand("decode", "read a PBM symbol back to digits");
  decode_cmd->add_option("pbm", decode.pbm, "input PBM path")->required();
  decode_cmd->add_option("--schema", decode.schema, "parse digits under this schema");

  ReconstructFlags reconstruct;
  auto* reconstruct_cmd =
      app.add_subcommand("reconstruct", "rebuild analog traces from digits or JSON");
  auto* reconstruct_digits =
      reconstruct_cmd->add_option("digits", reconstruct.payload.digits, "digit payload");
  reconstruct_cmd
      ->add_option("--message", reconstruct.payload.message_path, "message JSON path")
      ->excludes(reconstruct_digits);
  reconstruct_cmd->add_option("--schema", reconstruct.payload.schema,
                              "schema for digit payloads");
  reconstruct_cmd->add_option("--out-dir", reconstruct.out_dir, "directory for CSVs");
  reconstruct_cmd->add_option("--rate", reconstruct.rate_hz, "sample rate, Hz");
  reconstruct_cmd->add_option("--window", reconstruct.window_s, "window length, seconds");
  reconstruct_cmd->add_flag("--no-baseline", reconstruct.no_baseline,
                            "omit the baseline sinusoid");

  RoundtripFlags roundtrip;
  auto* roundtrip_cmd = app.add_subcommand(
      "roundtrip", "measure, discretise, encode, decode, rebuild, compare");
  roundtrip_cmd->add_option("csv", roundtrip.csv, "input CSV trace")->required();
  roundtrip_cmd->add_option("--schema", roundtrip.schema, "by_light or by_proteinoid");
  roundtrip_cmd->add_option("--kind", roundtrip.kind, "proteinoid code of the recording");
  roundtrip_cmd->add_option("--light", roundtrip.light, "light condition code");
  roundtrip_cmd->add_option("--window", roundtrip.window_s, "window length, seconds");
  roundtrip_cmd->add_option("--sigma", roundtrip.sigma, "detection threshold, sigmas");
  roundtrip_cmd->add_option("--refractory", roundtrip.refractory_s,
                            "refractory gap, seconds");
  roundtrip_cmd->add_flag("--no-detrend", roundtrip.no_detrend,
                          "skip moving-average detrend");
  roundtrip_cmd->add_option("--ec", roundtrip.ec, "error correction level L|M|Q|H");
  roundtrip_cmd->add_option("--version", roundtrip.version, "symbol version (0 = auto)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (synth_cmd->parsed()) return run_synth(synth);
    if (analyze_cmd->parsed()) return run_analyze(analyze);
    if (encode_cmd->parsed()) return run_encode(encode);
    if (decode_cmd->parsed()) return run_decode(decode);
    if (reconstruct_cmd->parsed()) return run_reconstruct(reconstruct);
    if (roundtrip_cmd->parsed()) return run_roundtrip(roundtrip);
  } catch (const GrammarError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 6;
  } catch (const QrDecodeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 5;
  } catch (const QrCapacityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const CsvError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const PbmError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
