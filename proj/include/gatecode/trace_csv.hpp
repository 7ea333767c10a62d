#pragma once

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "gatecode/signal.hpp"

// Trace serialization: `time_s,voltage_mv` header, one sample per line.
// Values are printed with enough digits to round-trip doubles exactly, so
// a written trace reads back bit-identical.

namespace gatecode {

class CsvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void append_double(std::string& out, double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  out.append(buf, res.ptr);
}

inline double parse_double(std::string_view s, const char* what) {
  double v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    throw CsvError(std::string("bad ") + what + " value '" + std::string(s) + "'");
  return v;
}

}  // namespace detail

inline void write_trace_csv(std::ostream& out, const VoltageTrace& trace) {
  std::string buf;
  buf.reserve(1 << 16);
  buf = "time_s,voltage_mv\n";
  for (size_t i = 0; i < trace.samples_mv.size(); ++i) {
    detail::append_double(buf, trace.time_of(i));
    buf += ',';
    detail::append_double(buf, trace.samples_mv[i]);
    buf += '\n';
    if (buf.size() > (1 << 16) - 128) {
      out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
      buf.clear();
    }
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

inline VoltageTrace read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw CsvError("empty trace file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "time_s,voltage_mv")
    throw CsvError("expected header 'time_s,voltage_mv', got '" + line + "'");

  std::vector<double> times, volts;
  size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const size_t comma = line.find(',');
    if (comma == std::string::npos)
      throw CsvError("line " + std::to_string(line_no) + ": missing comma");
    times.push_back(detail::parse_double(std::string_view(line).substr(0, comma), "time"));
    volts.push_back(detail::parse_double(std::string_view(line).substr(comma + 1), "voltage"));
  }
  if (times.size() < 2) throw CsvError("insufficient samples: need at least two rows");

  const double dt = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
  if (!(dt > 0)) throw CsvError("time column must increase");
  for (size_t i = 1; i < times.size(); ++i) {
    const double step = times[i] - times[i - 1];
    if (std::abs(step - dt) > 1e-6 * dt)
      throw CsvError("time column not uniform at row " + std::to_string(i + 1));
  }

  VoltageTrace trace;
  trace.t0_s = times.front();
  double rate = 1.0 / dt;
  // recordings store integer sample rates; undo the 1/dt rounding noise
  if (std::abs(rate - std::round(rate)) < 1e-6 * rate && std::round(rate) > 0)
    rate = std::round(rate);
  trace.sample_rate_hz = rate;
  trace.samples_mv = std::move(volts);
  return trace;
}

}  // namespace gatecode
