#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "gatecode/signal.hpp"
#include "gatecode/symbols.hpp"

namespace gatecode {

struct DetectionParams {
  double threshold_sigma = 2.0;  // threshold = mean + sigma * stddev, per window
  double refractory_s = 60.0;
  bool detrend = true;  // subtract a centered moving average, span/10 wide

  void validate() const {
    if (!(threshold_sigma > 0)) throw std::invalid_argument("threshold_sigma must be positive");
    if (refractory_s < 0) throw std::invalid_argument("refractory_s must be non-negative");
  }
};

struct WindowAnalysis {
  int window_index = 0;
  TruthRow truth_row;
  GateKind gate = GateKind::NoGate;
  std::array<int, 4> spike_counts{};
};

// View of a contiguous run of samples within a trace.
struct TraceSpan {
  const VoltageTrace* trace = nullptr;
  size_t first = 0;
  size_t count = 0;

  double start_s() const { return trace->time_of(first); }
  double end_s() const {
    return trace->t0_s + static_cast<double>(first + count) / trace->sample_rate_hz;
  }
  double sample(size_t i) const { return trace->samples_mv[first + i]; }
  double time_of(size_t i) const { return trace->time_of(first + i); }
};

namespace detail {

// Iterative radix-2 FFT, in place; n must be a power of two.
inline void fft_inplace(std::vector<std::complex<double>>& a) {
  const size_t n = a.size();
  if (n == 0 || (n & (n - 1)) != 0) throw std::logic_error("fft size must be a power of two");
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    const double angle = -2.0 * M_PI / static_cast<double>(len);
    const std::complex<double> wl(std::cos(angle), std::sin(angle));
    for (size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (size_t k = 0; k < len / 2; ++k) {
        const auto u = a[i + k];
        const auto v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

/// Centered moving average with reflected ends; `half` samples each side.
inline std::vector<double> moving_average(const std::vector<double>& x, size_t half) {
  const size_t n = x.size();
  std::vector<double> out(n, 0.0);
  if (half == 0 || n == 0) return x;
  auto reflected = [&](long i) -> double {
    if (i < 0) i = -i;
    if (i >= static_cast<long>(n)) i = 2 * static_cast<long>(n) - 2 - i;
    return x[static_cast<size_t>(std::clamp<long>(i, 0, static_cast<long>(n) - 1))];
  };
  const auto width = static_cast<double>(2 * half + 1);
  double acc = 0;
  for (long i = -static_cast<long>(half); i <= static_cast<long>(half); ++i)
    acc += reflected(i);
  for (size_t i = 0; i < n; ++i) {
    out[i] = acc / width;
    acc -= reflected(static_cast<long>(i) - static_cast<long>(half));
    acc += reflected(static_cast<long>(i) + static_cast<long>(half) + 1);
  }
  return out;
}

}  // namespace detail

/// Dominant oscillation period from the FFT magnitude peak, DC excluded.
inline double estimate_period_s(const VoltageTrace& trace) {
  const size_t n = trace.samples_mv.size();
  if (n < 16) throw std::invalid_argument("insufficient samples");

  double mean = 0;
  for (double v : trace.samples_mv) mean += v;
  mean /= static_cast<double>(n);

  size_t padded = 1;
  while (padded < n) padded <<= 1;
  std::vector<std::complex<double>> buf(padded, 0.0);
  double power = 0;
  for (size_t i = 0; i < n; ++i) {
    const double v = trace.samples_mv[i] - mean;
    buf[i] = v;
    power += v * v;
  }
  if (power == 0) throw std::invalid_argument("no oscillation");

  detail::fft_inplace(buf);
  size_t best = 1;
  double best_mag = 0;
  for (size_t k = 1; k <= padded / 2; ++k) {
    const double mag = std::norm(buf[k]);
    if (mag > best_mag) {
      best_mag = mag;
      best = k;
    }
  }
  // frequency of bin k is k * rate / padded
  return static_cast<double>(padded) /
         (static_cast<double>(best) * trace.sample_rate_hz);
}

/// Contiguous whole windows from the trace start; a trailing partial
/// window is discarded.
inline std::vector<TraceSpan> segment_windows(const VoltageTrace& trace, double window_len_s) {
  if (!(window_len_s > 0)) throw std::invalid_argument("bad window length");
  const auto per_window =
      static_cast<size_t>(std::llround(window_len_s * trace.sample_rate_hz));
  if (per_window == 0) throw std::invalid_argument("bad window length");
  std::vector<TraceSpan> spans;
  for (size_t start = 0; start + per_window <= trace.samples_mv.size(); start += per_window)
    spans.push_back({&trace, start, per_window});
  return spans;
}

/// Local maxima above the per-window threshold, separated by the
/// refractory interval.
inline SpikeTrain detect_spikes(const TraceSpan& span, const DetectionParams& params = {}) {
  params.validate();
  if (span.count == 0) throw std::invalid_argument("empty span");

  std::vector<double> x(span.count);
  for (size_t i = 0; i < span.count; ++i) x[i] = span.sample(i);

  // Within half an averaging window of the span ends the baseline estimate
  // rests on reflected data, so maxima found there are artifacts. Keep
  // candidates out of that rim.
  size_t rim = 0;
  if (params.detrend) {
    const double span_len_s = static_cast<double>(span.count) / span.trace->sample_rate_hz;
    const auto half = static_cast<size_t>(
        std::llround(span_len_s / 10.0 * span.trace->sample_rate_hz / 2.0));
    const auto baseline = detail::moving_average(x, half);
    for (size_t i = 0; i < x.size(); ++i) x[i] -= baseline[i];
    if (2 * half < x.size()) rim = half;
  }

  double mean = 0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(x.size());
  double var = 0;
  for (double v : x) var += (v - mean) * (v - mean);
  var /= static_cast<double>(x.size());
  const double threshold = mean + params.threshold_sigma * std::sqrt(var);

  SpikeTrain train;
  train.span_start_s = span.start_s();
  train.span_end_s = span.end_s();
  double last_accepted = -1e300;
  for (size_t i = std::max<size_t>(rim, 1); i + 1 < x.size() - rim; ++i) {
    if (!(x[i] > threshold)) continue;
    if (!(x[i] > x[i - 1] && x[i] >= x[i + 1])) continue;
    const double t = span.time_of(i);
    if (t - last_accepted < params.refractory_s) continue;
    train.spike_times_s.push_back(t);
    last_accepted = t;
  }
  return train;
}

/// Epoch occupancy to truth row to gate. The epoch index doubles as the
/// truth-row input index because of the fixed stimulus order.
inline WindowAnalysis classify_gate(const SpikeTrain& spikes, const StimulusSchedule& schedule,
                                    int window_index = 0) {
  WindowAnalysis wa;
  wa.window_index = window_index;
  const double epoch = schedule.epoch_len_s();
  for (double t : spikes.spike_times_s) {
    const double offset = t - spikes.span_start_s;
    const auto e = static_cast<long>(offset / epoch);
    if (e < 0 || e > 3) continue;  // tolerate edge rounding
    wa.spike_counts[static_cast<size_t>(e)] += 1;
  }
  for (int e = 0; e < 4; ++e)
    if (wa.spike_counts[static_cast<size_t>(e)] > 0)
      wa.truth_row.bits |= static_cast<std::uint8_t>(1u << e);
  wa.gate = gate_from_truth_row(wa.truth_row);
  return wa;
}

inline std::vector<WindowAnalysis> analyze_trace(const VoltageTrace& trace,
                                                 const StimulusSchedule& schedule,
                                                 const DetectionParams& params = {}) {
  std::vector<WindowAnalysis> out;
  const auto spans = segment_windows(trace, schedule.window_len_s);
  for (size_t k = 0; k < spans.size(); ++k)
    out.push_back(
        classify_gate(detect_spikes(spans[k], params), schedule, static_cast<int>(k)));
  return out;
}

/// Gate sequence of an analyzed trace.
inline std::vector<GateKind> gates_of(const std::vector<WindowAnalysis>& analyses) {
  std::vector<GateKind> gates;
  gates.reserve(analyses.size());
  for (const auto& a : analyses) gates.push_back(a.gate);
  return gates;
}

}  // namespace gatecode
