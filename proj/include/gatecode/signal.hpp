#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "gatecode/symbols.hpp"

namespace gatecode {

struct VoltageTrace {
  double sample_rate_hz = 1.0;
  double t0_s = 0.0;
  std::vector<double> samples_mv;

  double time_of(size_t i) const {
    return t0_s + static_cast<double>(i) / sample_rate_hz;
  }
};

inline double trace_duration_s(const VoltageTrace& trace) {
  return static_cast<double>(trace.samples_mv.size()) / trace.sample_rate_hz;
}

struct SpikeTrain {
  std::vector<double> spike_times_s;  // strictly increasing
  double span_start_s = 0.0;
  double span_end_s = 0.0;
};

// Four epochs per window presenting the Boolean input pairs in the fixed
// order (0,0), (0,1), (1,0), (1,1); the epoch index therefore equals the
// truth-row input index.
struct StimulusSchedule {
  double window_len_s = 3000.0;
  LightCondition light = LightCondition::WhiteAndBlack;

  double epoch_len_s() const { return window_len_s / 4.0; }
};

// Biexponential pulse, peak-normalized to amplitude_mv.
struct SpikeTemplate {
  double amplitude_mv = 1.0;
  double rise_s = 5.0;
  double decay_s = 20.0;

  void validate() const {
    if (amplitude_mv <= 0 || rise_s <= 0 || decay_s <= rise_s)
      throw std::invalid_argument("bad spike template");
  }

  /// Time from pulse onset to the peak.
  double peak_offset_s() const {
    return rise_s * decay_s / (decay_s - rise_s) * std::log(decay_s / rise_s);
  }

  /// Pulse value dt seconds after onset.
  double value_at(double dt_s) const {
    if (dt_s < 0 || dt_s > rise_s + 12 * decay_s) return 0.0;
    const double tp = peak_offset_s();
    const double peak = std::exp(-tp / decay_s) - std::exp(-tp / rise_s);
    return amplitude_mv * (std::exp(-dt_s / decay_s) - std::exp(-dt_s / rise_s)) / peak;
  }
};

/// Baseline oscillation period by gel composition.
inline double baseline_period_s(ProteinoidKind kind) {
  return kind == ProteinoidKind::phe() ? 2200.0 : 3500.0;
}

/// Baseline swing relative to the spike amplitude.
inline constexpr double kBaselineRelAmplitude = 0.4;

/// Correlation time of the synthetic noise, in units of the window length.
/// The noise models slow electrode drift: it must survive averaging over a
/// whole recording yet stay nearly constant across one detrending window,
/// or the per-window mean + 2 sigma detection contract becomes unmeetable.
inline constexpr double kNoiseCorrelationWindows = 1000.0;

/// Deterministic synthetic recording: per-window spike pulses placed by
/// each gate's truth table, a slow baseline sinusoid, and optional
/// Ornstein-Uhlenbeck drift noise.
inline VoltageTrace synthesize_trace(ProteinoidKind kind, const StimulusSchedule& schedule,
                                     const std::vector<GateKind>& gates,
                                     const SpikeTemplate& pulse, double sample_rate_hz,
                                     double noise_rms_mv, std::uint64_t seed,
                                     bool with_baseline = true) {
  if (gates.empty()) throw std::invalid_argument("empty program");
  if (!(sample_rate_hz > 0)) throw std::invalid_argument("bad sample rate");
  if (noise_rms_mv < 0) throw std::invalid_argument("negative noise");
  if (!(schedule.window_len_s > 0)) throw std::invalid_argument("bad window length");
  pulse.validate();

  const double duration = static_cast<double>(gates.size()) * schedule.window_len_s;
  const auto n = static_cast<size_t>(std::llround(duration * sample_rate_hz));

  VoltageTrace trace;
  trace.sample_rate_hz = sample_rate_hz;
  trace.t0_s = 0.0;
  trace.samples_mv.assign(n, 0.0);

  if (with_baseline) {
    const double period = baseline_period_s(kind);
    const double base_amp = kBaselineRelAmplitude * pulse.amplitude_mv;
    for (size_t i = 0; i < n; ++i)
      trace.samples_mv[i] = base_amp * std::sin(2.0 * M_PI * trace.time_of(i) / period);
  }

  const double epoch = schedule.epoch_len_s();
  const double tp = pulse.peak_offset_s();
  const double support = pulse.rise_s + 12 * pulse.decay_s;
  for (size_t w = 0; w < gates.size(); ++w) {
    const TruthRow row = canonical_truth_row(gates[w]);
    for (int e = 0; e < 4; ++e) {
      if (!row.output(e)) continue;
      const double peak_time =
          static_cast<double>(w) * schedule.window_len_s + (e + 0.5) * epoch;
      const double onset = peak_time - tp;
      const auto first =
          static_cast<size_t>(std::max(0.0, std::ceil(onset * sample_rate_hz)));
      const auto last = std::min(
          n, static_cast<size_t>(std::max(0.0, (onset + support) * sample_rate_hz)));
      for (size_t i = first; i < last; ++i)
        trace.samples_mv[i] += pulse.value_at(trace.time_of(i) - onset);
    }
  }

  if (noise_rms_mv > 0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double tau = kNoiseCorrelationWindows * schedule.window_len_s;
    const double rho = std::exp(-1.0 / (sample_rate_hz * tau));
    const double innovation = noise_rms_mv * std::sqrt(1.0 - rho * rho);
    double x = noise_rms_mv * gauss(rng);
    for (auto& s : trace.samples_mv) {
      s += x;
      x = rho * x + innovation * gauss(rng);
    }
  }
  return trace;
}

}  // namespace gatecode
