#include "gatecode/spike_gates.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "gatecode/signal.hpp"
#include "gatecode/symbols.hpp"

namespace gatecode {
namespace {

VoltageTrace sinusoid(double period_s, double duration_s, double rate_hz,
                      double amplitude = 1.0, double phase = 0.0, double offset = 0.0) {
  VoltageTrace t;
  t.sample_rate_hz = rate_hz;
  const auto n = static_cast<size_t>(std::llround(duration_s * rate_hz));
  t.samples_mv.resize(n);
  for (size_t i = 0; i < n; ++i) {
    const double ts = static_cast<double>(i) / rate_hz;
    t.samples_mv[i] = offset + amplitude * std::sin(2.0 * M_PI * ts / period_s + phase);
  }
  return t;
}

size_t next_pow2(size_t n) {
  size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

TEST(PeriodEstimation, RecoversSinusoidPeriodsWithinOneBin) {
  for (double period : {3500.0, 2200.0}) {
    VoltageTrace t = sinusoid(period, 10.0 * period, 1.0, 0.4, 0.7, -2.5);
    const double est = estimate_period_s(t);

    // The estimate is quantized to FFT bins; the winning bin must be the
    // one nearest the true frequency.
    const double bin_hz = 1.0 / static_cast<double>(next_pow2(t.samples_mv.size()));
    EXPECT_LE(std::abs(1.0 / est - 1.0 / period), bin_hz * (0.5 + 1e-9))
        << "period " << period << " estimated " << est;
    EXPECT_LE(std::abs(est - period) / period, 0.05);
  }
}

TEST(PeriodEstimation, PicksTheDominantTone) {
  VoltageTrace t = sinusoid(3500.0, 35000.0, 1.0, 1.0);
  for (size_t i = 0; i < t.samples_mv.size(); ++i) {
    const double ts = static_cast<double>(i);
    t.samples_mv[i] += 0.3 * std::sin(2.0 * M_PI * ts / 800.0);
  }
  EXPECT_LE(std::abs(estimate_period_s(t) - 3500.0) / 3500.0, 0.05);
}

TEST(PeriodEstimation, WorksOnSynthesizedBaselines) {
  // Ten or more baseline periods of gate-free signal per trace.
  struct Case {
    ProteinoidKind kind;
    double period;
  } cases[] = {{ProteinoidKind::phe(), 2200.0}, {ProteinoidKind::asp(), 3500.0}};
  for (const auto& c : cases) {
    std::vector<GateKind> gates(12, GateKind::NoGate);
    VoltageTrace t = synthesize_trace(c.kind, {}, gates, {}, 1.0, 0.0, 0);
    EXPECT_LE(std::abs(estimate_period_s(t) - c.period) / c.period, 0.05)
        << "kind " << c.kind.code();
  }
}

TEST(PeriodEstimation, RejectsDegenerateInput) {
  VoltageTrace tiny;
  tiny.sample_rate_hz = 1.0;
  tiny.samples_mv.assign(15, 1.0);
  try {
    estimate_period_s(tiny);
    FAIL() << "expected a throw";
  } catch (const std::invalid_argument& e) {
    EXPECT_STREQ(e.what(), "insufficient samples");
  }

  VoltageTrace flat;
  flat.sample_rate_hz = 1.0;
  flat.samples_mv.assign(100, 3.25);
  try {
    estimate_period_s(flat);
    FAIL() << "expected a throw";
  } catch (const std::invalid_argument& e) {
    EXPECT_STREQ(e.what(), "no oscillation");
  }
}

TEST(Segmentation, WholeWindowsOnly) {
  VoltageTrace t;
  t.sample_rate_hz = 1.0;

  t.samples_mv.assign(9000, 0.0);
  auto spans = segment_windows(t, 3000.0);
  ASSERT_EQ(spans.size(), 3u);
  for (size_t k = 0; k < spans.size(); ++k) {
    EXPECT_EQ(spans[k].first, k * 3000);
    EXPECT_EQ(spans[k].count, 3000u);
    EXPECT_DOUBLE_EQ(spans[k].start_s(), 3000.0 * static_cast<double>(k));
    EXPECT_DOUBLE_EQ(spans[k].end_s(), 3000.0 * static_cast<double>(k + 1));
  }

  t.samples_mv.assign(2999, 0.0);
  EXPECT_TRUE(segment_windows(t, 3000.0).empty());

  t.samples_mv.assign(10000, 0.0);
  EXPECT_EQ(segment_windows(t, 3000.0).size(), 3u);
}

TEST(Segmentation, RespectsSampleRate) {
  VoltageTrace t;
  t.sample_rate_hz = 2.0;
  t.samples_mv.assign(450, 0.0);
  auto spans = segment_windows(t, 100.0);
  ASSERT_EQ(spans.size(), 2u);
  EXPECT_EQ(spans[0].count, 200u);
  EXPECT_DOUBLE_EQ(spans[1].start_s(), 100.0);
}

TEST(Segmentation, RejectsBadWindowLength) {
  VoltageTrace t;
  t.sample_rate_hz = 1.0;
  t.samples_mv.assign(100, 0.0);
  EXPECT_THROW(segment_windows(t, 0.0), std::invalid_argument);
  EXPECT_THROW(segment_windows(t, -5.0), std::invalid_argument);
}

TEST(Detection, FindsEveryPulseOfAnOrWindow) {
  VoltageTrace t =
      synthesize_trace(ProteinoidKind::glu_phe(), {}, {GateKind::Or}, {}, 1.0, 0.0, 0);
  auto spans = segment_windows(t, 3000.0);
  ASSERT_EQ(spans.size(), 1u);
  SpikeTrain train = detect_spikes(spans[0]);
  ASSERT_EQ(train.spike_times_s.size(), 3u);
  // OR responds to inputs 01, 10, 11: pulses peak mid-epoch.
  const double expected[] = {1125.0, 1875.0, 2625.0};
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(train.spike_times_s[i], expected[i], 2.0);
  EXPECT_DOUBLE_EQ(train.span_start_s, 0.0);
  EXPECT_DOUBLE_EQ(train.span_end_s, 3000.0);
}

TEST(Detection, FlatWindowHasNoSpikes) {
  VoltageTrace t;
  t.sample_rate_hz = 1.0;
  t.samples_mv.assign(3000, 0.5);
  auto spans = segment_windows(t, 3000.0);
  ASSERT_EQ(spans.size(), 1u);
  EXPECT_TRUE(detect_spikes(spans[0]).spike_times_s.empty());
}

TEST(Detection, QuietWindowsStayQuietUnderDrift) {
  // Slow drift plus the baseline oscillation must never read as spikes,
  // in particular near the span ends where the detrender is least informed.
  for (auto kind : {ProteinoidKind::phe(), ProteinoidKind::asp()}) {
    for (unsigned seed = 0; seed < 10; ++seed) {
      std::vector<GateKind> gates(20, GateKind::NoGate);
      VoltageTrace t = synthesize_trace(kind, {}, gates, {}, 1.0, 0.05, seed);
      for (const auto& span : segment_windows(t, 3000.0)) {
        SpikeTrain train = detect_spikes(span);
        EXPECT_TRUE(train.spike_times_s.empty())
            << kind.code() << " seed " << seed << " at " << train.spike_times_s[0];
      }
    }
  }
}

TEST(Detection, RefractoryPeriodSuppressesNearbyMaxima) {
  VoltageTrace t;
  t.sample_rate_hz = 1.0;
  t.samples_mv.assign(300, 0.0);
  t.samples_mv[100] = 1.0;
  t.samples_mv[130] = 1.0;
  TraceSpan span{&t, 0, t.samples_mv.size()};

  DetectionParams raw{2.0, 60.0, false};
  SpikeTrain train = detect_spikes(span, raw);
  ASSERT_EQ(train.spike_times_s.size(), 1u);
  EXPECT_DOUBLE_EQ(train.spike_times_s[0], 100.0);

  raw.refractory_s = 0.0;
  EXPECT_EQ(detect_spikes(span, raw).spike_times_s.size(), 2u);
}

TEST(Detection, RejectsBadArguments) {
  VoltageTrace t;
  t.sample_rate_hz = 1.0;
  t.samples_mv.assign(10, 0.0);
  EXPECT_THROW(detect_spikes(TraceSpan{&t, 0, 0}), std::invalid_argument);

  TraceSpan span{&t, 0, 10};
  DetectionParams p;
  p.threshold_sigma = 0.0;
  EXPECT_THROW(detect_spikes(span, p), std::invalid_argument);
  p = DetectionParams{};
  p.refractory_s = -1.0;
  EXPECT_THROW(detect_spikes(span, p), std::invalid_argument);
}

SpikeTrain train_with_epochs(std::initializer_list<int> epochs, int copies = 1) {
  SpikeTrain train;
  train.span_start_s = 0.0;
  train.span_end_s = 3000.0;
  for (int e : epochs)
    for (int c = 0; c < copies; ++c)
      train.spike_times_s.push_back(750.0 * e + 200.0 + 10.0 * c);
  return train;
}

TEST(Classification, AllSixteenOccupancyPatterns) {
  for (int bits = 0; bits < 16; ++bits) {
    std::initializer_list<int> none{};
    SpikeTrain train = train_with_epochs(none);
    for (int e = 0; e < 4; ++e)
      if (bits & (1 << e)) train.spike_times_s.push_back(750.0 * e + 375.0);
    WindowAnalysis wa = classify_gate(train, {}, bits);
    EXPECT_EQ(wa.window_index, bits);
    EXPECT_EQ(wa.truth_row.bits, bits);
    EXPECT_EQ(wa.gate, gate_from_truth_row(wa.truth_row));
    for (int e = 0; e < 4; ++e)
      EXPECT_EQ(wa.spike_counts[static_cast<size_t>(e)], (bits & (1 << e)) ? 1 : 0);
  }
}

TEST(Classification, NamedGatesFromSpikePlacement) {
  EXPECT_EQ(classify_gate(train_with_epochs({3}), {}).gate, GateKind::And);
  EXPECT_EQ(classify_gate(train_with_epochs({1, 2, 3}), {}).gate, GateKind::Or);
  EXPECT_EQ(classify_gate(train_with_epochs({1, 2}), {}).gate, GateKind::Xor);
  EXPECT_EQ(classify_gate(train_with_epochs({0, 1, 2}), {}).gate, GateKind::Nand);
  EXPECT_EQ(classify_gate(train_with_epochs({0}), {}).gate, GateKind::Nor);
  EXPECT_EQ(classify_gate(train_with_epochs({0, 3}), {}).gate, GateKind::Xnor);
  EXPECT_EQ(classify_gate(train_with_epochs({0, 1}), {}).gate, GateKind::Not);
  EXPECT_EQ(classify_gate(train_with_epochs({0, 2}), {}).gate, GateKind::Not);
  EXPECT_EQ(classify_gate(train_with_epochs({}), {}).gate, GateKind::NoGate);
  EXPECT_EQ(classify_gate(train_with_epochs({1}), {}).gate, GateKind::NoGate);
  EXPECT_EQ(classify_gate(train_with_epochs({0, 1, 2, 3}), {}).gate, GateKind::NoGate);
}

TEST(Classification, RepeatedSpikesCountButDoNotChangeTheRow) {
  WindowAnalysis once = classify_gate(train_with_epochs({1, 3}), {});
  WindowAnalysis thrice = classify_gate(train_with_epochs({1, 3}, 3), {});
  EXPECT_EQ(once.truth_row.bits, thrice.truth_row.bits);
  EXPECT_EQ(once.gate, thrice.gate);
  EXPECT_EQ(thrice.spike_counts[1], 3);
  EXPECT_EQ(thrice.spike_counts[3], 3);
  EXPECT_EQ(thrice.spike_counts[0], 0);
}

TEST(Classification, UsesTheSpanStartAsEpochOrigin) {
  SpikeTrain train;
  train.span_start_s = 6000.0;
  train.span_end_s = 9000.0;
  train.spike_times_s = {6000.0 + 375.0, 6000.0 + 2625.0};  // epochs 0 and 3
  WindowAnalysis wa = classify_gate(train, {}, 2);
  EXPECT_EQ(wa.window_index, 2);
  EXPECT_EQ(wa.truth_row.bits, 0b1001);
  EXPECT_EQ(wa.gate, GateKind::Xnor);
}

TEST(Analysis, RecoversAKnownProgramWithCounts) {
  const std::vector<GateKind> program{GateKind::And, GateKind::Or, GateKind::Xor};
  VoltageTrace t =
      synthesize_trace(ProteinoidKind::glu_phe(), {}, program, {}, 1.0, 0.0, 0);
  auto res = analyze_trace(t, {}, {});
  ASSERT_EQ(res.size(), 3u);
  EXPECT_EQ(gates_of(res), program);
  const std::array<int, 4> and_counts{0, 0, 0, 1};
  const std::array<int, 4> or_counts{0, 1, 1, 1};
  const std::array<int, 4> xor_counts{0, 1, 1, 0};
  EXPECT_EQ(res[0].spike_counts, and_counts);
  EXPECT_EQ(res[1].spike_counts, or_counts);
  EXPECT_EQ(res[2].spike_counts, xor_counts);
  for (size_t k = 0; k < res.size(); ++k) {
    EXPECT_EQ(res[k].window_index, static_cast<int>(k));
    EXPECT_EQ(res[k].gate, gate_from_truth_row(res[k].truth_row));
  }
}

TEST(Analysis, ShortTraceYieldsNothing) {
  VoltageTrace t;
  t.sample_rate_hz = 1.0;
  t.samples_mv.assign(2999, 0.0);
  EXPECT_TRUE(analyze_trace(t, {}, {}).empty());
}

TEST(Analysis, AllQuietProgram) {
  std::vector<GateKind> gates(5, GateKind::NoGate);
  VoltageTrace t = synthesize_trace(ProteinoidKind::phe(), {}, gates, {}, 1.0, 0.0, 0);
  auto res = analyze_trace(t, {}, {});
  ASSERT_EQ(res.size(), 5u);
  for (const auto& wa : res) {
    EXPECT_EQ(wa.gate, GateKind::NoGate);
    EXPECT_EQ(wa.truth_row.bits, 0);
  }
}

TEST(Analysis, RandomProgramsRoundTripNoiselessly) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 40; ++trial) {
    const auto kind = kNamedProteinoids[rng() % kNamedProteinoids.size()];
    std::vector<GateKind> gates(1 + rng() % 20);
    for (auto& g : gates) g = kAllGates[rng() % kAllGates.size()];
    VoltageTrace t = synthesize_trace(kind, {}, gates, {}, 1.0, 0.0, 0);
    auto res = analyze_trace(t, {}, {});
    ASSERT_EQ(res.size(), gates.size()) << "trial " << trial;
    EXPECT_EQ(gates_of(res), gates) << "trial " << trial << " kind " << kind.code();
  }
}

TEST(Analysis, NoisyRecoveryAcrossSeeds) {
  // Five percent of the spike amplitude, fifty seeds per kind; nearly every
  // seed must reproduce the program. The drift model is slow on the window
  // scale, so failures here point at the detrender or the threshold.
  std::mt19937_64 rng(99);
  for (const auto& kind : kNamedProteinoids) {
    std::vector<GateKind> gates(12);
    for (auto& g : gates) g = kAllGates[rng() % kAllGates.size()];
    int ok = 0;
    for (unsigned seed = 0; seed < 50; ++seed) {
      VoltageTrace t = synthesize_trace(kind, {}, gates, {}, 1.0, 0.05, seed);
      if (gates_of(analyze_trace(t, {}, {})) == gates) ++ok;
    }
    EXPECT_GE(ok, 48) << "kind " << kind.code();
  }
}

}  // namespace
}  // namespace gatecode
