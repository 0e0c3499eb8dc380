#pragma once

#include "blinkforge/peaks.hpp"
#include "blinkforge/recording.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace blinkforge {

enum class EventKind { Blink, Wire, Scr };

std::string_view to_string(EventKind kind) noexcept;
EventKind event_kind_from_string(std::string_view name);

// One planned event. time_s is the peak (blink, scr) or burst center (wire);
// width_s is the base-to-base duration for blinks and wire bursts and the
// rise time for SCRs. skew is the fraction of a blink spent rising.
struct SynthEvent {
  EventKind kind = EventKind::Blink;
  double time_s = 0.0;
  double amplitude = 0.0;
  double width_s = 0.0;
  double skew = 0.35;
};

struct SynthSpec {
  std::uint64_t seed = 0;
  double sample_rate_hz = 100.0;
  double duration_s = 60.0;
  double noise_sigma = 0.005;
  double baseline = 0.0;

  // Explicit plan. When empty, events are drawn from a Poisson process at
  // event_rate_hz, each gap extended by min_gap_s.
  std::vector<SynthEvent> events;
  double event_rate_hz = 0.0;
  double min_gap_s = 0.0;
  std::pair<double, double> amplitude{0.3, 0.8};
  std::pair<double, double> width_s{0.1, 0.4};
  std::pair<double, double> skew{0.25, 0.45};

  // Slow sinusoidal drift added to the baseline (EDA tonic level).
  double drift_amplitude = 0.0;
  double drift_period_s = 200.0;

  // Throws InvalidArgument on non-positive rate/duration/widths, negative
  // noise, or events outside [0, duration).
  void validate() const;
};

// Defaults per generator: blink and wire sessions in volts, EDA in
// microsiemens (tonic 5 uS, 0.2 uS drift, SCR amplitudes 0.2-1.0 uS).
SynthSpec default_blink_spec();
SynthSpec default_wire_spec();
SynthSpec default_eda_spec();

struct GroundTruth {
  EventKind kind = EventKind::Blink;
  double time_s = 0.0;
  std::size_t center_index = 0;
  double start_s = 0.0;  // support of the rendered shape
  double end_s = 0.0;
  double amplitude = 0.0;
  double width_s = 0.0;
};

struct SynthSession {
  Recording recording;
  std::vector<GroundTruth> truth;
  std::vector<std::string> warnings;
};

// Events drawn for `kind` when the spec has no explicit plan.
std::vector<SynthEvent> plan_events(const SynthSpec& spec, EventKind kind);

// Sum of skewed blink pulses (raised-cosine rise, critically damped decay)
// plus Gaussian noise. Wire events in an explicit plan are rendered too, so
// mixed sessions come from one plan.
SynthSession synth_blink_session(const SynthSpec& spec);
// Smoothed random-walk bursts under a Hann envelope (irregular multi-bump).
SynthSession synth_wire_session(const SynthSpec& spec);
// Blinks planned from `spec` interleaved with wire bursts planned from the
// event rate and ranges of `wire`. Seed, duration, sample rate, noise and
// baseline all come from `spec`.
SynthSession synth_mixed_session(const SynthSpec& spec, const SynthSpec& wire);
// Tonic level + drift + Bateman-shaped SCRs + noise, channel EDA.
SynthSession synth_eda_session(const SynthSpec& spec);

// Unit-peak blink template value at offset u seconds from the peak.
double blink_template(double u, double width_s, double skew);

// Label detected candidates against ground truth: true for a blink, false
// for a wire burst or an unmatched peak. A candidate matches the event whose
// support contains it; overlaps go to the nearest event time.
std::vector<bool> label_candidates(const std::vector<PeakCandidate>& cands,
                                   const std::vector<GroundTruth>& truth,
                                   double sample_rate_hz);

}  // namespace blinkforge
