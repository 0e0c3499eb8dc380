#pragma once

#include "blinkforge/recording.hpp"
#include "blinkforge/signal.hpp"

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace blinkforge {

namespace eda {
inline constexpr std::array<std::string_view, 15> kFeatureNames = {
    "Signal Mean",
    "Signal Standard Deviation",
    "Signal Range",
    "Velocity Mean",
    "Velocity Standard Deviation",
    "Petrosian Fractal Dimension",
    "Higuchi Fractal Dimension",
    "DFA",
    "Katz Fractal Dimension",
    "Hjorth Activity",
    "Hjorth Mobility",
    "Hjorth Complexity",
    "Variance of Rate of Change",
    "Spectral Entropy",
    "Permutation Entropy",
};
}  // namespace eda

struct EdaSplitParams {
  EdaFilterParams filter;         // applied to the raw recording first
  double tonic_cutoff_hz = 0.01;  // first-order low-pass isolating the tonic level
};

struct TonicPhasic {
  Recording filtered;
  Recording tonic;
  Recording phasic;  // filtered - tonic
};

// Requires an EDA recording (InvalidChannel otherwise).
TonicPhasic tonic_phasic_split(const Recording& rec, const EdaSplitParams& params = {});

struct EdaWindow {
  std::size_t start_index = 0;
  std::vector<double> samples;
};

// Consecutive non-overlapping windows of round(fs * window_s) samples; the
// trailing partial window is dropped.
std::vector<EdaWindow> window_series(const Recording& rec, double window_s = 1.0);

double petrosian_fd(std::span<const double> x);
double higuchi_fd(std::span<const double> x, int kmax = 10);
double katz_fd(std::span<const double> x);

// 10 geometric points between 4 and n/4, rounded, duplicates removed.
std::vector<std::size_t> default_dfa_scales(std::size_t n);
double dfa_alpha(std::span<const double> x, std::span<const std::size_t> scales);
double dfa_alpha(std::span<const double> x);

struct Hjorth {
  double activity = 0.0;
  double mobility = 0.0;
  double complexity = 0.0;
};

// Population variance of x (never throws for length >= 1).
double hjorth_activity(std::span<const double> x);
// Throws DegenerateInput when x or its first difference is (numerically)
// constant, since mobility or complexity is then undefined.
Hjorth hjorth(std::span<const double> x);

// Normalized Shannon entropy of the periodogram, DC excluded, bins 1..n/2.
double spectral_entropy(std::span<const double> x, double sample_rate_hz);

// Normalized ordinal-pattern entropy; ties keep order of occurrence.
double permutation_entropy(std::span<const double> x, int order = 3, int delay = 1);

struct EdaFeatureParams {
  int higuchi_kmax = 10;
  int permutation_order = 3;
  int permutation_delay = 1;
};

struct EdaFeatures {
  std::vector<std::string> names;
  std::vector<double> values;  // NaN marks an absent value
  bool hjorth_absent = false;  // mobility/complexity undefined for this window

  double at(std::string_view name) const;
};

// All 15 features for one window. Needs at least 32 samples.
EdaFeatures extract_eda_features(std::span<const double> window, double sample_rate_hz,
                                 const EdaFeatureParams& params = {});
EdaFeatures extract_eda_features(const EdaWindow& window, double sample_rate_hz,
                                 const EdaFeatureParams& params = {});

}  // namespace blinkforge
