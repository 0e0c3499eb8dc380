#pragma once

#include "blinkforge/recording.hpp"

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace blinkforge {

// One biquad: b0 b1 b2 / 1 a1 a2 (a0 normalized to 1).
struct Biquad {
  std::array<double, 3> b{};
  std::array<double, 3> a{1.0, 0.0, 0.0};
};

// Digital low-pass Butterworth as cascaded second-order sections, designed
// with the bilinear transform and cutoff prewarping. Odd orders carry one
// first-order section (b2 = a2 = 0). DC gain is exactly 1.
std::vector<Biquad> butterworth_lowpass_sos(int order, double cutoff_hz,
                                            double sample_rate_hz);

// Exact magnitude response of the digital design above at frequency f:
// 1 / sqrt(1 + (tan(pi f / fs) / tan(pi fc / fs))^(2n)).
double butterworth_digital_magnitude(int order, double cutoff_hz,
                                     double sample_rate_hz, double f_hz);

// Classic analog prototype response 1 / sqrt(1 + (f / fc)^(2n)).
double butterworth_analog_magnitude(int order, double cutoff_hz, double f_hz);

enum class FilterMode { ZeroPhase, SinglePass };

// Low-pass Butterworth. Input is extended by odd reflection about the edge
// samples and every section starts from its steady state for the first
// (padded) value, which removes startup transients on short trials.
// ZeroPhase runs forward then backward (squared magnitude, no delay).
Recording butterworth_lowpass(const Recording& rec, int order, double cutoff_hz,
                              FilterMode mode = FilterMode::ZeroPhase);
std::vector<double> butterworth_lowpass(std::span<const double> x,
                                        double sample_rate_hz, int order,
                                        double cutoff_hz,
                                        FilterMode mode = FilterMode::ZeroPhase);

// Savitzky-Golay smoothing: every output is the center value of the
// least-squares polynomial fitted over the sliding window. Samples closer
// than half a window to an edge are fitted on the truncated window.
Recording savitzky_golay(const Recording& rec, std::size_t window_samples,
                         int polyorder);
std::vector<double> savitzky_golay(std::span<const double> x,
                                   std::size_t window_samples, int polyorder);

// Nearest odd sample count to `seconds` at the given rate (minimum 3).
std::size_t odd_window_samples(double seconds, double sample_rate_hz);

// n-th derivative (n = 1 or 2) by central differences scaled by the sample
// rate; endpoints use one-sided differences. Needs at least 3 samples.
Recording derivative(const Recording& rec, int n);
std::vector<double> derivative(std::span<const double> x, double sample_rate_hz,
                               int n);

// (x - min) / (max - min); all zeros when the input is constant.
std::vector<double> minmax_normalize(std::span<const double> values);

// Defaults for the two pipelines.
struct EogFilterParams {
  int order = 5;
  double cutoff_hz = 10.0;
  double sg_window_s = 0.15;
  int sg_polyorder = 3;
  bool savitzky_golay = true;
  FilterMode mode = FilterMode::ZeroPhase;
};

struct EdaFilterParams {
  int order = 1;
  double cutoff_hz = 1.0;
  FilterMode mode = FilterMode::ZeroPhase;
};

Recording preprocess_eog(const Recording& rec, const EogFilterParams& params = {});
Recording preprocess_eda(const Recording& rec, const EdaFilterParams& params = {});

}  // namespace blinkforge
