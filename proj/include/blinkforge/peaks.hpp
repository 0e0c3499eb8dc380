#pragma once

#include "blinkforge/recording.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace blinkforge {

struct PeakCandidate {
  std::size_t center_index = 0;
  double height = 0.0;      // value at the center (volts)
  double prominence = 0.0;  // volts
  double width_s = 0.0;     // width at half prominence, seconds
};

struct PeakSegment {
  PeakCandidate candidate;
  std::size_t left_base_index = 0;
  std::size_t right_base_index = 0;
  std::vector<double> slice;  // samples on [left_base_index, right_base_index]
  bool edge_truncated = false;

  std::size_t center_offset() const noexcept {
    return candidate.center_index - left_base_index;
  }
};

struct SearchParams {
  double prominence_min = 0.1;
  double width_min_s = 0.04;
  double width_max_s = 0.5;
  double height_min = 0.05;
  double baseline_window_s = 0.5;

  void validate() const;
};

// Indices of local maxima. A run of equal samples counts once, at its
// leftmost sample, when both neighbours of the run are strictly lower.
std::vector<std::size_t> local_maxima(std::span<const double> x);

struct Prominence {
  double prominence = 0.0;
  std::size_t left_base = 0;
  std::size_t right_base = 0;
};

// Topographic prominence of x[peak]: height above the higher of the two
// lowest points reached on each side before meeting a strictly higher
// sample (or the signal end).
Prominence peak_prominence(std::span<const double> x, std::size_t peak);

// Width in samples at height x[peak] - rel_height * prominence, with linear
// interpolation of the crossing points, bounded by the prominence bases.
double peak_width_samples(std::span<const double> x, std::size_t peak,
                          const Prominence& prom, double rel_height = 0.5);

// Local maxima with prominence >= prominence_min and half-prominence width
// >= width_min_s, ordered by index.
std::vector<PeakCandidate> detect_peaks(const Recording& rec,
                                        const SearchParams& params = {});

// Literature blink criteria: width_s <= width_max_s and height >= height_min.
std::vector<PeakCandidate> blink_prefilter(std::span<const PeakCandidate> cands,
                                           const SearchParams& params = {});
bool passes_blink_prefilter(const PeakCandidate& cand, const SearchParams& params = {});

struct MinimumSearch {
  std::size_t index = 0;
  int depth = 0;  // number of recursive calls, including the first
};

// Recursive strided minimum search starting at p. The sign of `window`
// selects the direction; `max_points` bounds the stride loop.
MinimumSearch find_nearby_minimum_traced(std::span<const double> x, std::size_t p,
                                         long window, long max_points);
std::size_t find_nearby_minimum(std::span<const double> x, std::size_t p,
                                long window, long max_points);

// Baselines on both sides of a detected candidate.
PeakSegment segment_peak(const Recording& rec, const PeakCandidate& cand,
                         const SearchParams& params = {});

// detect -> prefilter (optional) -> segment.
std::vector<PeakSegment> segment_all(const Recording& filtered,
                                     const SearchParams& params = {},
                                     bool apply_prefilter = true);

// Phasic SCR count: peaks higher than `threshold` whose prominence also
// exceeds it.
std::size_t count_scr(std::span<const double> phasic, double threshold = 0.01);

}  // namespace blinkforge
