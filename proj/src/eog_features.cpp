#include "blinkforge/eog_features.hpp"

#include "blinkforge/error.hpp"
#include "blinkforge/signal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace blinkforge {
namespace eog {

const std::array<std::string_view, kFeatureCount>& catalog() {
  static const std::array<std::string_view, kFeatureCount> names = {
      kSignalHeight,          kXAxisDeviation,           kYAxisDeviation,
      kSymmetryRatio,         kClosingSignalRange,       kOpeningSignalRange,
      kClosingDuration,       kClosingDynamicsRatio,     kBlinkDuration,
      kClosingTentDuration,   kOpeningTentDuration,      kClosingTentProportion,
      kOpeningTentProportion, kHalfCloseDuration,        kFullCloseDuration,
      kFullClosePercentage,   kOpeningAccelToPeak,       kVelocityRecoveryDuration,
      kClosingTentToMaxVelocity, kMaxVelocityToPeak,     kSlopeClosingTent,
      kSlopeOpeningTent,      kSlopeAtClosingMaxAccel,   kPhaseVelocityRatio,
      kInitialBlinkEnergy,    kClosingPhaseEnergy,       kOpeningPhaseEnergy,
      kClosingPhaseSlopeEnergy, kClosingPhaseVelocityEnergy, kOpeningPhaseVelocityEnergy,
      kSignalAverage,         kAccelerationStd,          kVelocityEntropy,
      kAccelerationEntropy,   kSignalEntropy,            kMaxAccelVelocityRatio,
  };
  return names;
}

std::vector<std::string> feature_names(bool normalize) {
  std::vector<std::string> out;
  for (auto n : catalog()) {
    if (normalize && n == kSignalHeight) continue;
    out.emplace_back(n);
  }
  return out;
}

const std::array<std::string_view, 5>& culling_five() {
  static const std::array<std::string_view, 5> names = {
      kVelocityEntropy, kSignalEntropy, kSlopeAtClosingMaxAccel, kBlinkDuration,
      kMaxAccelVelocityRatio};
  return names;
}

}  // namespace eog

namespace {

// Extremum over [lo, hi] with near-ties (within 1e-9 of the local scale)
// resolved toward the sample nearest `center`.
std::size_t extremum_near(std::span<const double> v, std::size_t lo, std::size_t hi,
                          std::size_t center, bool want_max) {
  double best = v[lo], scale = 0.0;
  for (std::size_t i = lo; i <= hi; ++i) {
    best = want_max ? std::max(best, v[i]) : std::min(best, v[i]);
    scale = std::max(scale, std::fabs(v[i]));
  }
  const double tol = 1e-9 * scale;
  std::size_t pick = lo;
  std::size_t pick_dist = static_cast<std::size_t>(-1);
  for (std::size_t i = lo; i <= hi; ++i) {
    const bool tied = want_max ? v[i] >= best - tol : v[i] <= best + tol;
    if (!tied) continue;
    const std::size_t dist = i > center ? i - center : center - i;
    if (dist < pick_dist) {
      pick = i;
      pick_dist = dist;
    }
  }
  return pick;
}

double trapz(std::span<const double> y, std::size_t lo, std::size_t hi, double dt) {
  if (hi <= lo) return 0.0;
  double acc = 0.0;
  for (std::size_t i = lo; i < hi; ++i) acc += 0.5 * (y[i] + y[i + 1]);
  return acc * dt;
}

double population_std(std::span<const double> v) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size()));
}

// First crossing of `level` walking outward from `from` (exclusive) in
// direction `dir`, linearly interpolated; falls back to the slice end.
double crossing_time(std::span<const double> y, std::size_t from, int dir, double level,
                     double dt) {
  const std::size_t n = y.size();
  if (dir < 0) {
    for (std::size_t j = from; j-- > 0;) {
      if (y[j] <= level) {
        const double frac = y[j + 1] != y[j] ? (level - y[j]) / (y[j + 1] - y[j]) : 0.0;
        return (static_cast<double>(j) + frac) * dt;
      }
    }
    return 0.0;
  }
  for (std::size_t j = from + 1; j < n; ++j) {
    if (y[j] <= level) {
      const double frac = y[j - 1] != y[j] ? (y[j - 1] - level) / (y[j - 1] - y[j]) : 0.0;
      return (static_cast<double>(j - 1) + frac) * dt;
    }
  }
  return static_cast<double>(n - 1) * dt;
}

void check_segment(std::span<const double> slice, std::size_t center) {
  if (slice.size() < 5)
    fail(ErrorKind::InvalidSegment, "segment needs at least 5 samples");
  if (center == 0 || center + 1 >= slice.size())
    fail(ErrorKind::InvalidSegment, "segment center must be interior");
  if (!(slice[center] > slice.front() && slice[center] > slice.back()))
    fail(ErrorKind::DegenerateShape, "segment center is not above both bases");
}

}  // namespace

TentGeometry tent_geometry(std::span<const double> y, std::size_t c, double fs) {
  check_segment(y, c);
  const double dt = 1.0 / fs;
  const auto v = derivative(y, fs, 1);
  const std::size_t last = y.size() - 1;
  const std::size_t up = extremum_near(v, 0, c, c, true);
  const std::size_t down = extremum_near(v, c, last, c, false);
  const double s1 = v[up], s2 = v[down];
  if (!(s1 > 0.0) || !(s2 < 0.0))
    fail(ErrorKind::DegenerateShape, "tent tangents do not form a peak");

  TentGeometry g;
  g.up_anchor = {static_cast<double>(up) * dt, y[up]};
  g.down_anchor = {static_cast<double>(down) * dt, y[down]};
  g.up_tangent = {s1, g.up_anchor.v - s1 * g.up_anchor.t};
  g.down_tangent = {s2, g.down_anchor.v - s2 * g.down_anchor.t};
  const double t = (g.down_tangent.intercept - g.up_tangent.intercept) / (s1 - s2);
  g.apex = {t, g.up_tangent.at(t)};
  g.peak = {static_cast<double>(c) * dt, y[c]};
  return g;
}

TentGeometry tent_geometry(const PeakSegment& seg, double sample_rate_hz) {
  return tent_geometry(seg.slice, seg.center_offset(), sample_rate_hz);
}

double BlinkFeatures::at(std::string_view name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return values[i];
  fail(ErrorKind::ConfigError, "unknown EOG feature '" + std::string(name) + "'");
}

BlinkFeatures extract_eog_features(std::span<const double> raw, std::size_t c, double fs,
                                   bool normalize, bool edge_truncated) {
  check_segment(raw, c);
  const std::vector<double> y =
      normalize ? minmax_normalize(raw) : std::vector<double>(raw.begin(), raw.end());
  const std::size_t last = y.size() - 1;
  const double dt = 1.0 / fs;
  const auto t = [dt](std::size_t i) { return static_cast<double>(i) * dt; };

  const auto v = derivative(y, fs, 1);
  const auto a = derivative(y, fs, 2);
  const TentGeometry tent = tent_geometry(y, c, fs);

  const std::size_t iv_max = extremum_near(v, 0, c, c, true);
  const std::size_t iv_min = extremum_near(v, c, last, c, false);
  const std::size_t ia_close = extremum_near(a, 0, c, c, true);
  const std::size_t ia_open = extremum_near(a, c, last, c, true);

  const double y_min = *std::min_element(y.begin(), y.end());
  const double height = y[c] - y_min;
  const double duration = t(last);

  // Zero band for "first derivative approaches zero" around the peak.
  double v_abs_max = 0.0;
  for (double d : v) v_abs_max = std::max(v_abs_max, std::fabs(d));
  const double zero_band = 0.05 * v_abs_max;
  std::size_t close_end = c;
  for (std::size_t i = iv_max; i <= c; ++i) {
    if (std::fabs(v[i]) < zero_band) {
      close_end = i;
      break;
    }
  }
  std::size_t open_start = c;
  for (std::size_t i = iv_min + 1; i-- > c;) {
    if (std::fabs(v[i]) < zero_band) {
      open_start = i;
      break;
    }
  }

  const double x_dev = tent.apex.t - tent.peak.t;
  const double y_dev = tent.apex.v - tent.peak.v;
  const double half_level = y_min + 0.5 * height;
  const double half_close =
      crossing_time(y, c, +1, half_level, dt) - crossing_time(y, c, -1, half_level, dt);
  const double full_close = t(open_start) - t(close_end);
  const double recovery = crossing_time(y, c, +1, y[iv_max], dt) - t(iv_max);

  double zero_cross = t(c);
  for (std::size_t j = iv_max + 1; j <= last; ++j) {
    if (v[j] <= 0.0) {
      zero_cross = t(j - 1) + v[j - 1] / (v[j - 1] - v[j]) * dt;
      break;
    }
  }

  const std::size_t initial =
      std::max<std::size_t>(2, static_cast<std::size_t>(std::lround(0.05 * y.size())));
  double mean = 0.0;
  for (double s : y) mean += s;
  mean /= static_cast<double>(y.size());
  const double open_speed = std::fabs(v[iv_min]);

  BlinkFeatures out;
  out.normalized = normalize;
  out.edge_truncated = edge_truncated;
  const auto put = [&out](std::string_view name, double value) {
    out.names.emplace_back(name);
    out.values.push_back(value);
  };

  using namespace eog;
  if (!normalize) put(kSignalHeight, height);
  put(kXAxisDeviation, x_dev);
  put(kYAxisDeviation, y_dev);
  put(kSymmetryRatio, std::fabs(y_dev) > 1e-9 * height ? x_dev / y_dev : 0.0);
  put(kClosingSignalRange, y[close_end] - y[0]);
  put(kOpeningSignalRange, y[open_start] - y[last]);
  put(kClosingDuration, t(c) - t(iv_max));
  put(kClosingDynamicsRatio, v[iv_max] / height);
  put(kBlinkDuration, duration);
  put(kClosingTentDuration, t(iv_max));
  put(kOpeningTentDuration, t(last) - t(c));
  put(kClosingTentProportion, t(iv_max) / duration);
  put(kOpeningTentProportion, (t(last) - t(c)) / duration);
  put(kHalfCloseDuration, half_close);
  put(kFullCloseDuration, full_close);
  put(kFullClosePercentage, 100.0 * full_close / duration);
  put(kOpeningAccelToPeak, t(c) - t(ia_close));
  put(kVelocityRecoveryDuration, recovery);
  put(kClosingTentToMaxVelocity, t(ia_close));
  put(kMaxVelocityToPeak, zero_cross - t(iv_max));
  put(kSlopeClosingTent, iv_max > 0 ? (y[iv_max] - y[0]) / t(iv_max) : v[0]);
  put(kSlopeOpeningTent,
      iv_min < last ? (y[last] - y[iv_min]) / (t(last) - t(iv_min)) : v[last]);
  put(kSlopeAtClosingMaxAccel, v[ia_close]);
  put(kPhaseVelocityRatio, v[iv_max] / open_speed);
  put(kInitialBlinkEnergy, trapz(y, 0, std::min(initial, y.size()) - 1, dt));
  put(kClosingPhaseEnergy, trapz(y, 0, c, dt));
  put(kOpeningPhaseEnergy, trapz(y, c, last, dt));
  put(kClosingPhaseSlopeEnergy, trapz(v, 0, iv_max, dt));
  put(kClosingPhaseVelocityEnergy, trapz(y, iv_max, c, dt));
  put(kOpeningPhaseVelocityEnergy, trapz(y, c, iv_min, dt));
  put(kSignalAverage, mean);
  put(kAccelerationStd, population_std(a));
  put(kVelocityEntropy, histogram_entropy(v));
  put(kAccelerationEntropy, histogram_entropy(a));
  put(kSignalEntropy, histogram_entropy(y));
  put(kMaxAccelVelocityRatio, a[ia_open] / open_speed);
  return out;
}

BlinkFeatures extract_eog_features(const PeakSegment& seg, double sample_rate_hz,
                                   bool normalize) {
  return extract_eog_features(seg.slice, seg.center_offset(), sample_rate_hz, normalize,
                              seg.edge_truncated);
}

double histogram_entropy(std::span<const double> values, int bins) {
  if (values.size() < 2) fail(ErrorKind::InvalidInput, "entropy needs at least 2 values");
  if (bins < 1) fail(ErrorKind::InvalidArgument, "bin count must be positive");
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double min = *lo, range = *hi - *lo;
  if (range == 0.0) return 0.0;

  std::vector<std::size_t> counts(static_cast<std::size_t>(bins), 0);
  for (double x : values) {
    auto b = static_cast<long>(std::floor((x - min) / range * bins));
    b = std::clamp(b, 0L, static_cast<long>(bins) - 1);
    ++counts[static_cast<std::size_t>(b)];
  }
  const double n = static_cast<double>(values.size());
  double h = 0.0;
  for (std::size_t k : counts) {
    if (k == 0) continue;
    const double p = static_cast<double>(k) / n;
    h -= p * std::log2(p);
  }
  return h;
}

}  // namespace blinkforge
