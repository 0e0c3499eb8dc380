#pragma once

#include "blinkforge/peaks.hpp"

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace blinkforge {

// Per-blink feature names. These strings are a public contract: they appear
// verbatim in FeatureFile headers and CullConfig keys.
namespace eog {
inline constexpr std::string_view kSignalHeight = "Signal Height";
inline constexpr std::string_view kXAxisDeviation = "X-Axis Deviation";
inline constexpr std::string_view kYAxisDeviation = "Y-Axis Deviation";
inline constexpr std::string_view kSymmetryRatio = "Symmetry Ratio";
inline constexpr std::string_view kClosingSignalRange = "Closing Signal Range";
inline constexpr std::string_view kOpeningSignalRange = "Opening Signal Range";
inline constexpr std::string_view kClosingDuration = "Closing Duration";
inline constexpr std::string_view kClosingDynamicsRatio = "Closing Dynamics Ratio";
inline constexpr std::string_view kBlinkDuration = "Blink Duration";
inline constexpr std::string_view kClosingTentDuration = "Closing Tent Duration";
inline constexpr std::string_view kOpeningTentDuration = "Opening Tent Duration";
inline constexpr std::string_view kClosingTentProportion = "Closing Tent Duration by Proportion of Blink";
inline constexpr std::string_view kOpeningTentProportion = "Opening Tent Duration by Proportion of Blink";
inline constexpr std::string_view kHalfCloseDuration = "Blink Half-Close Duration";
inline constexpr std::string_view kFullCloseDuration = "Blink Full-Close Duration";
inline constexpr std::string_view kFullClosePercentage = "Full-Close Duration by Percentage of Blink";
inline constexpr std::string_view kOpeningAccelToPeak = "Opening Acceleration to Peak Duration";
inline constexpr std::string_view kVelocityRecoveryDuration = "Velocity Recovery Duration";
inline constexpr std::string_view kClosingTentToMaxVelocity = "Closing Tent Duration to Max Velocity";
inline constexpr std::string_view kMaxVelocityToPeak = "Maximum Velocity to Peak Duration";
inline constexpr std::string_view kSlopeClosingTent = "Slope of Closing Tent";
inline constexpr std::string_view kSlopeOpeningTent = "Slope of Opening Tent";
inline constexpr std::string_view kSlopeAtClosingMaxAccel = "Slope at Closing Tent Maximum Acceleration";
inline constexpr std::string_view kPhaseVelocityRatio = "Blink Phase Velocity Ratio";
inline constexpr std::string_view kInitialBlinkEnergy = "Initial Blink Energy";
inline constexpr std::string_view kClosingPhaseEnergy = "Closing Phase Energy";
inline constexpr std::string_view kOpeningPhaseEnergy = "Opening Phase Energy";
inline constexpr std::string_view kClosingPhaseSlopeEnergy = "Closing Phase Slope Energy";
inline constexpr std::string_view kClosingPhaseVelocityEnergy = "Closing Phase Velocity Energy";
inline constexpr std::string_view kOpeningPhaseVelocityEnergy = "Opening Phase Velocity Energy";
inline constexpr std::string_view kSignalAverage = "Signal Average";
inline constexpr std::string_view kAccelerationStd = "Acceleration Standard Deviation";
inline constexpr std::string_view kVelocityEntropy = "Velocity Entropy";
inline constexpr std::string_view kAccelerationEntropy = "Acceleration Entropy";
inline constexpr std::string_view kSignalEntropy = "Signal Entropy";
inline constexpr std::string_view kMaxAccelVelocityRatio = "Maximum Acceleration Velocity Ratio";

inline constexpr std::size_t kFeatureCount = 36;

// Catalog order. Signal Height comes first and is dropped in normalize mode.
const std::array<std::string_view, kFeatureCount>& catalog();
std::vector<std::string> feature_names(bool normalize);

// The five-feature combination reported as optimal for blink culling.
const std::array<std::string_view, 5>& culling_five();
}  // namespace eog

struct Line {
  double slope = 0.0;
  double intercept = 0.0;  // value at t = 0 (segment start)
  double at(double t) const noexcept { return intercept + slope * t; }
};

struct Point {
  double t = 0.0;  // seconds from the left base
  double v = 0.0;
};

// Triangle formed by the tangents at maximum closing velocity and minimum
// (most negative) opening velocity.
struct TentGeometry {
  Line up_tangent;
  Line down_tangent;
  Point up_anchor;
  Point down_anchor;
  Point apex;
  Point peak;
};

TentGeometry tent_geometry(const PeakSegment& seg, double sample_rate_hz);
TentGeometry tent_geometry(std::span<const double> slice, std::size_t center,
                           double sample_rate_hz);

struct BlinkFeatures {
  std::vector<std::string> names;
  std::vector<double> values;
  bool normalized = false;
  bool edge_truncated = false;

  // Throws ConfigError for unknown names.
  double at(std::string_view name) const;
};

// Extracts the per-blink catalog from a segment slice. With `normalize` the
// slice is min-max scaled to [0, 1] first and Signal Height is omitted.
BlinkFeatures extract_eog_features(const PeakSegment& seg, double sample_rate_hz,
                                   bool normalize);
BlinkFeatures extract_eog_features(std::span<const double> slice, std::size_t center,
                                   double sample_rate_hz, bool normalize,
                                   bool edge_truncated = false);

// Shannon entropy (bits) of the histogram over [min, max] with `bins` bins.
double histogram_entropy(std::span<const double> values, int bins = 10);

}  // namespace blinkforge
