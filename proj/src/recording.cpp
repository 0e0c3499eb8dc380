#include "blinkforge/recording.hpp"

#include "blinkforge/error.hpp"

#include <cmath>
#include <string>

namespace blinkforge {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::InvalidInput: return "invalid-input";
    case ErrorKind::InvalidChannel: return "invalid-channel";
    case ErrorKind::InvalidSegment: return "invalid-segment";
    case ErrorKind::DegenerateShape: return "degenerate-shape";
    case ErrorKind::DegenerateInput: return "degenerate-input";
    case ErrorKind::ConfigError: return "config-error";
    case ErrorKind::InvalidResponse: return "invalid-response";
    case ErrorKind::SingularDesign: return "singular-design";
    case ErrorKind::TooManyFeatures: return "too-many-features";
    case ErrorKind::ParseError: return "parse-error";
  }
  return "unknown";
}

std::string_view to_string(Channel channel) noexcept {
  return channel == Channel::EOG ? "EOG" : "EDA";
}

Channel channel_from_string(std::string_view name) {
  if (name == "EOG") return Channel::EOG;
  if (name == "EDA") return Channel::EDA;
  fail(ErrorKind::InvalidArgument, "unknown channel '" + std::string(name) + "'");
}

Recording::Recording(double sample_rate_hz, std::vector<double> samples,
                     Channel channel)
    : sample_rate_hz_(sample_rate_hz), samples_(std::move(samples)), channel_(channel) {
  if (!(sample_rate_hz_ > 0.0) || !std::isfinite(sample_rate_hz_))
    fail(ErrorKind::InvalidArgument, "sample rate must be positive");
  if (samples_.size() < 2)
    fail(ErrorKind::InvalidInput, "recording needs at least 2 samples");
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    if (!std::isfinite(samples_[i]))
      fail(ErrorKind::InvalidInput,
           "non-finite sample at index " + std::to_string(i));
  }
}

std::size_t Recording::samples_for(double seconds) const {
  const double n = std::round(seconds * sample_rate_hz_);
  return n < 1.0 ? 1 : static_cast<std::size_t>(n);
}

Recording Recording::with_samples(std::vector<double> samples) const {
  return Recording(sample_rate_hz_, std::move(samples), channel_);
}

}  // namespace blinkforge
