#pragma once

#include <span>
#include <string_view>
#include <vector>

namespace blinkforge {

enum class Channel { EOG, EDA };

std::string_view to_string(Channel channel) noexcept;
Channel channel_from_string(std::string_view name);

// Uniformly sampled time series. Values are volts for EOG and microsiemens
// for EDA. Construction validates: rate > 0, at least two samples, all finite.
class Recording {
 public:
  Recording(double sample_rate_hz, std::vector<double> samples, Channel channel);

  double sample_rate_hz() const noexcept { return sample_rate_hz_; }
  double dt() const noexcept { return 1.0 / sample_rate_hz_; }
  Channel channel() const noexcept { return channel_; }

  std::span<const double> samples() const noexcept { return samples_; }
  const std::vector<double>& values() const noexcept { return samples_; }
  std::size_t size() const noexcept { return samples_.size(); }
  double duration_s() const noexcept {
    return static_cast<double>(samples_.size()) / sample_rate_hz_;
  }

  // Seconds -> nearest sample count (at least 1).
  std::size_t samples_for(double seconds) const;

  // Same rate and channel, new samples.
  Recording with_samples(std::vector<double> samples) const;

 private:
  double sample_rate_hz_;
  std::vector<double> samples_;
  Channel channel_;
};

}  // namespace blinkforge
