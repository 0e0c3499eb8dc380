#pragma once

#include <array>
#include <cstdint>

namespace blinkforge {

// xoshiro256** seeded through splitmix64, so every platform draws the same
// stream for a given seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next() noexcept;
  double uniform() noexcept;  // [0, 1), 53 random bits
  double uniform(double lo, double hi) noexcept;
  double normal() noexcept;   // Box-Muller
  double exponential(double rate) noexcept;
  std::uint64_t below(std::uint64_t n) noexcept;  // [0, n), n > 0

 private:
  std::array<std::uint64_t, 4> s_{};
  double spare_ = 0.0;
  bool has_spare_ = false;
};

std::uint64_t splitmix64(std::uint64_t& state) noexcept;

}  // namespace blinkforge
