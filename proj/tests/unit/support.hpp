#pragma once

#include "blinkforge/error.hpp"
#include "blinkforge/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

namespace testing {

#define CHECK_ERROR_KIND(expr, expected_kind)                       \
  do {                                                              \
    bool thrown_ = false;                                           \
    try {                                                           \
      (void)(expr);                                                 \
    } catch (const blinkforge::Error& e_) {                         \
      thrown_ = true;                                               \
      CHECK_MESSAGE(e_.kind() == (expected_kind), e_.what());       \
    }                                                               \
    CHECK_MESSAGE(thrown_, "expected blinkforge::Error");           \
  } while (0)

inline bool close(double a, double b, double tol) {
  if (std::isnan(a) || std::isnan(b)) return std::isnan(a) && std::isnan(b);
  return std::abs(a - b) <= tol * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

// Smooth random signal: a handful of random sinusoids plus a small ramp.
inline std::vector<double> smooth_signal(blinkforge::Rng& rng, std::size_t n, double fs) {
  std::vector<double> x(n, 0.0);
  const int tones = 3 + static_cast<int>(rng.below(4));
  for (int k = 0; k < tones; ++k) {
    const double f = rng.uniform(0.2, 4.0), a = rng.uniform(0.1, 1.0), ph = rng.uniform(0, 6.28);
    for (std::size_t i = 0; i < n; ++i) x[i] += a * std::sin(2.0 * M_PI * f * i / fs + ph);
  }
  const double ramp = rng.uniform(-0.5, 0.5);
  for (std::size_t i = 0; i < n; ++i) x[i] += ramp * i / static_cast<double>(n);
  return x;
}

}  // namespace testing
