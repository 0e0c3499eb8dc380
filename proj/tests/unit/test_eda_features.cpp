#include "blinkforge/eda_features.hpp"
#include "blinkforge/peaks.hpp"
#include "blinkforge/synth.hpp"

#include "../oracles/reference.hpp"
#include "support.hpp"

#include <numbers>

using namespace blinkforge;

TEST_CASE("features match the reference implementation on random windows") {
  blinkforge::Rng rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 32 + rng.below(200);
    std::vector<double> x(n);
    double walk = rng.uniform(1, 10);
    const bool smooth = trial % 2 == 0;
    for (double& v : x) v = smooth ? (walk += 0.05 * rng.normal()) : rng.normal();
    const double fs = rng.uniform(4, 64);
    const auto got = extract_eda_features(x, fs);
    const auto want = oracle::eda_features(x, fs);
    REQUIRE(got.values.size() == 15);
    for (std::size_t i = 0; i < 15; ++i)
      CHECK_MESSAGE(testing::close(got.values[i], want.values[i], 1e-9), got.names[i],
                    " got ", got.values[i], " want ", want.values[i]);
  }
}

TEST_CASE("closed forms") {
  std::vector<double> line(100);
  for (std::size_t i = 0; i < line.size(); ++i) line[i] = 0.3 * i;
  CHECK(petrosian_fd(line) == doctest::Approx(1.0));
  CHECK(katz_fd(line) == doctest::Approx(1.0));
  CHECK(permutation_entropy(line) == 0.0);
  std::vector<double> alt(100);
  for (std::size_t i = 0; i < alt.size(); ++i) alt[i] = i % 2;
  CHECK(permutation_entropy(alt) == doctest::Approx(1.0 / std::log2(6.0)));
}

TEST_CASE("hjorth mobility of a sine") {
  const double fs = 100.0, f = 2.0;
  std::vector<double> x(1000);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::sin(2.0 * std::numbers::pi * f * i / fs);
  const auto h = hjorth(x);
  CHECK(h.activity == doctest::Approx(0.5).epsilon(0.01));
  CHECK(std::abs(h.mobility - 2.0 * std::numbers::pi * f / fs) / (2.0 * std::numbers::pi * f / fs) < 0.02);
  CHECK(h.complexity == doctest::Approx(1.0).epsilon(0.02));
  CHECK_ERROR_KIND(hjorth(std::vector<double>(50, 1.0)), ErrorKind::DegenerateInput);
  CHECK(hjorth_activity(std::vector<double>(50, 1.0)) == 0.0);
}

TEST_CASE("dfa exponents of white noise and a random walk") {
  blinkforge::Rng rng(32);
  double white = 0, walk = 0;
  for (int r = 0; r < 5; ++r) {
    std::vector<double> w(4000), s(4000);
    double acc = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      w[i] = rng.normal();
      s[i] = acc += w[i];
    }
    white += dfa_alpha(w) / 5;
    walk += dfa_alpha(s) / 5;
  }
  CHECK(std::abs(white - 0.5) <= 0.1);
  CHECK(std::abs(walk - 1.5) <= 0.1);
  CHECK(default_dfa_scales(400) == oracle::dfa_scales(400));
}

TEST_CASE("spectral entropy of a pure tone is minimal") {
  const std::size_t n = 64;
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = std::cos(2.0 * std::numbers::pi * 4.0 * i / n);
  CHECK(spectral_entropy(x, 10.0) == doctest::Approx(0.0).epsilon(1e-9));
  for (std::size_t i = 0; i < n; ++i) x[i] += std::cos(2.0 * std::numbers::pi * 9.0 * i / n);
  CHECK(spectral_entropy(x, 10.0) == doctest::Approx(1.0 / std::log2(32.0)));
}

TEST_CASE("higuchi of white noise is near two") {
  blinkforge::Rng rng(33);
  std::vector<double> x(2000);
  for (double& v : x) v = rng.normal();
  CHECK(higuchi_fd(x) == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("constant window marks hjorth as absent") {
  const auto f = extract_eda_features(std::vector<double>(40, 3.0), 16.0);
  CHECK(f.hjorth_absent);
  CHECK(std::isnan(f.at("Hjorth Mobility")));
  CHECK(std::isnan(f.at("Hjorth Complexity")));
  CHECK(f.at("Signal Mean") == 3.0);
  CHECK_ERROR_KIND(extract_eda_features(std::vector<double>(10, 3.0), 16.0), ErrorKind::InvalidInput);
}

TEST_CASE("tonic phasic split recovers a slow level and fast bumps") {
  SynthSpec spec = default_eda_spec();
  spec.seed = 34;
  spec.duration_s = 300;
  const auto session = synth_eda_session(spec);
  const auto split = tonic_phasic_split(session.recording);
  const auto& p = split.phasic.values();
  const auto& f = split.filtered.values();
  const auto& t = split.tonic.values();
  for (std::size_t i = 0; i < p.size(); ++i) CHECK(p[i] == doctest::Approx(f[i] - t[i]));

  // Phasic correlates with the noiseless SCR train.
  SynthSpec clean = spec;
  clean.noise_sigma = 0;
  clean.drift_amplitude = 0;
  clean.events = plan_events(spec, EventKind::Scr);
  const auto bumps = synth_eda_session(clean).recording.values();
  const double base = bumps.front();
  double sxy = 0, sxx = 0, syy = 0, mx = 0, my = 0;
  const std::size_t from = 16 * 60;
  for (std::size_t i = from; i < p.size(); ++i) {
    mx += p[i];
    my += bumps[i] - base;
  }
  mx /= static_cast<double>(p.size() - from);
  my /= static_cast<double>(p.size() - from);
  for (std::size_t i = from; i < p.size(); ++i) {
    const double a = p[i] - mx, b = bumps[i] - base - my;
    sxy += a * b;
    sxx += a * a;
    syy += b * b;
  }
  CHECK(sxy / std::sqrt(sxx * syy) > 0.9);
  CHECK_ERROR_KIND(tonic_phasic_split(Recording(16.0, std::vector<double>(100, 0.0), Channel::EOG)),
                   ErrorKind::InvalidChannel);
}

TEST_CASE("phasic of an event-free session is small") {
  SynthSpec spec = default_eda_spec();
  spec.seed = 35;
  spec.duration_s = 300;
  spec.event_rate_hz = 0;
  spec.drift_amplitude = 0;
  const auto split = tonic_phasic_split(synth_eda_session(spec).recording);
  double ss = 0;
  const auto& p = split.phasic.values();
  const std::size_t from = 16 * 60;
  for (std::size_t i = from; i < p.size(); ++i) ss += p[i] * p[i];
  CHECK(std::sqrt(ss / static_cast<double>(p.size() - from)) < 2.0 * spec.noise_sigma);
}

TEST_CASE("five separated scrs are counted") {
  SynthSpec spec = default_eda_spec();
  spec.noise_sigma = 0;
  spec.drift_amplitude = 0;
  spec.duration_s = 120;
  for (int k = 0; k < 5; ++k) spec.events.push_back({EventKind::Scr, 10.0 + 20.0 * k, 0.5, 1.0, 0.35});
  const auto split = tonic_phasic_split(synth_eda_session(spec).recording);
  CHECK(count_scr(split.phasic.values()) == 5);
}

TEST_CASE("windowing drops the partial tail") {
  Recording r(10.0, std::vector<double>(95, 1.0), Channel::EDA);
  const auto w = window_series(r, 2.0);
  REQUIRE(w.size() == 4);
  CHECK(w[3].start_index == 60);
  CHECK(w[3].samples.size() == 20);
}

TEST_CASE("constant input splits into a flat tonic and zero phasic") {
  const auto split = tonic_phasic_split(Recording(16.0, std::vector<double>(400, 5.0), Channel::EDA));
  for (double v : split.tonic.values()) CHECK(v == doctest::Approx(5.0).epsilon(1e-12));
  for (double v : split.phasic.values()) CHECK(std::abs(v) < 1e-12);
}
