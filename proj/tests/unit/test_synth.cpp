#include "blinkforge/peaks.hpp"
#include "blinkforge/rng.hpp"
#include "blinkforge/signal.hpp"
#include "blinkforge/synth.hpp"

#include "support.hpp"

using namespace blinkforge;

TEST_CASE("rng is reproducible and well distributed") {
  Rng a(7), b(7), c(8);
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
  CHECK(Rng(7).next() != c.next());
  Rng r(9);
  double sum = 0, sq = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double z = r.normal();
    sum += z;
    sq += z * z;
  }
  CHECK(std::abs(sum / n) < 0.01);
  CHECK(std::abs(sq / n - 1.0) < 0.02);
  for (int i = 0; i < 1000; ++i) {
    const double u = r.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(r.below(7) < 7);
  }
}

TEST_CASE("splitmix64 reference values") {
  std::uint64_t s = 0;
  CHECK(splitmix64(s) == 0xe220a8397b1dcdafULL);
  CHECK(splitmix64(s) == 0x6e789e6aa1b965f4ULL);
}

TEST_CASE("blink template shape") {
  CHECK(blink_template(0.0, 0.3, 0.35) == doctest::Approx(1.0));
  CHECK(blink_template(-0.2, 0.3, 0.35) == 0.0);
  CHECK(blink_template(-0.05, 0.3, 0.35) > 0.0);
  CHECK(blink_template(0.05, 0.3, 0.35) < 1.0);
  CHECK(blink_template(1.0, 0.3, 0.35) < 1e-6);
}

TEST_CASE("poisson event counts match the configured rate") {
  SynthSpec spec = default_blink_spec();
  spec.duration_s = 300.0;
  const double expected = spec.event_rate_hz * (300.0 - 2.5);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    spec.seed = seed;
    const auto plan = plan_events(spec, EventKind::Blink);
    CHECK(std::abs(static_cast<double>(plan.size()) - expected) <= 3.0 * std::sqrt(expected));
  }
}

TEST_CASE("sessions are deterministic per seed") {
  SynthSpec spec = default_blink_spec();
  spec.seed = 77;
  const auto a = synth_blink_session(spec), b = synth_blink_session(spec);
  CHECK(a.recording.values() == b.recording.values());
  spec.seed = 78;
  CHECK(synth_blink_session(spec).recording.values() != a.recording.values());
  const auto w1 = synth_wire_session(default_wire_spec());
  const auto w2 = synth_wire_session(default_wire_spec());
  CHECK(w1.recording.values() == w2.recording.values());
}

TEST_CASE("truth matches the rendered peaks") {
  SynthSpec spec = default_blink_spec();
  spec.noise_sigma = 0.0;
  spec.events = {{EventKind::Blink, 5.0, 0.6, 0.3, 0.35}};
  spec.duration_s = 10.0;
  const auto s = synth_blink_session(spec);
  REQUIRE(s.truth.size() == 1);
  CHECK(s.truth[0].center_index == 500);
  CHECK(s.recording.values()[500] == doctest::Approx(0.6));
  CHECK(s.truth[0].start_s < 5.0);
  CHECK(s.truth[0].end_s > 5.0);
}

TEST_CASE("mixed sessions contain both kinds and label them") {
  SynthSpec spec = default_blink_spec();
  spec.seed = 5;
  spec.duration_s = 300;
  const auto s = synth_mixed_session(spec, default_wire_spec());
  std::size_t blinks = 0, wires = 0;
  for (const auto& t : s.truth) (t.kind == EventKind::Blink ? blinks : wires)++;
  CHECK(blinks > 100);
  CHECK(wires > 30);
  for (std::size_t i = 1; i < s.truth.size(); ++i) CHECK(s.truth[i - 1].time_s <= s.truth[i].time_s);
  const auto cands = detect_peaks(preprocess_eog(s.recording));
  const auto labels = label_candidates(cands, s.truth, 100.0);
  CHECK(labels.size() == cands.size());
  std::size_t positives = 0;
  for (bool l : labels) positives += l;
  CHECK(positives > 80);
  CHECK(positives < cands.size());
}

TEST_CASE("eda sessions use the eda channel around the tonic level") {
  const auto s = synth_eda_session(default_eda_spec());
  CHECK(s.recording.channel() == Channel::EDA);
  double mean = 0;
  for (double v : s.recording.values()) mean += v / static_cast<double>(s.recording.size());
  CHECK(mean > 4.5);
  CHECK(mean < 7.0);
}

TEST_CASE("spec validation") {
  SynthSpec spec;
  spec.duration_s = -1;
  CHECK_ERROR_KIND(spec.validate(), ErrorKind::InvalidArgument);
  spec = {};
  spec.noise_sigma = -0.1;
  CHECK_ERROR_KIND(spec.validate(), ErrorKind::InvalidArgument);
  spec = {};
  spec.events = {{EventKind::Blink, 100.0, 0.5, 0.3, 0.35}};
  CHECK_ERROR_KIND(spec.validate(), ErrorKind::InvalidArgument);
  CHECK(event_kind_from_string("wire") == EventKind::Wire);
}

TEST_CASE("overlapping events produce one summary warning") {
  SynthSpec spec = default_blink_spec();
  spec.events = {{EventKind::Blink, 5.0, 0.5, 0.4, 0.35}, {EventKind::Blink, 5.1, 0.5, 0.4, 0.35},
                 {EventKind::Blink, 9.0, 0.5, 0.4, 0.35}, {EventKind::Blink, 9.1, 0.5, 0.4, 0.35}};
  const auto s = synth_blink_session(spec);
  REQUIRE(s.warnings.size() == 1);
  CHECK(s.warnings[0].find("2 adjacent") == 0);
}
