// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Dataset checks run only when BLINKFORGE_BLINKEO_FEATURES points at
// a labeled FeatureFile.

#include "blinkforge/cli.hpp"
#include "blinkforge/cull.hpp"
#include "blinkforge/eda_features.hpp"
#include "blinkforge/eog_features.hpp"
#include "blinkforge/io.hpp"
#include "blinkforge/peaks.hpp"
#include "blinkforge/rng.hpp"
#include "blinkforge/shapley.hpp"
#include "blinkforge/signal.hpp"
#include "blinkforge/surveys.hpp"
#include "blinkforge/synth.hpp"

#include "../oracles/reference.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>

using namespace blinkforge;
namespace fs = std::filesystem;

namespace {

// Tolerances and limits.
constexpr double kFilterRelTol = 0.02;
constexpr double kPolyTol = 1e-9;
constexpr double kAc1Seconds = 5.0;
constexpr double kAc2Seconds = 30.0;
constexpr double kNearestAgreement = 0.95;
constexpr double kAc3Seconds = 10.0;
constexpr double kFeatureTol = 1e-9;
constexpr double kAc4Seconds = 60.0;
constexpr double kInvarianceTol = 1e-9;
constexpr double kAc6Seconds = 120.0;
constexpr double kMinImprovement = 0.05;
constexpr std::size_t kMinLabeledPeaks = 2000;
constexpr double kAc7Seconds = 300.0;
constexpr double kTableTol = 0.0002;
constexpr double kAxiomTol = 1e-9;
constexpr double kLinearTol = 1e-12;
constexpr double kAc9Seconds = 60.0;
constexpr double kDatasetTol = 0.0005;

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(const std::string& id, const std::function<Outcome()>& body, double limit_s = 0.0) {
  const auto t0 = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  if (limit_s > 0.0 && secs >= limit_s) {
    o.pass = false;
    o.detail += " (over time limit)";
  }
  char timing[64];
  std::snprintf(timing, sizeof timing, " [%.2fs]", secs);
  std::cout << id << ' ' << (o.pass ? "PASS" : "FAIL") << ' ' << o.detail << timing << std::endl;
  if (!o.pass) ++failures;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

std::vector<double> sine(double f, double fs, double seconds) {
  std::vector<double> x(static_cast<std::size_t>(seconds * fs));
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::sin(2.0 * std::numbers::pi * f * i / fs);
  return x;
}

std::vector<double> smooth_signal(Rng& rng, std::size_t n, double fs) {
  std::vector<double> x(n, 0.0);
  const int tones = 3 + static_cast<int>(rng.below(4));
  for (int k = 0; k < tones; ++k) {
    const double f = rng.uniform(0.2, 4.0), a = rng.uniform(0.1, 1.0), ph = rng.uniform(0, 6.28);
    for (std::size_t i = 0; i < n; ++i) x[i] += a * std::sin(2.0 * std::numbers::pi * f * i / fs + ph);
  }
  return x;
}

std::vector<PeakSegment> eog_segments(std::uint64_t seed, double duration) {
  SynthSpec spec = default_blink_spec();
  spec.seed = seed;
  spec.duration_s = duration;
  const auto session = synth_mixed_session(spec, default_wire_spec());
  std::vector<PeakSegment> out;
  for (auto& s : segment_all(preprocess_eog(session.recording), {}, false))
    if (!s.edge_truncated && s.slice.size() >= 8) out.push_back(std::move(s));
  return out;
}

bool close(double a, double b, double tol) {
  if (std::isnan(a) || std::isnan(b)) return std::isnan(a) && std::isnan(b);
  return std::abs(a - b) <= tol * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

// ------------------------------------------------------------------ AC1
Outcome ac1() {
  const double fs = 1000.0, fc = 10.0;
  double worst = 0.0;
  for (double mult : {0.5, 1.0, 2.0, 10.0}) {
    const double f = mult * fc;
    const auto y = butterworth_lowpass(sine(f, fs, 10.0), fs, 5, fc, FilterMode::SinglePass);
    const double gain = oracle::tone_amplitude(y, fs, f, 4000);
    const double want = butterworth_digital_magnitude(5, fc, fs, f);
    worst = std::max(worst, std::abs(gain - want) / want);
  }
  double poly_err = 0.0;
  Rng rng(101);
  for (int trial = 0; trial < 100; ++trial) {
    const int deg = static_cast<int>(rng.below(4));
    double c[4] = {0, 0, 0, 0};
    for (int k = 0; k <= deg; ++k) c[k] = rng.uniform(-2, 2);
    std::vector<double> x(200);
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double t = (static_cast<double>(i) - 100.0) / 100.0;
      x[i] = c[0] + t * (c[1] + t * (c[2] + t * c[3]));
    }
    const std::size_t w = 2 * (2 + rng.below(10)) + 1;
    const auto y = savitzky_golay(x, w, 3);
    for (std::size_t i = 0; i < x.size(); ++i) poly_err = std::max(poly_err, std::abs(y[i] - x[i]));
  }
  return {worst < kFilterRelTol && poly_err < kPolyTol,
          fmt("butterworth max rel err %.2e (tol %.0e, digital bilinear response); SG poly err %.1e (tol %.0e)",
              worst, kFilterRelTol, poly_err, kPolyTol)};
}

// ------------------------------------------------------------------ AC2
Outcome ac2() {
  int mismatched = 0, peaks = 0;
  const SearchParams params;
  for (std::uint64_t s = 0; s < 200; ++s) {
    SynthSpec spec = default_blink_spec();
    spec.seed = 2000 + s;
    spec.duration_s = 30.0;
    const auto filtered = preprocess_eog(synth_mixed_session(spec, default_wire_spec()).recording);
    const auto got = detect_peaks(filtered, params);
    const auto want = oracle::detect(filtered.values(), filtered.sample_rate_hz(), params.prominence_min,
                                     params.width_min_s);
    bool same = got.size() == want.size();
    for (std::size_t i = 0; same && i < got.size(); ++i)
      same = got[i].center_index == want[i].center && got[i].prominence == want[i].prominence;
    mismatched += same ? 0 : 1;
    peaks += static_cast<int>(want.size());
  }
  return {mismatched == 0, fmt("200 sessions, %.0f oracle peaks, %.0f sessions differ", peaks, mismatched)};
}

// ------------------------------------------------------------------ AC3
Outcome ac3() {
  Rng rng(303);
  const double fs = 100.0;
  int not_minimum = 0, agree = 0, total = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto x = smooth_signal(rng, 800, fs);
    const Recording rec(fs, x, Channel::EOG);
    const long w = static_cast<long>(rec.samples_for(0.5));
    // The search starts from a peak, as in the baseline search.
    std::vector<std::size_t> peaks;
    for (std::size_t p : oracle::local_maxima(x))
      if (p >= 200 && p < 600) peaks.push_back(p);
    if (peaks.empty()) continue;
    const std::size_t p = peaks[rng.below(peaks.size())];
    const int dir = trial % 2 ? 1 : -1;
    const std::size_t got = find_nearby_minimum(x, p, dir * w, w);
    ++total;
    if (!oracle::is_interior_min(x, got)) ++not_minimum;
    const auto want = oracle::nearest_minimum(x, p, dir, w);
    agree += want && *want == got ? 1 : 0;
  }
  const double rate = static_cast<double>(agree) / total;
  return {total >= 950 && not_minimum == 0 && rate >= kNearestAgreement,
          fmt("%.0f searches, %.0f non-minima; agreement with linear scan %.3f (need %.2f)", total, not_minimum,
              rate, kNearestAgreement)};
}

// ------------------------------------------------------------------ AC4
Outcome ac4() {
  int eog_checked = 0, eog_bad = 0;
  std::string first_bad;
  for (std::uint64_t seed : {401u, 402u, 403u}) {
    for (const auto& seg : eog_segments(seed, 150.0)) {
      if (eog_checked >= 100) break;
      BlinkFeatures got;
      try {
        got = extract_eog_features(seg, 100.0, false);
      } catch (const Error&) {
        continue;
      }
      const auto want = oracle::eog_features(seg.slice, seg.center_offset(), 100.0, false);
      for (std::size_t i = 0; i < got.names.size(); ++i)
        if (!close(got.values[i], want.f.at(got.names[i]), kFeatureTol)) {
          ++eog_bad;
          if (first_bad.empty()) first_bad = got.names[i];
        }
      ++eog_checked;
    }
  }
  Rng rng(404);
  int eda_bad = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 32 + rng.below(300);
    std::vector<double> x(n);
    double walk = rng.uniform(1, 10);
    for (double& v : x) v = trial % 2 ? rng.normal() : (walk += 0.05 * rng.normal());
    const double fs = rng.uniform(4, 64);
    const auto got = extract_eda_features(x, fs);
    const auto want = oracle::eda_features(x, fs);
    for (std::size_t i = 0; i < got.values.size(); ++i)
      if (!close(got.values[i], want.values[i], kFeatureTol)) {
        ++eda_bad;
        if (first_bad.empty()) first_bad = got.names[i];
      }
  }

  // Closed forms.
  std::vector<double> line(200);
  for (std::size_t i = 0; i < line.size(); ++i) line[i] = 0.01 * i;
  const bool petrosian_ok = std::abs(petrosian_fd(line) - 1.0) < 1e-12;
  const bool katz_ok = std::abs(katz_fd(line) - 1.0) < 1e-12;
  const bool perm_ok = permutation_entropy(line) == 0.0;
  const double f = 1.5, fs = 100.0;
  const double mob = hjorth(sine(f, fs, 20.0)).mobility;
  const double mob_want = 2.0 * std::numbers::pi * f / fs;
  const bool hjorth_ok = std::abs(mob - mob_want) / mob_want <= 0.02;
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
  const bool dfa_ok = std::abs(white - 0.5) <= 0.1 && std::abs(walk - 1.5) <= 0.1;
  const bool closed = petrosian_ok && katz_ok && perm_ok && hjorth_ok && dfa_ok;
  std::string d = fmt("%.0f EOG segments (%.0f mismatches), 100 EDA windows (%.0f mismatches), tol %.0e; ",
                      eog_checked, eog_bad, eda_bad, kFeatureTol);
  d += fmt("mobility %.5f vs %.5f; DFA white %.3f walk %.3f", mob, mob_want, white, walk);
  if (!petrosian_ok || !katz_ok || !perm_ok) d += "; a fractal/entropy closed form failed";
  if (!first_bad.empty()) d += "; first mismatch: " + first_bad;
  return {eog_checked >= 100 && eog_bad == 0 && eda_bad == 0 && closed, d};
}

// ------------------------------------------------------------------ AC5
Outcome ac5() {
  Rng rng(505);
  int checked = 0, bad = 0;
  double worst = 0.0;
  for (const auto& seg : eog_segments(501, 200.0)) {
    BlinkFeatures base;
    try {
      base = extract_eog_features(seg, 100.0, true);
    } catch (const Error&) {
      continue;
    }
    const double k = std::exp(rng.uniform(-5, 5)), c = rng.uniform(-10, 10);
    auto y = seg.slice;
    for (double& v : y) v = k * v + c;
    const auto got = extract_eog_features(y, seg.center_offset(), 100.0, true);
    for (std::size_t i = 0; i < got.values.size(); ++i) {
      const double scale = std::max(1.0, std::abs(base.values[i]));
      worst = std::max(worst, std::abs(got.values[i] - base.values[i]) / scale);
      if (!close(got.values[i], base.values[i], kInvarianceTol)) ++bad;
    }
    if (++checked == 50) break;
  }
  return {checked == 50 && bad == 0,
          fmt("%.0f segments x %.0f normalized features, worst rel diff %.1e (tol %.0e)", checked,
              static_cast<double>(eog::feature_names(true).size()), worst, kInvarianceTol)};
}

// ------------------------------------------------------------------ AC6
struct Table {
  FeatureTable t;
  std::vector<std::vector<double>> cols;
  std::vector<bool> labels;
  std::vector<std::string> names;
};

Table random_table(Rng& rng, std::size_t features, std::size_t rows) {
  Table t;
  for (std::size_t f = 0; f < features; ++f) t.names.push_back("f" + std::to_string(f));
  t.t = FeatureTable(t.names);
  t.cols.assign(features, {});
  for (std::size_t r = 0; r < rows; ++r) {
    const bool label = rng.uniform() < 0.5;
    std::vector<double> v;
    for (std::size_t f = 0; f < features; ++f) {
      v.push_back(std::round(4.0 * (rng.normal() + (label ? 0.8 : 0.0))) / 4.0);
      t.cols[f].push_back(v.back());
    }
    t.labels.push_back(label);
    t.t.add_row(std::to_string(r), v, label);
  }
  return t;
}

Outcome ac6() {
  Rng rng(606);
  int ind_bad = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto t = random_table(rng, 1, 50 + rng.below(100));
    const auto got = individual_search(t.t, "f0", 50);
    const auto want = oracle::individual(t.cols[0], t.labels, 50);
    if (got.lower_steps != want.a || got.upper_steps != want.b || got.report.tp + got.report.tn != want.correct)
      ++ind_bad;
  }
  int bfs_bad = 0, instances = 0;
  struct Shape {
    std::size_t f;
    int bins;
  };
  for (Shape shape : {Shape{2, 5}, Shape{3, 3}})
    for (int trial = 0; trial < 25; ++trial) {
      const auto t = random_table(rng, shape.f, 50);
      const auto want = oracle::exhaustive(t.cols, t.labels, shape.bins);
      for (auto strategy : {BfsStrategy::Queue, BfsStrategy::BranchAndBound}) {
        BfsOptions o;
        o.bins = shape.bins;
        o.strategy = strategy;
        const auto got = bfs_search(t.t, t.names, o);
        std::vector<int> coords;
        for (std::size_t f = 0; f < shape.f; ++f) {
          coords.push_back(got.lower_steps[f]);
          coords.push_back(got.upper_steps[f]);
        }
        ++instances;
        if (coords != want.coords || got.report.tp != want.tp || got.report.fp != want.fp ||
            got.report.tn != want.tn || got.report.fn != want.fn)
          ++bfs_bad;
      }
    }
  return {ind_bad == 0 && bfs_bad == 0,
          fmt("individual 50 tables (%.0f differ); bfs %.0f runs over 2x5 and 3x3 grids (%.0f differ)", ind_bad,
              instances, bfs_bad)};
}

// ------------------------------------------------------------------ AC7
struct Corpus {
  FeatureTable table;
  std::vector<bool> baseline;
};

Corpus mixed_corpus(std::uint64_t seed) {
  SynthSpec spec = default_blink_spec();
  spec.seed = seed;
  spec.duration_s = 2700.0;
  SynthSpec wire = default_wire_spec();
  wire.event_rate_hz = 0.3;
  const auto session = synth_mixed_session(spec, wire);
  const auto filtered = preprocess_eog(session.recording);
  const SearchParams params;
  const auto cands = detect_peaks(filtered, params);
  const auto labels = label_candidates(cands, session.truth, filtered.sample_rate_hz());
  Corpus c{FeatureTable(eog::feature_names(true)), {}};
  for (std::size_t i = 0; i < cands.size(); ++i) {
    const auto seg = segment_peak(filtered, cands[i], params);
    try {
      const auto f = extract_eog_features(seg, filtered.sample_rate_hz(), true);
      c.table.add_row(std::to_string(i), f.values, labels[i]);
      c.baseline.push_back(passes_blink_prefilter(cands[i], params));
    } catch (const Error&) {
    }
  }
  return c;
}

Outcome ac7() {
  const auto train = mixed_corpus(11), test = mixed_corpus(12);
  const std::vector<std::string> five(eog::culling_five().begin(), eog::culling_five().end());
  BfsOptions o;
  o.bins = 15;
  const auto fit = bfs_search(train.table, five, o);
  const auto culled = evaluate(test.table, fit.config);
  const auto base = evaluate(test.baseline, test.table.label_vector());
  const std::size_t rows = train.table.rows() + test.table.rows();
  const double gain = culled.accuracy - base.accuracy;
  return {rows >= kMinLabeledPeaks && gain >= kMinImprovement,
          fmt("%.0f labeled peaks; held-out accuracy prefilter %.4f vs culled %.4f (%+.1f points", static_cast<double>(rows),
              base.accuracy, culled.accuracy, 100.0 * gain) +
              fmt(", need %.0f)", 100.0 * kMinImprovement)};
}

// ------------------------------------------------------------------ AC8
Outcome ac8() {
  const auto r = evaluate(
      [] {
        std::vector<bool> p;
        p.insert(p.end(), 4734, true);
        p.insert(p.end(), 2058, false);
        p.insert(p.end(), 203, true);
        p.insert(p.end(), 5501, false);
        return p;
      }(),
      [] {
        std::vector<bool> l;
        l.insert(l.end(), 6792, true);
        l.insert(l.end(), 5704, false);
        return l;
      }());
  const bool counts = r.tp == 4734 && r.fn == 2058 && r.fp == 203 && r.tn == 5501;
  const bool exact = r.accuracy == 10235.0 / 12496.0 && r.f1 == 9468.0 / 11729.0;
  const bool near = std::abs(r.accuracy - 0.8190) <= kTableTol && std::abs(r.f1 - 0.8072) <= kTableTol;
  return {counts && exact && near, fmt("accuracy %.6f (10235/12496), F1 %.6f (9468/11729), tol %.4f", r.accuracy,
                                       r.f1, kTableTol)};
}

// ------------------------------------------------------------------ AC9
Outcome ac9() {
  Rng rng(909);
  auto names = [](std::size_t n) {
    std::vector<std::string> v;
    for (std::size_t i = 0; i < n; ++i) v.push_back("x" + std::to_string(i));
    return v;
  };
  double eff = 0, sym = 0, dummy = 0, lin = 0, perm = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng.below(7);
    std::vector<double> w(n), pair(n * n);
    for (double& v : w) v = rng.normal();
    for (double& v : pair) v = rng.normal();
    const std::size_t dead = rng.below(n);
    auto model = [&](std::span<const double> x) {
      double v = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (i == dead) continue;
        v += w[i] * x[i] + 0.3 * std::tanh(x[i]);
        for (std::size_t j = i + 1; j < n; ++j)
          if (j != dead) v += pair[i * n + j] * x[i] * x[j];
      }
      return v;
    };
    std::vector<double> x(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = rng.normal();
      b[i] = rng.normal();
    }
    const auto r = shapley_exact(model, x, b, names(n));
    double sum = 0;
    for (double v : r.phi) sum += v;
    eff = std::max(eff, std::abs(sum - (model(x) - model(b))));
    dummy = std::max(dummy, std::abs(r.phi[dead]));
    auto symm = [](std::span<const double> v) { return std::exp(v[0] + v[1]) + v[0] * v[1] * (v.size() > 2 ? v.back() : 1.0); };
    auto xs = x;
    auto bs = b;
    xs[1] = xs[0];
    bs[1] = bs[0];
    const auto rs = shapley_exact(symm, xs, bs, names(n));
    sym = std::max(sym, std::abs(rs.phi[0] - rs.phi[1]));

    LinearModel lm{w, rng.normal(), 0.0};
    const auto rl = shapley_exact([&](std::span<const double> v) { return lm.predict(v); }, x, b, names(n));
    for (std::size_t i = 0; i < n; ++i) lin = std::max(lin, std::abs(rl.phi[i] - w[i] * (x[i] - b[i])));

    if (n <= 6) {
      const auto want = oracle::shapley_permutations(
          [&](const std::vector<bool>& in) {
            auto h = b;
            for (std::size_t i = 0; i < n; ++i)
              if (in[i]) h[i] = x[i];
            return model(h);
          },
          n);
      for (std::size_t i = 0; i < n; ++i) perm = std::max(perm, std::abs(r.phi[i] - want[i]));
    }
  }
  return {eff <= kAxiomTol && sym <= kAxiomTol && dummy <= kAxiomTol && lin <= kLinearTol && perm <= kAxiomTol,
          fmt("max errors: efficiency %.1e, symmetry %.1e, dummy %.1e, permutation oracle %.1e", eff, sym, dummy,
              perm) +
              fmt("; linear closed form %.1e (tol %.0e)", lin, kLinearTol)};
}

// ----------------------------------------------------------------- AC10
SurveyResponse filled(int panas_value, const std::function<int(const StaiItem&)>& stai) {
  SurveyResponse r;
  for (auto i : panas::kPositiveItems) r.panas[std::string(i)] = panas_value;
  for (auto i : panas::kNegativeItems) r.panas[std::string(i)] = panas_value;
  for (const auto& item : stai_items(StaiRoster::Standard)) r.stai[std::string(item.name)] = stai(item);
  return r;
}

Outcome ac10() {
  const int lo = score_stai_state(filled(3, [](const StaiItem& i) { return i.polarity == Polarity::Negative ? 1 : 4; }));
  const int hi = score_stai_state(filled(3, [](const StaiItem& i) { return i.polarity == Polarity::Negative ? 4 : 1; }));
  int k = 0;
  const int mid = score_stai_state(filled(3, [&](const StaiItem& i) {
    const int scored = k++ % 2 ? 2 : 3;
    return i.polarity == Polarity::Negative ? scored : 5 - scored;
  }));
  const auto pmin = score_panas(filled(1, [](const StaiItem&) { return 2; }));
  const auto pmax = score_panas(filled(5, [](const StaiItem&) { return 2; }));
  const bool bounds = lo == 20 && mid == 50 && hi == 80 && pmin.positive_affect == 5 && pmin.negative_affect == 5 &&
                      pmax.positive_affect == 25 && pmax.negative_affect == 25;

  Rng rng(1010);
  int violations = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    auto r = filled(1, [&](const StaiItem&) { return 1 + static_cast<int>(rng.below(4)); });
    for (auto& [name, v] : r.panas) v = 1 + static_cast<int>(rng.below(5));
    const int s = score_stai_state(r);
    const auto p = score_panas(r);
    const auto& items = stai_items(StaiRoster::Standard);
    const auto& item = items[rng.below(items.size())];
    int& v = r.stai.find(item.name)->second;
    // Raising a negative item or lowering a positive one never lowers the score.
    if (item.polarity == Polarity::Negative && v < 4) {
      ++v;
      violations += score_stai_state(r) == s + 1 ? 0 : 1;
    } else if (item.polarity == Polarity::Positive && v > 1) {
      --v;
      violations += score_stai_state(r) == s + 1 ? 0 : 1;
    }
    auto& pv = r.panas.find(panas::kNegativeItems[rng.below(5)])->second;
    if (pv < 5) {
      ++pv;
      const auto q = score_panas(r);
      violations += q.negative_affect == p.negative_affect + 1 && q.positive_affect == p.positive_affect ? 0 : 1;
    }
    violations += s >= 20 && s <= 80 ? 0 : 1;
  }
  return {bounds && violations == 0,
          fmt("STAI %.0f/%.0f/%.0f (want 20/50/80); PANAS 5/25 ", lo, mid, hi) +
              (bounds ? "exact" : "wrong") + fmt("; %.0f monotonicity violations over 1000 responses", violations)};
}

// ----------------------------------------------------------------- AC11
int cli(const std::vector<std::string>& args, std::string* out = nullptr) {
  std::ostringstream o, e;
  const int code = cli::run(args, o, e);
  if (out) *out = o.str() + e.str();
  return code;
}

Outcome ac11() {
  const fs::path dir = fs::temp_directory_path() / "blinkforge_acceptance_ac11";
  fs::remove_all(dir);
  fs::create_directories(dir);
  auto p = [&](const std::string& f) { return (dir / f).string(); };

  std::string text = "participant_id,stage,item,value\n";
  Rng rng(1111);
  for (const char* pid : {"p1", "p2"})
    for (const char* stage : {"Baseline", "CPT", "Recovery"}) {
      for (auto i : panas::kPositiveItems) text += std::string(pid) + "," + stage + "," + std::string(i) + "," + std::to_string(1 + rng.below(5)) + "\n";
      for (auto i : panas::kNegativeItems) text += std::string(pid) + "," + stage + "," + std::string(i) + "," + std::to_string(1 + rng.below(5)) + "\n";
      for (const auto& i : stai_items(StaiRoster::Standard))
        text += std::string(pid) + "," + stage + "," + std::string(i.name) + "," + std::to_string(1 + rng.below(4)) + "\n";
    }
  io::write_file_atomic(p("responses.csv"), text);

  const std::vector<std::vector<std::string>> pipelines = {
      {"synth", "blink", "--output", p("eog.csv"), "--duration-s", "240", "--seed", "5", "--wire-rate-hz", "0.3"},
      {"synth", "wire", "--output", p("wire.csv"), "--duration-s", "60", "--seed", "6"},
      {"synth", "eda", "--output", p("eda.csv"), "--duration-s", "120", "--seed", "7"},
      {"filter", "--input", p("eog.csv"), "--output", p("eog_f.csv")},
      {"filter", "--input", p("eda.csv"), "--output", p("eda_p.csv"), "--component", "phasic"},
      {"detect", "--input", p("eog.csv"), "--output", p("seg.csv"), "--truth", p("eog.csv.truth.csv"), "--no-prefilter"},
      {"features", "eog", "--recording", p("eog.csv"), "--segments", p("seg.csv"), "--output", p("feat.csv"), "--normalize"},
      {"features", "eda", "--recording", p("eda.csv"), "--output", p("eda_feat.csv"), "--window-s", "4"},
      {"cull", "individual", "--input", p("feat.csv"), "--feature", "Blink Duration", "--output-config", p("ind.json"), "--output-report", p("ind_rep.json")},
      {"cull", "bfs", "--input", p("feat.csv"), "--features", "Blink Duration,Velocity Entropy,Signal Entropy", "--bins", "8", "--output-config", p("bfs.json")},
      {"cull", "apply", "--input", p("feat.csv"), "--bounds", p("bfs.json"), "--output", p("pred.csv"), "--output-report", p("pred_rep.json")},
      {"sweep", "--input", p("feat.csv"), "--candidates", "Blink Duration,Velocity Entropy,Signal Entropy,Signal Average", "--k", "2", "--bins", "6", "--output", p("rank.csv")},
      {"shapley", "--input", p("feat.csv"), "--features", "Blink Duration,Velocity Entropy,Signal Entropy,Opening Phase Energy", "--output", p("phi.csv"), "--output-mean", p("phi_mean.csv")},
      {"survey", "score", "--input", p("responses.csv"), "--output", p("scores.csv")},
      {"plotdata", "peaks", "--recording", p("eog.csv"), "--segments", p("seg.csv"), "--output", p("plot_peaks.csv")},
      {"plotdata", "culling", "--input", p("feat.csv"), "--bounds", p("bfs.json"), "--output", p("plot_cull.csv")},
      {"plotdata", "survey", "--input", p("scores.csv"), "--output", p("plot_survey.csv")},
  };
  const std::vector<std::string> primaries = {"eog.csv", "wire.csv", "eda.csv", "eog_f.csv", "eda_p.csv", "seg.csv",
                                              "feat.csv", "eda_feat.csv", "ind.json", "bfs.json", "pred.csv",
                                              "rank.csv", "phi.csv", "scores.csv", "plot_peaks.csv",
                                              "plot_cull.csv", "plot_survey.csv"};
  setenv("BLINKFORGE_THREADS", "1", 1);
  for (const auto& args : pipelines) {
    std::string msg;
    if (cli(args, &msg) != 0) {
      unsetenv("BLINKFORGE_THREADS");
      return {false, "pipeline " + args[0] + " failed: " + msg};
    }
  }
  int replays = 0, failed = 0;
  std::string first_fail;
  for (const char* threads : {"1", "2", "4"}) {
    setenv("BLINKFORGE_THREADS", threads, 1);
    for (const auto& primary : primaries) {
      const std::string before = io::read_file(p(primary));
      std::string msg;
      const int code = cli({"replay", "--manifest", p(primary) + ".manifest.json"}, &msg);
      ++replays;
      if (code != 0 || io::read_file(p(primary)) != before) {
        ++failed;
        if (first_fail.empty()) first_fail = primary + " (threads " + threads + "): " + msg;
      }
    }
  }
  unsetenv("BLINKFORGE_THREADS");
  fs::remove_all(dir);
  std::string d = fmt("%.0f pipelines replayed under 1/2/4 threads, %.0f byte-identical", static_cast<double>(primaries.size()),
                      replays - failed);
  if (!first_fail.empty()) d += "; first failure: " + first_fail;
  return {failed == 0, d};
}

// ------------------------------------------------------- dataset-gated checks
void dataset_checks() {
  const char* path = std::getenv("BLINKFORGE_BLINKEO_FEATURES");
  if (path == nullptr || *path == '\0') {
    std::cout << "DATASET-1 SKIP single-feature 87.46%/79.99% (set BLINKFORGE_BLINKEO_FEATURES)\n";
    std::cout << "DATASET-5 SKIP five-feature 98.17%/87.34% (set BLINKFORGE_BLINKEO_FEATURES)\n";
    return;
  }
  report("DATASET-1", [&] {
    const auto file = io::parse_feature_file(io::read_file(path), true);
    const auto r = individual_search(file.table, eog::kBlinkDuration, 50);
    return Outcome{std::abs(r.report.accuracy - 0.8746) <= kDatasetTol && std::abs(r.report.f1 - 0.7999) <= kDatasetTol,
                   fmt("Blink Duration alone: accuracy %.4f F1 %.4f (want 0.8746/0.7999)", r.report.accuracy,
                       r.report.f1)};
  });
  report("DATASET-5", [&] {
    const auto file = io::parse_feature_file(io::read_file(path), true);
    const std::vector<std::string> five(eog::culling_five().begin(), eog::culling_five().end());
    const auto r = bfs_search(file.table, five, BfsOptions{});
    return Outcome{std::abs(r.report.accuracy - 0.9817) <= kDatasetTol && std::abs(r.report.f1 - 0.8734) <= kDatasetTol,
                   fmt("accuracy %.4f F1 %.4f (want 0.9817/0.8734)", r.report.accuracy, r.report.f1)};
  });
}

}  // namespace

int main() {
  report("AC1", ac1, kAc1Seconds);
  report("AC2", ac2, kAc2Seconds);
  report("AC3", ac3, kAc3Seconds);
  report("AC4", ac4, kAc4Seconds);
  report("AC5", ac5);
  report("AC6", ac6, kAc6Seconds);
  report("AC7", ac7, kAc7Seconds);
  report("AC8", ac8);
  report("AC9", ac9, kAc9Seconds);
  report("AC10", ac10);
  report("AC11", ac11);
  dataset_checks();
  std::cout << (failures == 0 ? "ALL PASS" : std::to_string(failures) + " FAILED") << std::endl;
  return failures == 0 ? 0 : 1;
}
