#include "blinkforge/synth.hpp"

#include "blinkforge/error.hpp"
#include "blinkforge/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace blinkforge {
namespace {

constexpr double kScrDecayS = 3.0;

void check_range(const std::pair<double, double>& r, const char* what, bool positive) {
  if (!std::isfinite(r.first) || !std::isfinite(r.second) || r.first > r.second ||
      (positive && !(r.first > 0.0)))
    fail(ErrorKind::InvalidArgument, std::string("invalid ") + what + " range");
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t s = seed ^ (stream * 0xD1B54A32D192ED03ull);
  return splitmix64(s);
}

struct Support {
  double start, end;
};

Support blink_support(const SynthEvent& e) {
  const double rise = e.skew * e.width_s;
  const double tau = (1.0 - e.skew) * e.width_s / 4.0;
  return {e.time_s - rise, e.time_s + 10.0 * tau};
}

double scr_rise_tau(const SynthEvent& e) { return 0.75 * e.width_s; }

double scr_peak_delay(double tau_r) {
  return tau_r * kScrDecayS / (kScrDecayS - tau_r) * std::log(kScrDecayS / tau_r);
}

double bateman(double u, double tau_r) {
  if (u <= 0.0) return 0.0;
  const double peak = scr_peak_delay(tau_r);
  const double norm = std::exp(-peak / kScrDecayS) - std::exp(-peak / tau_r);
  return (std::exp(-u / kScrDecayS) - std::exp(-u / tau_r)) / norm;
}

std::size_t to_index(double t, double fs, std::size_t n) {
  const double i = std::round(t * fs);
  if (i <= 0.0) return 0;
  return std::min(n - 1, static_cast<std::size_t>(i));
}

void add_noise(std::vector<double>& x, const SynthSpec& spec) {
  if (spec.noise_sigma <= 0.0) return;
  Rng rng(derive_seed(spec.seed, 1));
  for (double& v : x) v += spec.noise_sigma * rng.normal();
}

// Wire burst shape on n samples, peak normalized to `amplitude`.
std::vector<double> wire_shape(std::size_t n, double fs, double amplitude, Rng& rng) {
  std::vector<double> walk(n);
  double acc = 0.0;
  for (double& v : walk) v = acc += rng.normal();

  const auto half = static_cast<std::size_t>(std::max(1.0, std::round(0.03 * fs)));
  for (int pass = 0; pass < 2; ++pass) {
    std::vector<double> sm(n);
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t lo = i >= half ? i - half : 0;
      const std::size_t hi = std::min(n - 1, i + half);
      double s = 0.0;
      for (std::size_t j = lo; j <= hi; ++j) s += walk[j];
      sm[i] = s / static_cast<double>(hi - lo + 1);
    }
    walk.swap(sm);
  }
  const double first = walk.front(), last = walk.back();
  for (std::size_t i = 0; i < n; ++i) {
    const double frac = n > 1 ? static_cast<double>(i) / static_cast<double>(n - 1) : 0.0;
    const double hann = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * frac));
    walk[i] = (walk[i] - (first + (last - first) * frac)) * hann;
  }
  const auto [mn, mx] = std::minmax_element(walk.begin(), walk.end());
  double top = *mx;
  if (-*mn > top) {
    for (double& v : walk) v = -v;
    top = -*mn;
  }
  if (top > 0.0)
    for (double& v : walk) v *= amplitude / top;
  return walk;
}

void overlap_warnings(std::vector<SynthEvent> plan, std::vector<std::string>& out) {
  std::sort(plan.begin(), plan.end(),
            [](const SynthEvent& a, const SynthEvent& b) { return a.time_s < b.time_s; });
  std::size_t count = 0;
  double first = 0.0;
  for (std::size_t i = 1; i < plan.size(); ++i) {
    const double gap = plan[i].time_s - plan[i - 1].time_s;
    if (gap < std::max(plan[i].width_s, plan[i - 1].width_s)) {
      if (count++ == 0) first = plan[i - 1].time_s;
    }
  }
  if (count == 0) return;
  std::ostringstream msg;
  msg << count << " adjacent event pair" << (count == 1 ? "" : "s")
      << " closer than their width (first at " << first << " s)";
  out.push_back(msg.str());
}

SynthSession render_eog(const SynthSpec& spec, const std::vector<SynthEvent>& plan) {
  const double fs = spec.sample_rate_hz;
  const auto n = static_cast<std::size_t>(std::max(2.0, std::round(spec.duration_s * fs)));
  std::vector<double> x(n, spec.baseline);
  std::vector<GroundTruth> truth;

  for (std::size_t k = 0; k < plan.size(); ++k) {
    const SynthEvent& e = plan[k];
    GroundTruth g;
    g.kind = e.kind;
    g.time_s = e.time_s;
    g.amplitude = e.amplitude;
    g.width_s = e.width_s;
    if (e.kind == EventKind::Blink) {
      const Support sup = blink_support(e);
      g.start_s = sup.start;
      g.end_s = sup.end;
      g.center_index = to_index(e.time_s, fs, n);
      const std::size_t lo = to_index(sup.start, fs, n), hi = to_index(sup.end, fs, n);
      for (std::size_t i = lo; i <= hi; ++i)
        x[i] += e.amplitude * blink_template(static_cast<double>(i) / fs - e.time_s, e.width_s,
                                             e.skew);
    } else if (e.kind == EventKind::Wire) {
      Rng rng(derive_seed(spec.seed, 1000 + k));
      const auto len = static_cast<std::size_t>(std::max(8.0, std::round(e.width_s * fs)));
      const auto shape = wire_shape(len, fs, e.amplitude, rng);
      const double start = e.time_s - e.width_s / 2.0;
      g.start_s = start;
      g.end_s = start + static_cast<double>(len - 1) / fs;
      const auto first = static_cast<long>(std::round(start * fs));
      double best = -1.0;
      for (std::size_t j = 0; j < len; ++j) {
        const long i = first + static_cast<long>(j);
        if (i < 0 || i >= static_cast<long>(n)) continue;
        x[static_cast<std::size_t>(i)] += shape[j];
        if (shape[j] > best) {
          best = shape[j];
          g.center_index = static_cast<std::size_t>(i);
        }
      }
    } else {
      fail(ErrorKind::InvalidArgument, "SCR events cannot appear in an EOG session");
    }
    truth.push_back(g);
  }
  add_noise(x, spec);

  SynthSession out{Recording(fs, std::move(x), Channel::EOG), std::move(truth), {}};
  overlap_warnings(plan, out.warnings);
  return out;
}

}  // namespace

std::string_view to_string(EventKind kind) noexcept {
  switch (kind) {
    case EventKind::Blink: return "blink";
    case EventKind::Wire: return "wire";
    case EventKind::Scr: return "scr";
  }
  return "blink";
}

EventKind event_kind_from_string(std::string_view name) {
  if (name == "blink") return EventKind::Blink;
  if (name == "wire") return EventKind::Wire;
  if (name == "scr") return EventKind::Scr;
  fail(ErrorKind::InvalidArgument, "unknown event kind '" + std::string(name) + "'");
}

void SynthSpec::validate() const {
  if (!(sample_rate_hz > 0.0) || !std::isfinite(sample_rate_hz))
    fail(ErrorKind::InvalidArgument, "sample_rate_hz must be positive");
  if (!(duration_s > 0.0) || !std::isfinite(duration_s))
    fail(ErrorKind::InvalidArgument, "duration_s must be positive");
  if (!(noise_sigma >= 0.0)) fail(ErrorKind::InvalidArgument, "noise_sigma must be >= 0");
  if (!(event_rate_hz >= 0.0) || !(min_gap_s >= 0.0))
    fail(ErrorKind::InvalidArgument, "event rate and gap must be >= 0");
  if (!(drift_period_s > 0.0)) fail(ErrorKind::InvalidArgument, "drift period must be positive");
  check_range(amplitude, "amplitude", false);
  check_range(width_s, "width", true);
  check_range(skew, "skew", true);
  if (skew.second >= 1.0) fail(ErrorKind::InvalidArgument, "skew must lie in (0, 1)");
  for (const auto& e : events) {
    if (!(e.time_s >= 0.0 && e.time_s < duration_s))
      fail(ErrorKind::InvalidArgument, "event time outside the session");
    if (!(e.width_s > 0.0)) fail(ErrorKind::InvalidArgument, "event width must be positive");
    if (!(e.skew > 0.0 && e.skew < 1.0)) fail(ErrorKind::InvalidArgument, "skew must lie in (0, 1)");
    if (!std::isfinite(e.amplitude)) fail(ErrorKind::InvalidArgument, "event amplitude must be finite");
  }
}

SynthSpec default_blink_spec() {
  SynthSpec s;
  s.event_rate_hz = 6792.0 / 12103.14;
  return s;
}

SynthSpec default_wire_spec() {
  SynthSpec s;
  s.event_rate_hz = 0.3;
  s.min_gap_s = 1.0;
  s.amplitude = {0.2, 1.0};
  s.width_s = {0.4, 1.5};
  return s;
}

SynthSpec default_eda_spec() {
  SynthSpec s;
  s.duration_s = 120.0;
  s.noise_sigma = 0.005;
  s.baseline = 5.0;
  s.drift_amplitude = 0.2;
  s.event_rate_hz = 0.05;
  s.min_gap_s = 5.0;
  s.amplitude = {0.2, 1.0};
  s.width_s = {0.8, 1.2};
  return s;
}

std::vector<SynthEvent> plan_events(const SynthSpec& spec, EventKind kind) {
  spec.validate();
  if (!spec.events.empty()) return spec.events;
  std::vector<SynthEvent> plan;
  if (spec.event_rate_hz <= 0.0) return plan;
  const double start = 1.0;
  const double stop = spec.duration_s - (kind == EventKind::Scr ? 10.0 : 1.5);
  Rng rng(derive_seed(spec.seed, 0));
  double t = start;
  for (;;) {
    t += rng.exponential(spec.event_rate_hz) + spec.min_gap_s;
    if (t >= stop) break;
    SynthEvent e;
    e.kind = kind;
    e.time_s = t;
    e.amplitude = rng.uniform(spec.amplitude.first, spec.amplitude.second);
    e.width_s = rng.uniform(spec.width_s.first, spec.width_s.second);
    e.skew = rng.uniform(spec.skew.first, spec.skew.second);
    plan.push_back(e);
  }
  return plan;
}

double blink_template(double u, double width_s, double skew) {
  const double rise = skew * width_s;
  const double tau = (1.0 - skew) * width_s / 4.0;
  if (u < -rise) return 0.0;
  if (u <= 0.0) return 0.5 * (1.0 - std::cos(std::numbers::pi * (u + rise) / rise));
  return (1.0 + u / tau) * std::exp(-u / tau);
}

SynthSession synth_blink_session(const SynthSpec& spec) {
  return render_eog(spec, plan_events(spec, EventKind::Blink));
}

SynthSession synth_wire_session(const SynthSpec& spec) {
  return render_eog(spec, plan_events(spec, EventKind::Wire));
}

SynthSession synth_mixed_session(const SynthSpec& spec, const SynthSpec& wire) {
  auto plan = plan_events(spec, EventKind::Blink);
  SynthSpec w = wire;
  w.seed = derive_seed(spec.seed, 2);
  w.duration_s = spec.duration_s;
  w.sample_rate_hz = spec.sample_rate_hz;
  w.events.clear();
  const auto wires = plan_events(w, EventKind::Wire);
  plan.insert(plan.end(), wires.begin(), wires.end());
  std::stable_sort(plan.begin(), plan.end(),
                   [](const SynthEvent& a, const SynthEvent& b) { return a.time_s < b.time_s; });
  return render_eog(spec, plan);
}

SynthSession synth_eda_session(const SynthSpec& spec) {
  const auto plan = plan_events(spec, EventKind::Scr);
  const double fs = spec.sample_rate_hz;
  const auto n = static_cast<std::size_t>(std::max(2.0, std::round(spec.duration_s * fs)));
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / fs;
    x[i] = spec.baseline +
           spec.drift_amplitude * std::sin(2.0 * std::numbers::pi * t / spec.drift_period_s);
  }
  std::vector<GroundTruth> truth;
  for (const auto& e : plan) {
    if (e.kind != EventKind::Scr)
      fail(ErrorKind::InvalidArgument, "only SCR events can appear in an EDA session");
    const double tau_r = scr_rise_tau(e);
    if (!(tau_r < kScrDecayS))
      fail(ErrorKind::InvalidArgument, "SCR rise must be shorter than the 3 s decay");
    GroundTruth g;
    g.kind = e.kind;
    g.time_s = e.time_s + scr_peak_delay(tau_r);
    g.center_index = to_index(g.time_s, fs, n);
    g.start_s = e.time_s;
    g.end_s = e.time_s + 6.0 * kScrDecayS;
    g.amplitude = e.amplitude;
    g.width_s = e.width_s;
    const std::size_t lo = to_index(e.time_s, fs, n);
    for (std::size_t i = lo; i < n; ++i)
      x[i] += e.amplitude * bateman(static_cast<double>(i) / fs - e.time_s, tau_r);
    truth.push_back(g);
  }
  add_noise(x, spec);
  SynthSession out{Recording(fs, std::move(x), Channel::EDA), std::move(truth), {}};
  overlap_warnings(plan, out.warnings);
  return out;
}

std::vector<bool> label_candidates(const std::vector<PeakCandidate>& cands,
                                   const std::vector<GroundTruth>& truth,
                                   double sample_rate_hz) {
  std::vector<bool> labels;
  labels.reserve(cands.size());
  for (const auto& c : cands) {
    const double t = static_cast<double>(c.center_index) / sample_rate_hz;
    const GroundTruth* best = nullptr;
    for (const auto& g : truth) {
      if (t < g.start_s || t > g.end_s) continue;
      if (!best || std::fabs(t - g.time_s) < std::fabs(t - best->time_s)) best = &g;
    }
    labels.push_back(best && best->kind == EventKind::Blink);
  }
  return labels;
}

}  // namespace blinkforge
