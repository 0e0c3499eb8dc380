#include "blinkforge/eda_features.hpp"

#include "blinkforge/detail/linalg.hpp"
#include "blinkforge/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace blinkforge {
namespace {

double mean_of(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

double pvar(std::span<const double> x) {
  const double m = mean_of(x);
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return ss / static_cast<double>(x.size());
}

std::vector<double> diff(std::span<const double> x) {
  std::vector<double> d;
  d.reserve(x.size() > 0 ? x.size() - 1 : 0);
  for (std::size_t i = 1; i < x.size(); ++i) d.push_back(x[i] - x[i - 1]);
  return d;
}

double shannon_bits(const std::vector<double>& weights) {
  double total = 0.0;
  for (double w : weights) total += w;
  if (total <= 0.0) return 0.0;
  double h = 0.0;
  for (double w : weights) {
    if (w <= 0.0) continue;
    const double p = w / total;
    h -= p * std::log2(p);
  }
  return h;
}

}  // namespace

TonicPhasic tonic_phasic_split(const Recording& rec, const EdaSplitParams& params) {
  if (rec.channel() != Channel::EDA)
    fail(ErrorKind::InvalidChannel, "tonic/phasic split needs an EDA recording");
  Recording filtered = preprocess_eda(rec, params.filter);
  Recording tonic = butterworth_lowpass(filtered, 1, params.tonic_cutoff_hz, params.filter.mode);
  std::vector<double> phasic(filtered.size());
  for (std::size_t i = 0; i < phasic.size(); ++i)
    phasic[i] = filtered.values()[i] - tonic.values()[i];
  Recording ph = filtered.with_samples(std::move(phasic));
  return {std::move(filtered), std::move(tonic), std::move(ph)};
}

std::vector<EdaWindow> window_series(const Recording& rec, double window_s) {
  if (!(window_s > 0.0)) fail(ErrorKind::InvalidArgument, "window length must be positive");
  const std::size_t len = rec.samples_for(window_s);
  std::vector<EdaWindow> out;
  const auto x = rec.samples();
  for (std::size_t start = 0; start + len <= x.size(); start += len)
    out.push_back({start, std::vector<double>(x.begin() + static_cast<std::ptrdiff_t>(start),
                                              x.begin() + static_cast<std::ptrdiff_t>(start + len))});
  return out;
}

double petrosian_fd(std::span<const double> x) {
  if (x.size() < 3) fail(ErrorKind::InvalidInput, "Petrosian FD needs at least 3 samples");
  const auto d = diff(x);
  std::size_t changes = 0;
  for (std::size_t i = 1; i < d.size(); ++i)
    if (d[i] * d[i - 1] < 0.0) ++changes;
  const double n = static_cast<double>(x.size());
  const double ln = std::log10(n);
  return ln / (ln + std::log10(n / (n + 0.4 * static_cast<double>(changes))));
}

double higuchi_fd(std::span<const double> x, int kmax) {
  if (kmax < 2) fail(ErrorKind::InvalidArgument, "Higuchi kmax must be at least 2");
  const std::size_t n = x.size();
  if (n < 2 * static_cast<std::size_t>(kmax))
    fail(ErrorKind::InvalidInput, "Higuchi FD needs at least 2*kmax samples");

  std::vector<double> log_k, log_l;
  for (int k = 1; k <= kmax; ++k) {
    const auto ks = static_cast<std::size_t>(k);
    double sum_l = 0.0;
    for (std::size_t m = 0; m < ks; ++m) {
      const std::size_t steps = (n - m - 1) / ks;
      if (steps == 0) continue;
      double len = 0.0;
      for (std::size_t i = 1; i <= steps; ++i) len += std::fabs(x[m + i * ks] - x[m + (i - 1) * ks]);
      sum_l += len * static_cast<double>(n - 1) / (static_cast<double>(steps) * k) / k;
    }
    const double l = sum_l / k;
    if (l <= 0.0) continue;
    log_k.push_back(std::log(static_cast<double>(k)));
    log_l.push_back(std::log(l));
  }
  if (log_k.size() < 2) return 1.0;
  return -detail::ols_slope(log_k, log_l);
}

double katz_fd(std::span<const double> x) {
  if (x.size() < 2) fail(ErrorKind::InvalidInput, "Katz FD needs at least 2 samples");
  double path = 0.0, reach = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    const double dy = x[i] - x[i - 1];
    path += std::sqrt(1.0 + dy * dy);
    const double ry = x[i] - x[0];
    reach = std::max(reach, std::sqrt(static_cast<double>(i * i) + ry * ry));
  }
  if (path <= 0.0) return 1.0;
  const double ln = std::log10(static_cast<double>(x.size() - 1));
  return ln / (ln + std::log10(reach / path));
}

std::vector<std::size_t> default_dfa_scales(std::size_t n) {
  const double lo = 4.0, hi = static_cast<double>(n / 4);
  std::vector<std::size_t> out;
  if (hi < lo) return out;
  for (int i = 0; i < 10; ++i) {
    const double s = lo * std::pow(hi / lo, i / 9.0);
    const auto r = static_cast<std::size_t>(std::lround(s));
    if (out.empty() || out.back() != r) out.push_back(r);
  }
  return out;
}

double dfa_alpha(std::span<const double> x, std::span<const std::size_t> scales) {
  if (scales.size() < 4) fail(ErrorKind::InvalidInput, "DFA needs at least 4 scales");
  const std::size_t smax = *std::max_element(scales.begin(), scales.end());
  const std::size_t smin = *std::min_element(scales.begin(), scales.end());
  if (smin < 3) fail(ErrorKind::InvalidArgument, "DFA scales must be at least 3 samples");
  if (x.size() < 4 * smax) fail(ErrorKind::InvalidInput, "DFA needs length >= 4 * max scale");

  const double mu = mean_of(x);
  std::vector<double> profile(x.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) profile[i] = acc += x[i] - mu;

  std::vector<double> log_s, log_f;
  for (std::size_t s : scales) {
    const std::size_t boxes = x.size() / s;
    // Index abscissa 0..s-1 is the same in every box.
    const double tm = (static_cast<double>(s) - 1.0) / 2.0;
    double sxx = 0.0;
    for (std::size_t j = 0; j < s; ++j) sxx += (j - tm) * (j - tm);
    double ss = 0.0;
    for (std::size_t b = 0; b < boxes; ++b) {
      const double* y = profile.data() + b * s;
      double ym = 0.0;
      for (std::size_t j = 0; j < s; ++j) ym += y[j];
      ym /= static_cast<double>(s);
      double sxy = 0.0;
      for (std::size_t j = 0; j < s; ++j) sxy += (j - tm) * (y[j] - ym);
      const double slope = sxy / sxx;
      for (std::size_t j = 0; j < s; ++j) {
        const double r = y[j] - (ym + slope * (j - tm));
        ss += r * r;
      }
    }
    const double f = std::sqrt(ss / static_cast<double>(boxes * s));
    if (f <= 0.0) continue;
    log_s.push_back(std::log(static_cast<double>(s)));
    log_f.push_back(std::log(f));
  }
  if (log_s.size() < 2) return 0.0;
  return detail::ols_slope(log_s, log_f);
}

double dfa_alpha(std::span<const double> x) {
  const auto scales = default_dfa_scales(x.size());
  return dfa_alpha(x, scales);
}

double hjorth_activity(std::span<const double> x) {
  if (x.empty()) fail(ErrorKind::InvalidInput, "Hjorth activity needs samples");
  return pvar(x);
}

Hjorth hjorth(std::span<const double> x) {
  if (x.size() < 3) fail(ErrorKind::InvalidInput, "Hjorth parameters need at least 3 samples");
  const auto dx = diff(x);
  const auto ddx = diff(dx);
  const double v0 = pvar(x), v1 = pvar(dx), v2 = pvar(ddx);

  double peak = 0.0;
  for (double s : x) peak = std::max(peak, std::fabs(s));
  const double floor = 1e-12 * peak;
  if (v0 <= floor * floor)
    fail(ErrorKind::DegenerateInput, "Hjorth mobility undefined for a constant signal");
  if (v1 <= 1e-24 * v0)
    fail(ErrorKind::DegenerateInput, "Hjorth complexity undefined for a constant-slope signal");

  Hjorth h;
  h.activity = v0;
  h.mobility = std::sqrt(v1 / v0);
  h.complexity = std::sqrt(v2 / v1) / h.mobility;
  return h;
}

double spectral_entropy(std::span<const double> x, double sample_rate_hz) {
  if (x.size() < 8) fail(ErrorKind::InvalidInput, "spectral entropy needs at least 8 samples");
  if (!(sample_rate_hz > 0.0)) fail(ErrorKind::InvalidArgument, "sample rate must be positive");
  const std::size_t n = x.size();
  const std::size_t bins = n / 2;

  std::vector<double> cos_t(n), sin_t(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double ang = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
    cos_t[j] = std::cos(ang);
    sin_t[j] = std::sin(ang);
  }
  std::vector<double> power(bins);
  for (std::size_t k = 1; k <= bins; ++k) {
    double re = 0.0, im = 0.0;
    std::size_t idx = 0;
    for (std::size_t j = 0; j < n; ++j) {
      re += x[j] * cos_t[idx];
      im -= x[j] * sin_t[idx];
      idx += k;
      if (idx >= n) idx -= n;
    }
    power[k - 1] = re * re + im * im;
  }
  if (bins < 2) return 0.0;
  return shannon_bits(power) / std::log2(static_cast<double>(bins));
}

double permutation_entropy(std::span<const double> x, int order, int delay) {
  if (order < 2 || order > 8) fail(ErrorKind::InvalidArgument, "permutation order must be in 2..8");
  if (delay < 1) fail(ErrorKind::InvalidArgument, "permutation delay must be positive");
  const auto m = static_cast<std::size_t>(order), tau = static_cast<std::size_t>(delay);
  if (x.size() < m * tau + 1)
    fail(ErrorKind::InvalidInput, "permutation entropy needs length >= order*delay + 1");

  std::size_t patterns = 1;
  for (std::size_t i = 2; i <= m; ++i) patterns *= i;

  std::vector<double> counts;
  std::vector<std::size_t> idx(m);
  const std::size_t count = x.size() - (m - 1) * tau;
  std::vector<std::size_t> code_of(count);
  for (std::size_t j = 0; j < count; ++j) {
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return x[j + a * tau] < x[j + b * tau]; });
    std::size_t code = 0;
    for (std::size_t v : idx) code = code * m + v;
    code_of[j] = code;
  }
  std::sort(code_of.begin(), code_of.end());
  for (std::size_t i = 0; i < code_of.size();) {
    std::size_t k = i;
    while (k < code_of.size() && code_of[k] == code_of[i]) ++k;
    counts.push_back(static_cast<double>(k - i));
    i = k;
  }
  return shannon_bits(counts) / std::log2(static_cast<double>(patterns));
}

double EdaFeatures::at(std::string_view name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return values[i];
  fail(ErrorKind::ConfigError, "unknown EDA feature '" + std::string(name) + "'");
}

EdaFeatures extract_eda_features(std::span<const double> x, double fs,
                                 const EdaFeatureParams& params) {
  if (x.size() < 32) fail(ErrorKind::InvalidInput, "EDA window needs at least 32 samples");
  for (double v : x)
    if (!std::isfinite(v)) fail(ErrorKind::InvalidInput, "non-finite sample in EDA window");

  const auto vel = derivative(x, fs, 1);
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  const double var_x = pvar(x);
  const double var_v = pvar(vel);

  EdaFeatures out;
  double mobility = std::numeric_limits<double>::quiet_NaN();
  double complexity = mobility;
  try {
    const Hjorth h = hjorth(x);
    mobility = h.mobility;
    complexity = h.complexity;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::DegenerateInput) throw;
    out.hjorth_absent = true;
  }
  const int kmax = std::min(params.higuchi_kmax, static_cast<int>(x.size() / 2));

  out.values = {
      mean_of(x),
      std::sqrt(var_x),
      *hi - *lo,
      mean_of(vel),
      std::sqrt(var_v),
      petrosian_fd(x),
      higuchi_fd(x, kmax),
      dfa_alpha(x),
      katz_fd(x),
      var_x,
      mobility,
      complexity,
      var_v,
      spectral_entropy(x, fs),
      permutation_entropy(x, params.permutation_order, params.permutation_delay),
  };
  out.names.assign(eda::kFeatureNames.begin(), eda::kFeatureNames.end());
  return out;
}

EdaFeatures extract_eda_features(const EdaWindow& window, double fs,
                                 const EdaFeatureParams& params) {
  return extract_eda_features(window.samples, fs, params);
}

}  // namespace blinkforge
