#include "blinkforge/signal.hpp"

#include "blinkforge/detail/linalg.hpp"
#include "blinkforge/error.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

namespace blinkforge {
namespace {

void require_finite(std::span<const double> x) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]))
      fail(ErrorKind::InvalidInput, "non-finite sample at index " + std::to_string(i));
  }
}

// Transposed direct form II, state primed with the steady state for a
// constant input equal to x.front().
void run_sections(const std::vector<Biquad>& sos, std::vector<double>& x) {
  if (x.empty()) return;
  double level = x.front();
  for (const Biquad& s : sos) {
    // Each section has unit DC gain, so the steady output equals the input.
    double z1 = (1.0 - s.b[0]) * level;
    double z2 = (s.b[2] - s.a[2]) * level;
    for (double& v : x) {
      const double in = v;
      const double out = s.b[0] * in + z1;
      z1 = s.b[1] * in - s.a[1] * out + z2;
      z2 = s.b[2] * in - s.a[2] * out;
      v = out;
    }
  }
}

std::vector<double> odd_extend(std::span<const double> x, std::size_t pad) {
  const std::size_t n = x.size();
  std::vector<double> ext;
  ext.reserve(n + 2 * pad);
  for (std::size_t k = pad; k >= 1; --k) ext.push_back(2.0 * x[0] - x[k]);
  ext.insert(ext.end(), x.begin(), x.end());
  for (std::size_t k = 1; k <= pad; ++k) ext.push_back(2.0 * x[n - 1] - x[n - 1 - k]);
  return ext;
}

// Center-value weights of the least-squares polynomial of order `order` over
// sample offsets [lo, hi] relative to the evaluation point.
std::vector<double> sg_weights(int lo, int hi, int order) {
  const int len = hi - lo + 1;
  const int q = std::min(order, len - 1);
  const std::size_t m = static_cast<std::size_t>(q) + 1;
  const double scale = std::max({1.0, std::fabs(static_cast<double>(lo)),
                                 std::fabs(static_cast<double>(hi))});

  std::vector<double> gram(m * m, 0.0);
  for (int j = lo; j <= hi; ++j) {
    const double u = j / scale;
    std::vector<double> pw(2 * m - 1, 1.0);
    for (std::size_t k = 1; k < pw.size(); ++k) pw[k] = pw[k - 1] * u;
    for (std::size_t r = 0; r < m; ++r)
      for (std::size_t c = 0; c < m; ++c) gram[r * m + c] += pw[r + c];
  }
  std::vector<double> e0(m, 0.0);
  e0[0] = 1.0;
  auto coef = detail::solve_dense(gram, e0, m);
  if (!coef) fail(ErrorKind::InvalidArgument, "Savitzky-Golay design is singular");

  std::vector<double> w;
  w.reserve(static_cast<std::size_t>(len));
  for (int j = lo; j <= hi; ++j) {
    const double u = j / scale;
    double p = 1.0, acc = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      acc += (*coef)[k] * p;
      p *= u;
    }
    w.push_back(acc);
  }
  return w;
}

}  // namespace

std::vector<Biquad> butterworth_lowpass_sos(int order, double cutoff_hz,
                                            double sample_rate_hz) {
  if (order < 1 || order > 8)
    fail(ErrorKind::InvalidArgument, "Butterworth order must be in 1..8");
  if (!(cutoff_hz > 0.0) || !(cutoff_hz < sample_rate_hz / 2.0))
    fail(ErrorKind::InvalidArgument,
         "cutoff must lie in (0, Nyquist); got " + std::to_string(cutoff_hz) +
             " Hz at fs=" + std::to_string(sample_rate_hz) + " Hz");

  using cd = std::complex<double>;
  const double fs2 = 2.0 * sample_rate_hz;
  const double warped = fs2 * std::tan(std::numbers::pi * cutoff_hz / sample_rate_hz);

  std::vector<Biquad> sos;
  for (int k = 0; k < order / 2; ++k) {
    const double theta = std::numbers::pi * (2.0 * k + order + 1) / (2.0 * order);
    const cd s = warped * std::polar(1.0, theta);
    const cd z = (fs2 + s) / (fs2 - s);
    Biquad q;
    q.b = {1.0, 2.0, 1.0};
    q.a = {1.0, -2.0 * z.real(), std::norm(z)};
    const double g = (q.a[0] + q.a[1] + q.a[2]) / 4.0;
    for (double& v : q.b) v *= g;
    sos.push_back(q);
  }
  if (order % 2 == 1) {
    const double s = -warped;
    const double z = (fs2 + s) / (fs2 - s);
    Biquad q;
    q.b = {1.0, 1.0, 0.0};
    q.a = {1.0, -z, 0.0};
    const double g = (1.0 - z) / 2.0;
    for (double& v : q.b) v *= g;
    sos.push_back(q);
  }
  return sos;
}

double butterworth_digital_magnitude(int order, double cutoff_hz,
                                     double sample_rate_hz, double f_hz) {
  const double r = std::tan(std::numbers::pi * f_hz / sample_rate_hz) /
                   std::tan(std::numbers::pi * cutoff_hz / sample_rate_hz);
  return 1.0 / std::sqrt(1.0 + std::pow(r, 2.0 * order));
}

double butterworth_analog_magnitude(int order, double cutoff_hz, double f_hz) {
  return 1.0 / std::sqrt(1.0 + std::pow(f_hz / cutoff_hz, 2.0 * order));
}

std::vector<double> butterworth_lowpass(std::span<const double> x,
                                        double sample_rate_hz, int order,
                                        double cutoff_hz, FilterMode mode) {
  require_finite(x);
  const auto sos = butterworth_lowpass_sos(order, cutoff_hz, sample_rate_hz);
  const std::size_t n = x.size();
  if (n < 2) fail(ErrorKind::InvalidInput, "filter needs at least 2 samples");
  const std::size_t pad = std::min(n - 1, 3 * (2 * sos.size() + 1));

  std::vector<double> ext = odd_extend(x, pad);
  run_sections(sos, ext);
  if (mode == FilterMode::ZeroPhase) {
    std::reverse(ext.begin(), ext.end());
    run_sections(sos, ext);
    std::reverse(ext.begin(), ext.end());
  }
  return {ext.begin() + static_cast<std::ptrdiff_t>(pad),
          ext.begin() + static_cast<std::ptrdiff_t>(pad + n)};
}

Recording butterworth_lowpass(const Recording& rec, int order, double cutoff_hz,
                              FilterMode mode) {
  return rec.with_samples(
      butterworth_lowpass(rec.samples(), rec.sample_rate_hz(), order, cutoff_hz, mode));
}

std::vector<double> savitzky_golay(std::span<const double> x,
                                   std::size_t window_samples, int polyorder) {
  require_finite(x);
  if (window_samples == 0 || window_samples % 2 == 0)
    fail(ErrorKind::InvalidArgument, "Savitzky-Golay window must be odd and positive");
  if (polyorder < 0 || static_cast<std::size_t>(polyorder) >= window_samples)
    fail(ErrorKind::InvalidArgument, "polyorder must be in [0, window)");
  if (window_samples > x.size())
    fail(ErrorKind::InvalidArgument, "Savitzky-Golay window longer than signal");

  const int n = static_cast<int>(x.size());
  const int half = static_cast<int>(window_samples / 2);
  const auto center = sg_weights(-half, half, polyorder);

  std::vector<double> y(x.size());
  for (int i = 0; i < n; ++i) {
    const int lo = std::max(0, i - half);
    const int hi = std::min(n - 1, i + half);
    double acc = 0.0;
    if (lo == i - half && hi == i + half) {
      for (int j = lo; j <= hi; ++j) acc += center[static_cast<std::size_t>(j - lo)] * x[j];
    } else {
      const auto w = sg_weights(lo - i, hi - i, polyorder);
      for (int j = lo; j <= hi; ++j) acc += w[static_cast<std::size_t>(j - lo)] * x[j];
    }
    y[static_cast<std::size_t>(i)] = acc;
  }
  return y;
}

Recording savitzky_golay(const Recording& rec, std::size_t window_samples,
                         int polyorder) {
  return rec.with_samples(savitzky_golay(rec.samples(), window_samples, polyorder));
}

std::size_t odd_window_samples(double seconds, double sample_rate_hz) {
  const double raw = seconds * sample_rate_hz;
  // Nearest odd integer: 2*round((raw-1)/2)+1.
  const double odd = 2.0 * std::round((raw - 1.0) / 2.0) + 1.0;
  return odd < 3.0 ? 3 : static_cast<std::size_t>(odd);
}

std::vector<double> derivative(std::span<const double> x, double sample_rate_hz,
                               int n) {
  if (n != 1 && n != 2) fail(ErrorKind::InvalidArgument, "derivative order must be 1 or 2");
  const std::size_t len = x.size();
  if (len < 3) fail(ErrorKind::InvalidInput, "derivative needs at least 3 samples");

  std::vector<double> d(len);
  if (n == 1) {
    const double half_fs = 0.5 * sample_rate_hz;
    d[0] = (x[1] - x[0]) * sample_rate_hz;
    for (std::size_t i = 1; i + 1 < len; ++i) d[i] = (x[i + 1] - x[i - 1]) * half_fs;
    d[len - 1] = (x[len - 1] - x[len - 2]) * sample_rate_hz;
  } else {
    const double fs2 = sample_rate_hz * sample_rate_hz;
    for (std::size_t i = 1; i + 1 < len; ++i)
      d[i] = (x[i + 1] - 2.0 * x[i] + x[i - 1]) * fs2;
    d[0] = d[1];
    d[len - 1] = d[len - 2];
  }
  return d;
}

Recording derivative(const Recording& rec, int n) {
  return rec.with_samples(derivative(rec.samples(), rec.sample_rate_hz(), n));
}

std::vector<double> minmax_normalize(std::span<const double> values) {
  std::vector<double> out(values.size(), 0.0);
  if (values.empty()) return out;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double min = *lo, range = *hi - *lo;
  if (range == 0.0) return out;
  for (std::size_t i = 0; i < values.size(); ++i) out[i] = (values[i] - min) / range;
  return out;
}

Recording preprocess_eog(const Recording& rec, const EogFilterParams& params) {
  Recording out = butterworth_lowpass(rec, params.order, params.cutoff_hz, params.mode);
  if (params.savitzky_golay) {
    const std::size_t w = std::min(odd_window_samples(params.sg_window_s, rec.sample_rate_hz()),
                                   out.size() % 2 == 1 ? out.size() : out.size() - 1);
    out = savitzky_golay(out, w, std::min<int>(params.sg_polyorder, static_cast<int>(w) - 1));
  }
  return out;
}

Recording preprocess_eda(const Recording& rec, const EdaFilterParams& params) {
  return butterworth_lowpass(rec, params.order, params.cutoff_hz, params.mode);
}

}  // namespace blinkforge
