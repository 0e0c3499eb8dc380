#include "blinkforge/peaks.hpp"

#include "blinkforge/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace blinkforge {
namespace {

std::size_t settle_local_minimum(std::span<const double> x, std::size_t p) {
  const std::size_t n = x.size();
  for (;;) {
    const std::size_t lo = p == 0 ? 0 : p - 1;
    const std::size_t hi = std::min(p + 1, n - 1);
    std::size_t best = lo;
    for (std::size_t j = lo + 1; j <= hi; ++j)
      if (x[j] < x[best]) best = j;
    if (x[best] >= x[p]) return p;
    p = best;
  }
}

MinimumSearch search(std::span<const double> x, long p, long w, long m, int depth) {
  ++depth;
  const long n = static_cast<long>(x.size());
  if (std::labs(w) < 1 || m <= 0)
    return {settle_local_minimum(x, static_cast<std::size_t>(p)), depth};

  const long d = w > 0 ? 1 : -1;
  long p_best = p;
  double x_best = x[static_cast<std::size_t>(p)];
  if (d > 0) {
    const long end = std::min(p + m, n);
    for (long i = p; i < end; i += w) {
      const double xi = x[static_cast<std::size_t>(i)];
      if (xi >= x_best && i != p)
        return search(x, i - w, w / 4, std::max(0L, m - d * std::labs(i - w - p)), depth);
      p_best = i;
      x_best = xi;
    }
  } else {
    const long end = p - m;
    for (long i = p; i > end && i >= 0; i += w) {
      const double xi = x[static_cast<std::size_t>(i)];
      if (xi >= x_best && i != p)
        return search(x, i - w, w / 4, std::max(0L, m - d * std::labs(i - w - p)), depth);
      p_best = i;
      x_best = xi;
    }
  }
  return search(x, p_best, w / 2, m - 1, depth);
}

std::size_t walk_downhill(std::span<const double> x, std::size_t i, int dir) {
  if (dir < 0) {
    while (i > 0 && x[i - 1] < x[i]) --i;
  } else {
    while (i + 1 < x.size() && x[i + 1] < x[i]) ++i;
  }
  return i;
}

}  // namespace

void SearchParams::validate() const {
  if (!(prominence_min > 0 && width_min_s > 0 && width_max_s > 0 && height_min > 0 &&
        baseline_window_s > 0))
    fail(ErrorKind::InvalidArgument, "peak search parameters must be positive");
  if (!(width_min_s < width_max_s))
    fail(ErrorKind::InvalidArgument, "width_min_s must be below width_max_s");
}

std::vector<std::size_t> local_maxima(std::span<const double> x) {
  std::vector<std::size_t> peaks;
  const std::size_t n = x.size();
  if (n < 3) return peaks;
  std::size_t i = 1;
  while (i + 1 < n) {
    if (x[i - 1] < x[i]) {
      std::size_t ahead = i + 1;
      while (ahead + 1 < n && x[ahead] == x[i]) ++ahead;
      if (x[ahead] < x[i]) peaks.push_back(i);
      i = ahead;
    } else {
      ++i;
    }
  }
  return peaks;
}

Prominence peak_prominence(std::span<const double> x, std::size_t peak) {
  const double top = x[peak];
  Prominence out;

  double left_min = top;
  out.left_base = peak;
  for (std::size_t i = peak + 1; i-- > 0;) {
    if (x[i] > top) break;
    if (x[i] < left_min) {
      left_min = x[i];
      out.left_base = i;
    }
  }
  double right_min = top;
  out.right_base = peak;
  for (std::size_t i = peak; i < x.size(); ++i) {
    if (x[i] > top) break;
    if (x[i] < right_min) {
      right_min = x[i];
      out.right_base = i;
    }
  }
  out.prominence = top - std::max(left_min, right_min);
  return out;
}

double peak_width_samples(std::span<const double> x, std::size_t peak,
                          const Prominence& prom, double rel_height) {
  const double level = x[peak] - prom.prominence * rel_height;

  std::size_t i = peak;
  while (prom.left_base < i && level < x[i]) --i;
  double left_ip = static_cast<double>(i);
  if (x[i] < level) left_ip += (level - x[i]) / (x[i + 1] - x[i]);

  i = peak;
  while (i < prom.right_base && level < x[i]) ++i;
  double right_ip = static_cast<double>(i);
  if (x[i] < level) right_ip -= (level - x[i]) / (x[i - 1] - x[i]);

  return right_ip - left_ip;
}

std::vector<PeakCandidate> detect_peaks(const Recording& rec, const SearchParams& params) {
  params.validate();
  if (rec.size() < 3) fail(ErrorKind::InvalidInput, "peak detection needs at least 3 samples");
  const auto x = rec.samples();

  std::vector<PeakCandidate> out;
  for (std::size_t p : local_maxima(x)) {
    const Prominence prom = peak_prominence(x, p);
    if (prom.prominence < params.prominence_min) continue;
    const double width_s = peak_width_samples(x, p, prom) / rec.sample_rate_hz();
    if (width_s < params.width_min_s) continue;
    out.push_back({p, x[p], prom.prominence, width_s});
  }
  return out;
}

bool passes_blink_prefilter(const PeakCandidate& cand, const SearchParams& params) {
  return cand.width_s <= params.width_max_s && cand.height >= params.height_min;
}

std::vector<PeakCandidate> blink_prefilter(std::span<const PeakCandidate> cands,
                                           const SearchParams& params) {
  std::vector<PeakCandidate> out;
  for (const auto& c : cands)
    if (passes_blink_prefilter(c, params)) out.push_back(c);
  return out;
}

MinimumSearch find_nearby_minimum_traced(std::span<const double> x, std::size_t p,
                                         long window, long max_points) {
  if (p >= x.size()) fail(ErrorKind::InvalidArgument, "start index out of bounds");
  if (window == 0) fail(ErrorKind::InvalidArgument, "search window must be non-zero");
  return search(x, static_cast<long>(p), window, std::max(0L, max_points), 0);
}

std::size_t find_nearby_minimum(std::span<const double> x, std::size_t p, long window,
                                long max_points) {
  return find_nearby_minimum_traced(x, p, window, max_points).index;
}

PeakSegment segment_peak(const Recording& rec, const PeakCandidate& cand,
                         const SearchParams& params) {
  const auto x = rec.samples();
  const std::size_t c = cand.center_index;
  if (c >= x.size()) fail(ErrorKind::InvalidArgument, "candidate outside recording");
  const long w = static_cast<long>(rec.samples_for(params.baseline_window_s));

  std::size_t left = find_nearby_minimum(x, c, -w, w);
  std::size_t right = find_nearby_minimum(x, c, w, w);

  const auto exceeds_center = [&](std::size_t a, std::size_t b) {
    for (std::size_t i = a; i <= b; ++i)
      if (x[i] > x[c]) return true;
    return false;
  };
  if (left >= c || exceeds_center(left, c)) left = walk_downhill(x, c, -1);
  if (right <= c || exceeds_center(c, right)) right = walk_downhill(x, c, +1);

  PeakSegment seg;
  seg.candidate = cand;
  seg.left_base_index = left;
  seg.right_base_index = right;
  seg.edge_truncated = left == 0 || right + 1 == x.size();
  seg.slice.assign(x.begin() + static_cast<std::ptrdiff_t>(left),
                   x.begin() + static_cast<std::ptrdiff_t>(right) + 1);
  return seg;
}

std::vector<PeakSegment> segment_all(const Recording& filtered, const SearchParams& params,
                                     bool apply_prefilter) {
  auto cands = detect_peaks(filtered, params);
  if (apply_prefilter) cands = blink_prefilter(cands, params);
  std::vector<PeakSegment> out;
  out.reserve(cands.size());
  for (const auto& c : cands) out.push_back(segment_peak(filtered, c, params));
  return out;
}

std::size_t count_scr(std::span<const double> phasic, double threshold) {
  std::size_t count = 0;
  for (std::size_t p : local_maxima(phasic)) {
    if (phasic[p] <= threshold) continue;
    if (peak_prominence(phasic, p).prominence > threshold) ++count;
  }
  return count;
}

}  // namespace blinkforge
