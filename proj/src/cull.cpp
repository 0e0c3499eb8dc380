#include "blinkforge/cull.hpp"

#include "blinkforge/error.hpp"
#include "blinkforge/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <set>
#include <unordered_set>

namespace blinkforge {

__extension__ using u128 = unsigned __int128;

FeatureTable::FeatureTable(std::vector<std::string> feature_names)
    : names_(std::move(feature_names)), columns_(names_.size()) {
  for (std::size_t i = 0; i < names_.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (names_[i] == names_[j])
        fail(ErrorKind::InvalidInput, "duplicate feature column '" + names_[i] + "'");
}

void FeatureTable::add_row(std::string id, std::span<const double> values,
                           std::optional<bool> label) {
  if (values.size() != names_.size())
    fail(ErrorKind::InvalidInput, "row '" + id + "' has " + std::to_string(values.size()) +
                                      " values, expected " + std::to_string(names_.size()));
  for (std::size_t f = 0; f < values.size(); ++f) columns_[f].push_back(values[f]);
  ids_.push_back(std::move(id));
  labels_.push_back(label);
}

std::optional<std::size_t> FeatureTable::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return i;
  return std::nullopt;
}

std::size_t FeatureTable::require(std::string_view name) const {
  if (auto i = index_of(name)) return *i;
  fail(ErrorKind::ConfigError, "unknown feature '" + std::string(name) + "'");
}

std::vector<double> FeatureTable::row_values(std::size_t row) const {
  std::vector<double> out(names_.size());
  for (std::size_t f = 0; f < names_.size(); ++f) out[f] = columns_[f][row];
  return out;
}

bool FeatureTable::fully_labeled() const noexcept {
  return std::all_of(labels_.begin(), labels_.end(), [](auto l) { return l.has_value(); });
}

std::vector<bool> FeatureTable::label_vector() const {
  std::vector<bool> out;
  out.reserve(labels_.size());
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (!labels_[i]) fail(ErrorKind::InvalidInput, "row '" + ids_[i] + "' has no label");
    out.push_back(*labels_[i]);
  }
  return out;
}

FeatureTable FeatureTable::filter_rows(const std::vector<bool>& keep) const {
  if (keep.size() != rows()) fail(ErrorKind::InvalidInput, "row mask length mismatch");
  FeatureTable out(names_);
  for (std::size_t r = 0; r < rows(); ++r) {
    if (!keep[r]) continue;
    const auto vals = row_values(r);
    out.add_row(ids_[r], vals, labels_[r]);
  }
  return out;
}

FeatureTable FeatureTable::select(std::span<const std::string> names) const {
  std::vector<std::size_t> idx;
  for (const auto& n : names) idx.push_back(require(n));
  FeatureTable out(std::vector<std::string>(names.begin(), names.end()));
  out.ids_ = ids_;
  out.labels_ = labels_;
  for (std::size_t k = 0; k < idx.size(); ++k) out.columns_[k] = columns_[idx[k]];
  return out;
}

void CullConfig::set(std::string feature, double lower, double upper) {
  for (auto& b : bounds) {
    if (b.feature == feature) {
      b.lower = lower;
      b.upper = upper;
      return;
    }
  }
  bounds.push_back({std::move(feature), lower, upper});
}

const FeatureBounds* CullConfig::find(std::string_view feature) const {
  for (const auto& b : bounds)
    if (b.feature == feature) return &b;
  return nullptr;
}

void CullConfig::validate() const {
  for (std::size_t i = 0; i < bounds.size(); ++i) {
    const auto& b = bounds[i];
    if (!std::isfinite(b.lower) || !std::isfinite(b.upper))
      fail(ErrorKind::ConfigError, "non-finite bound for '" + b.feature + "'");
    if (b.lower > b.upper)
      fail(ErrorKind::ConfigError, "lower bound above upper bound for '" + b.feature + "'");
    for (std::size_t j = 0; j < i; ++j)
      if (bounds[j].feature == b.feature)
        fail(ErrorKind::ConfigError, "duplicate bound for '" + b.feature + "'");
  }
}

EvalReport EvalReport::from_counts(std::uint64_t tp, std::uint64_t fp, std::uint64_t tn,
                                   std::uint64_t fn) {
  EvalReport r;
  r.tp = tp;
  r.fp = fp;
  r.tn = tn;
  r.fn = fn;
  const std::uint64_t total = tp + fp + tn + fn;
  r.accuracy = total > 0 ? static_cast<double>(tp + tn) / static_cast<double>(total) : 0.0;
  const std::uint64_t denom = 2 * tp + fp + fn;
  r.f1 = denom > 0 ? static_cast<double>(2 * tp) / static_cast<double>(denom) : 0.0;
  return r;
}

std::vector<bool> apply_bounds(const FeatureTable& table, const CullConfig& cfg) {
  cfg.validate();
  std::vector<bool> pred(table.rows(), true);
  for (const auto& b : cfg.bounds) {
    const auto col = table.column(b.feature);
    for (std::size_t r = 0; r < col.size(); ++r)
      if (!(col[r] >= b.lower && col[r] <= b.upper)) pred[r] = false;
  }
  return pred;
}

EvalReport evaluate(const std::vector<bool>& predictions, const std::vector<bool>& labels) {
  if (predictions.size() != labels.size())
    fail(ErrorKind::InvalidInput, "prediction and label counts differ");
  std::uint64_t tp = 0, fp = 0, tn = 0, fn = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (predictions[i]) {
      labels[i] ? ++tp : ++fp;
    } else {
      labels[i] ? ++fn : ++tn;
    }
  }
  return EvalReport::from_counts(tp, fp, tn, fn);
}

EvalReport evaluate(const FeatureTable& table, const CullConfig& cfg) {
  return evaluate(apply_bounds(table, cfg), table.label_vector());
}

BoundGrid BoundGrid::over(std::span<const double> values, int bins) {
  if (bins < 1) fail(ErrorKind::InvalidArgument, "bin count must be positive");
  BoundGrid g;
  g.bins = bins;
  bool any = false;
  for (double v : values) {
    if (!std::isfinite(v)) continue;
    if (!any) {
      g.min = g.max = v;
      any = true;
    }
    g.min = std::min(g.min, v);
    g.max = std::max(g.max, v);
  }
  g.delta = (g.max - g.min) / bins;
  return g;
}

double BoundGrid::lower(int steps) const {
  if (steps <= 0) return min;
  if (steps >= bins) return max;
  return min + steps * delta;
}

double BoundGrid::upper(int steps) const { return lower(bins - steps); }

int BoundGrid::max_lower_steps(double x) const {
  if (!(x >= min)) return -1;
  int lo = 0, hi = bins;
  while (lo < hi) {
    const int mid = (lo + hi + 1) / 2;
    if (lower(mid) <= x) lo = mid;
    else hi = mid - 1;
  }
  return lo;
}

int BoundGrid::max_upper_steps(double x) const {
  if (!(x <= max)) return -1;
  int lo = 0, hi = bins;
  while (lo < hi) {
    const int mid = (lo + hi + 1) / 2;
    if (upper(mid) >= x) lo = mid;
    else hi = mid - 1;
  }
  return lo;
}

namespace {

struct Counts {
  std::uint64_t tp = 0, fp = 0;
};

// Rows reduced to step limits per feature: row r passes (a, b) on feature f
// iff a <= lim_lo[f][r] and b <= lim_hi[f][r].
struct StepLimits {
  std::vector<BoundGrid> grids;
  std::vector<std::vector<int>> lim_lo, lim_hi;
  std::vector<bool> labels;
  std::uint64_t positives = 0, negatives = 0;
};

StepLimits step_limits(const FeatureTable& table, std::span<const std::size_t> cols, int bins) {
  StepLimits s;
  s.labels = table.label_vector();
  for (bool l : s.labels) l ? ++s.positives : ++s.negatives;
  for (std::size_t c : cols) {
    const auto col = table.column(c);
    BoundGrid g = BoundGrid::over(col, bins);
    std::vector<int> lo(col.size()), hi(col.size());
    for (std::size_t r = 0; r < col.size(); ++r) {
      lo[r] = g.max_lower_steps(col[r]);
      hi[r] = g.max_upper_steps(col[r]);
      if (lo[r] < 0 || hi[r] < 0) lo[r] = hi[r] = -1;
    }
    s.grids.push_back(g);
    s.lim_lo.push_back(std::move(lo));
    s.lim_hi.push_back(std::move(hi));
  }
  return s;
}

// Best-so-far under the documented total order.
struct Candidate {
  bool valid = false;
  std::uint64_t tp = 0, fp = 0;
  int steps = 0;
  std::vector<int> coords;  // lower_0, upper_0, lower_1, ...
};

class Ranker {
 public:
  Ranker(std::uint64_t positives, std::uint64_t negatives) : pos_(positives), neg_(negatives) {}

  std::uint64_t correct(const Candidate& c) const { return c.tp + neg_ - c.fp; }

  // 2tp / (2tp + fp + fn) with fn = pos - tp; compared by cross-multiplying.
  static int compare_f1(std::uint64_t tp1, std::uint64_t d1, std::uint64_t tp2, std::uint64_t d2) {
    const u128 l = static_cast<u128>(tp1) * (d2 == 0 ? 1 : d2);
    const u128 r = static_cast<u128>(tp2) * (d1 == 0 ? 1 : d1);
    const u128 lhs = d1 == 0 ? 0 : l, rhs = d2 == 0 ? 0 : r;
    return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
  }
  std::uint64_t f1_denominator(std::uint64_t tp, std::uint64_t fp) const {
    return 2 * tp + fp + (pos_ - tp);
  }

  bool better(const Candidate& x, const Candidate& y) const {
    if (!y.valid) return true;
    const auto cx = correct(x), cy = correct(y);
    if (cx != cy) return cx > cy;
    const int f = compare_f1(x.tp, f1_denominator(x.tp, x.fp), y.tp, f1_denominator(y.tp, y.fp));
    if (f != 0) return f > 0;
    if (x.steps != y.steps) return x.steps < y.steps;
    return x.coords < y.coords;
  }

  // Could any configuration that keeps at most `tp_max` positives (and thus
  // at most tp_max + neg correct rows) with at least `steps_min` steps beat y?
  bool may_beat(std::uint64_t tp_max, int steps_min, const Candidate& y) const {
    if (!y.valid) return true;
    const std::uint64_t bound = tp_max + neg_;
    const std::uint64_t cy = correct(y);
    if (bound != cy) return bound > cy;
    // Reaching the bound needs fp = 0, which fixes F1 at 2tp/(tp + pos).
    const int f = compare_f1(tp_max, tp_max + pos_, y.tp, f1_denominator(y.tp, y.fp));
    if (f != 0) return f > 0;
    return steps_min <= y.steps;
  }

 private:
  std::uint64_t pos_, neg_;
};

class QueueSearch {
 public:
  QueueSearch(const StepLimits& s, int bins) : s_(s), bins_(bins), rank_(s.positives, s.negatives) {}

  Candidate run(std::uint64_t& nodes) {
    const std::size_t f = s_.grids.size();
    std::vector<int> start(2 * f, 0);
    std::deque<std::vector<int>> queue{start};
    std::set<std::vector<int>> visited{start};
    Candidate best;
    while (!queue.empty()) {
      std::vector<int> node = std::move(queue.front());
      queue.pop_front();
      Candidate c = evaluate(node);
      ++nodes;
      if (rank_.better(c, best)) best = std::move(c);
      for (std::size_t j = 0; j < 2 * f; ++j) {
        if (node[j & ~std::size_t{1}] + node[j | 1] >= bins_) continue;
        ++node[j];
        if (visited.insert(node).second) queue.push_back(node);
        --node[j];
      }
    }
    return best;
  }

 private:
  Candidate evaluate(const std::vector<int>& coords) const {
    Candidate c;
    c.valid = true;
    c.coords = coords;
    c.steps = std::accumulate(coords.begin(), coords.end(), 0);
    const std::size_t rows = s_.labels.size();
    for (std::size_t r = 0; r < rows; ++r) {
      bool pass = true;
      for (std::size_t f = 0; f < s_.grids.size() && pass; ++f)
        pass = coords[2 * f] <= s_.lim_lo[f][r] && coords[2 * f + 1] <= s_.lim_hi[f][r];
      if (!pass) continue;
      s_.labels[r] ? ++c.tp : ++c.fp;
    }
    return c;
  }

  const StepLimits& s_;
  int bins_;
  Ranker rank_;
};

class BranchAndBound {
 public:
  BranchAndBound(const StepLimits& s, int bins)
      : s_(s), bins_(bins), side_(static_cast<std::size_t>(bins) + 1),
        rank_(s.positives, s.negatives) {}

  Candidate run(std::uint64_t& nodes) {
    const std::size_t f = s_.grids.size();
    order_ = feature_order();
    coords_.assign(2 * f, 0);
    std::vector<std::uint32_t> all(s_.labels.size());
    std::iota(all.begin(), all.end(), 0u);
    best_ = climb(all);
    descend(0, all, 0, nodes);
    return best_;
  }

 private:
  struct Child {
    int a, b;
    Counts kept;
  };

  // Per (a, b) counts of surviving rows that pass feature f.
  void tabulate(std::size_t f, const std::vector<std::uint32_t>& rows, std::vector<Counts>& t) const {
    t.assign(side_ * side_, {});
    for (std::uint32_t r : rows) {
      const int lo = s_.lim_lo[f][r], hi = s_.lim_hi[f][r];
      if (lo < 0) continue;
      Counts& c = t[static_cast<std::size_t>(lo) * side_ + static_cast<std::size_t>(hi)];
      s_.labels[r] ? ++c.tp : ++c.fp;
    }
    // Suffix sums: t[a][b] = rows with lim_lo >= a and lim_hi >= b.
    for (std::size_t a = side_; a-- > 0;) {
      for (std::size_t b = side_; b-- > 0;) {
        Counts& c = t[a * side_ + b];
        if (b + 1 < side_) {
          c.tp += t[a * side_ + b + 1].tp;
          c.fp += t[a * side_ + b + 1].fp;
        }
        if (a + 1 < side_) {
          const Counts& d = t[(a + 1) * side_ + b];
          const Counts e = b + 1 < side_ ? t[(a + 1) * side_ + b + 1] : Counts{};
          c.tp += d.tp - e.tp;
          c.fp += d.fp - e.fp;
        }
      }
    }
  }

  std::vector<Child> children(std::size_t f, const std::vector<std::uint32_t>& rows) const {
    std::vector<Counts> t;
    tabulate(f, rows, t);
    std::vector<Child> out;
    for (int a = 0; a <= bins_; ++a)
      for (int b = 0; a + b <= bins_; ++b)
        out.push_back({a, b, t[static_cast<std::size_t>(a) * side_ + static_cast<std::size_t>(b)]});
    return out;
  }

  Candidate make(const Counts& k, int steps) const {
    Candidate c;
    c.valid = true;
    c.tp = k.tp;
    c.fp = k.fp;
    c.steps = steps;
    c.coords = coords_;
    return c;
  }

  void descend(std::size_t depth, const std::vector<std::uint32_t>& rows, int steps,
               std::uint64_t& nodes) {
    const std::size_t f = order_[depth];
    auto kids = children(f, rows);
    const bool leaf = depth + 1 == order_.size();
    if (leaf) {
      for (const Child& k : kids) {
        coords_[2 * f] = k.a;
        coords_[2 * f + 1] = k.b;
        ++nodes;
        Candidate c = make(k.kept, steps + k.a + k.b);
        if (rank_.better(c, best_)) best_ = std::move(c);
      }
      coords_[2 * f] = coords_[2 * f + 1] = 0;
      return;
    }
    // Most promising first so the incumbent improves early.
    std::stable_sort(kids.begin(), kids.end(), [&](const Child& x, const Child& y) {
      const auto cx = x.kept.tp + s_.negatives - x.kept.fp;
      const auto cy = y.kept.tp + s_.negatives - y.kept.fp;
      return cx > cy;
    });
    std::vector<std::uint32_t> next;
    for (const Child& k : kids) {
      if (!rank_.may_beat(k.kept.tp, steps + k.a + k.b, best_)) continue;
      coords_[2 * f] = k.a;
      coords_[2 * f + 1] = k.b;
      ++nodes;
      next.clear();
      for (std::uint32_t r : rows)
        if (k.a <= s_.lim_lo[f][r] && k.b <= s_.lim_hi[f][r]) next.push_back(r);
      descend(depth + 1, next, steps + k.a + k.b, nodes);
    }
    coords_[2 * f] = coords_[2 * f + 1] = 0;
  }

  // Coordinate ascent from the full-range node; only seeds the incumbent.
  Candidate climb(const std::vector<std::uint32_t>& all) {
    const std::size_t nf = s_.grids.size();
    std::vector<std::uint32_t> rows = all;
    Counts start;
    for (std::uint32_t r : rows) {
      bool pass = true;
      for (std::size_t f = 0; f < nf && pass; ++f) pass = s_.lim_lo[f][r] >= 0;
      if (pass) s_.labels[r] ? ++start.tp : ++start.fp;
    }
    Candidate best = make(start, 0);
    for (int round = 0; round < 4 * static_cast<int>(nf); ++round) {
      bool improved = false;
      for (std::size_t f = 0; f < nf; ++f) {
        // Rows passing every other feature at the current coordinates.
        std::vector<std::uint32_t> others;
        for (std::uint32_t r : all) {
          bool pass = true;
          for (std::size_t g = 0; g < nf && pass; ++g) {
            if (g == f) continue;
            pass = coords_[2 * g] <= s_.lim_lo[g][r] && coords_[2 * g + 1] <= s_.lim_hi[g][r];
          }
          if (pass) others.push_back(r);
        }
        const int base_steps = best.steps - coords_[2 * f] - coords_[2 * f + 1];
        const int keep_a = coords_[2 * f], keep_b = coords_[2 * f + 1];
        int pick_a = keep_a, pick_b = keep_b;
        for (const Child& k : children(f, others)) {
          coords_[2 * f] = k.a;
          coords_[2 * f + 1] = k.b;
          Candidate c = make(k.kept, base_steps + k.a + k.b);
          if (rank_.better(c, best)) {
            best = std::move(c);
            pick_a = k.a;
            pick_b = k.b;
            improved = true;
          }
        }
        coords_[2 * f] = pick_a;
        coords_[2 * f + 1] = pick_b;
      }
      if (!improved) break;
    }
    std::fill(coords_.begin(), coords_.end(), 0);
    return best;
  }

  // Features whose best single-feature cut removes the most negatives for
  // the fewest positives go first; this only affects speed.
  std::vector<std::size_t> feature_order() const {
    const std::size_t nf = s_.grids.size();
    std::vector<std::uint32_t> all(s_.labels.size());
    std::iota(all.begin(), all.end(), 0u);
    std::vector<std::uint64_t> score(nf, 0);
    for (std::size_t f = 0; f < nf; ++f)
      for (const Child& k : children(f, all))
        score[f] = std::max(score[f], k.kept.tp + s_.negatives - k.kept.fp);
    std::vector<std::size_t> order(nf);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return score[x] > score[y]; });
    return order;
  }

  const StepLimits& s_;
  int bins_;
  std::size_t side_;
  Ranker rank_;
  std::vector<std::size_t> order_;
  std::vector<int> coords_;
  Candidate best_;
};

}  // namespace

std::uint64_t grid_size(std::size_t features, int bins) {
  const auto per = static_cast<std::uint64_t>(bins + 1) * static_cast<std::uint64_t>(bins + 2) / 2;
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < features; ++i) {
    if (total > UINT64_MAX / per) return UINT64_MAX;
    total *= per;
  }
  return total;
}

IndividualResult individual_search(const FeatureTable& table, std::string_view feature, int bins) {
  if (bins < 1) fail(ErrorKind::InvalidArgument, "bin count must be positive");
  if (table.rows() == 0) fail(ErrorKind::InvalidInput, "feature table is empty");
  const std::size_t col = table.require(feature);
  const std::size_t cols[] = {col};
  const StepLimits s = step_limits(table, cols, bins);
  const auto& lo = s.lim_lo[0];
  const auto& hi = s.lim_hi[0];

  const auto report_at = [&](int a, int b) {
    std::uint64_t tp = 0, fp = 0;
    for (std::size_t r = 0; r < lo.size(); ++r) {
      if (a > lo[r] || b > hi[r]) continue;
      s.labels[r] ? ++tp : ++fp;
    }
    return EvalReport::from_counts(tp, fp, s.negatives - fp, s.positives - tp);
  };

  IndividualResult out;
  out.feature = std::string(feature);
  const BoundGrid& g = s.grids[0];
  int best_a = 0, best_b = 0;
  EvalReport best = report_at(0, 0);
  if (g.delta > 0.0) {
    for (int a = 1; a <= bins; ++a) {
      const EvalReport r = report_at(a, 0);
      if (r.tp + r.tn > best.tp + best.tn) {
        best = r;
        best_a = a;
      }
    }
    for (int b = 1; b <= bins - best_a; ++b) {
      const EvalReport r = report_at(best_a, b);
      if (r.tp + r.tn > best.tp + best.tn) {
        best = r;
        best_b = b;
      }
    }
  }
  out.lower_steps = best_a;
  out.upper_steps = best_b;
  out.lower = g.lower(best_a);
  out.upper = g.upper(best_b);
  out.report = best;
  return out;
}

BfsResult bfs_search(const FeatureTable& table, std::span<const std::string> features,
                     const BfsOptions& options) {
  if (options.bins < 2) fail(ErrorKind::InvalidArgument, "BFS needs at least 2 bins");
  if (features.empty()) fail(ErrorKind::InvalidArgument, "BFS needs at least one feature");
  if (table.rows() == 0) fail(ErrorKind::InvalidInput, "feature table is empty");
  std::vector<std::size_t> cols;
  for (const auto& name : features) {
    const std::size_t c = table.require(name);
    if (std::find(cols.begin(), cols.end(), c) != cols.end())
      fail(ErrorKind::InvalidArgument, "feature '" + name + "' listed twice");
    cols.push_back(c);
  }
  const StepLimits s = step_limits(table, cols, options.bins);

  BfsStrategy strategy = options.strategy;
  if (strategy == BfsStrategy::Auto)
    strategy = grid_size(cols.size(), options.bins) <= options.queue_limit
                   ? BfsStrategy::Queue
                   : BfsStrategy::BranchAndBound;

  BfsResult out;
  out.strategy_used = strategy;
  Candidate best;
  if (strategy == BfsStrategy::Queue) {
    best = QueueSearch(s, options.bins).run(out.nodes_evaluated);
  } else {
    best = BranchAndBound(s, options.bins).run(out.nodes_evaluated);
  }

  for (std::size_t f = 0; f < cols.size(); ++f) {
    const int a = best.coords[2 * f], b = best.coords[2 * f + 1];
    out.lower_steps.push_back(a);
    out.upper_steps.push_back(b);
    out.config.set(features[f], s.grids[f].lower(a), s.grids[f].upper(b));
  }
  out.report = EvalReport::from_counts(best.tp, best.fp, s.negatives - best.fp,
                                       s.positives - best.tp);
  return out;
}

std::vector<SweepEntry> combination_sweep(const FeatureTable& table, std::size_t k,
                                          std::span<const std::string> candidates,
                                          const BfsOptions& options, std::size_t threads) {
  if (k == 0) fail(ErrorKind::InvalidArgument, "subset size must be positive");
  if (candidates.size() < k)
    fail(ErrorKind::InvalidArgument, "fewer candidates than the subset size");

  std::vector<std::vector<std::string>> subsets;
  std::vector<std::size_t> pick(k);
  std::iota(pick.begin(), pick.end(), 0);
  for (;;) {
    std::vector<std::string> s;
    for (std::size_t i : pick) s.push_back(candidates[i]);
    subsets.push_back(std::move(s));
    std::size_t i = k;
    while (i > 0 && pick[i - 1] == candidates.size() - k + (i - 1)) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < k; ++j) pick[j] = pick[j - 1] + 1;
  }

  std::vector<SweepEntry> out(subsets.size());
  parallel_for(subsets.size(), threads, [&](std::size_t i) {
    out[i].features = subsets[i];
    out[i].result = bfs_search(table, subsets[i], options);
  });

  std::stable_sort(out.begin(), out.end(), [](const SweepEntry& x, const SweepEntry& y) {
    const auto& a = x.result.report;
    const auto& b = y.result.report;
    if (a.tp + a.tn != b.tp + b.tn) return a.tp + a.tn > b.tp + b.tn;
    return Ranker::compare_f1(a.tp, 2 * a.tp + a.fp + a.fn, b.tp, 2 * b.tp + b.fp + b.fn) > 0;
  });
  return out;
}

}  // namespace blinkforge
