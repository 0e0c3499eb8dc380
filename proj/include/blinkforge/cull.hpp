#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace blinkforge {

// Column-major table of per-peak (or per-window) features. A label of true
// means blink (positive class), false means artifact.
class FeatureTable {
 public:
  FeatureTable() = default;
  explicit FeatureTable(std::vector<std::string> feature_names);

  void add_row(std::string id, std::span<const double> values,
               std::optional<bool> label = std::nullopt);

  const std::vector<std::string>& feature_names() const noexcept { return names_; }
  std::size_t rows() const noexcept { return ids_.size(); }
  std::size_t features() const noexcept { return names_.size(); }
  const std::vector<std::string>& ids() const noexcept { return ids_; }
  const std::vector<std::optional<bool>>& labels() const noexcept { return labels_; }

  std::optional<std::size_t> index_of(std::string_view name) const;
  // Throws ConfigError for unknown names.
  std::size_t require(std::string_view name) const;
  std::span<const double> column(std::size_t f) const { return columns_[f]; }
  std::span<const double> column(std::string_view name) const { return columns_[require(name)]; }
  double value(std::size_t row, std::size_t f) const { return columns_[f][row]; }
  std::vector<double> row_values(std::size_t row) const;

  bool fully_labeled() const noexcept;
  // Throws InvalidInput when any row is unlabeled.
  std::vector<bool> label_vector() const;

  // Rows selected by `keep` (same length as rows()).
  FeatureTable filter_rows(const std::vector<bool>& keep) const;
  // Only the named columns, in the given order.
  FeatureTable select(std::span<const std::string> names) const;

 private:
  std::vector<std::string> names_;
  std::vector<std::string> ids_;
  std::vector<std::vector<double>> columns_;
  std::vector<std::optional<bool>> labels_;
};

struct FeatureBounds {
  std::string feature;
  double lower = 0.0;
  double upper = 0.0;
};

// Pass/cull classifier: a row is predicted positive iff every configured
// feature lies in [lower, upper]. Entries keep insertion order.
struct CullConfig {
  std::vector<FeatureBounds> bounds;

  void set(std::string feature, double lower, double upper);
  const FeatureBounds* find(std::string_view feature) const;
  // lower <= upper and finite for every entry, no duplicate names.
  void validate() const;
};

struct EvalReport {
  std::uint64_t tp = 0, fp = 0, tn = 0, fn = 0;
  double accuracy = 0.0;
  double f1 = 0.0;

  std::uint64_t total() const noexcept { return tp + fp + tn + fn; }
  static EvalReport from_counts(std::uint64_t tp, std::uint64_t fp, std::uint64_t tn,
                                std::uint64_t fn);
};

// Inclusive bounds; NaN values never pass. Unknown feature -> ConfigError.
std::vector<bool> apply_bounds(const FeatureTable& table, const CullConfig& cfg);

// Blink is the positive class. F1 is 0 when 2tp + fp + fn = 0.
EvalReport evaluate(const std::vector<bool>& predictions, const std::vector<bool>& labels);
EvalReport evaluate(const FeatureTable& table, const CullConfig& cfg);

// Per-feature grid: delta = (max - min) / bins over the observed finite
// range. Step a on the lower bound gives min + a*delta; step b on the upper
// bound gives the same grid point counted from the top (min + (bins-b)*delta,
// with both ends pinned exactly to min and max).
struct BoundGrid {
  double min = 0.0;
  double max = 0.0;
  double delta = 0.0;
  int bins = 0;

  static BoundGrid over(std::span<const double> values, int bins);
  double lower(int steps) const;
  double upper(int steps) const;
  // Largest lower/upper step count that still keeps `x`; -1 if none.
  int max_lower_steps(double x) const;
  int max_upper_steps(double x) const;
};

struct IndividualResult {
  std::string feature;
  double lower = 0.0;
  double upper = 0.0;
  int lower_steps = 0;
  int upper_steps = 0;
  EvalReport report;
};

// Two-phase greedy: lower bound first (accuracy only, earliest step wins
// ties), then upper bound with the lower bound fixed.
IndividualResult individual_search(const FeatureTable& table, std::string_view feature,
                                   int bins = 50);

enum class BfsStrategy {
  Auto,            // Queue for small grids, BranchAndBound otherwise
  Queue,           // literal breadth-first traversal with a visited set
  BranchAndBound,  // exact depth-first search with accuracy bounds
};

struct BfsOptions {
  int bins = 15;
  BfsStrategy strategy = BfsStrategy::Auto;
  // Grids with at most this many configurations use the queue under Auto.
  std::uint64_t queue_limit = 2'000'000;
};

struct BfsResult {
  CullConfig config;
  EvalReport report;
  std::vector<int> lower_steps;
  std::vector<int> upper_steps;
  std::uint64_t nodes_evaluated = 0;
  BfsStrategy strategy_used = BfsStrategy::Queue;
};

// Best configuration on the tightening grid, ranked by accuracy, then F1,
// then fewer total steps, then lexicographically smaller step vector
// (lower_0, upper_0, lower_1, ...). Every strategy returns the same optimum.
BfsResult bfs_search(const FeatureTable& table, std::span<const std::string> features,
                     const BfsOptions& options = {});

// Number of valid configurations on the grid: (bins+1)(bins+2)/2 per feature.
std::uint64_t grid_size(std::size_t features, int bins);

struct SweepEntry {
  std::vector<std::string> features;
  BfsResult result;
};

// bfs_search over every k-subset of `candidates`, ranked by accuracy then F1
// (descending); ties keep subset enumeration order. `threads` = 0 means
// default parallelism.
std::vector<SweepEntry> combination_sweep(const FeatureTable& table, std::size_t k,
                                          std::span<const std::string> candidates,
                                          const BfsOptions& options = {},
                                          std::size_t threads = 0);

}  // namespace blinkforge
