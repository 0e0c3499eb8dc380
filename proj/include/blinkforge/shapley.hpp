#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace blinkforge {

struct LinearModel {
  std::vector<double> weights;
  double intercept = 0.0;
  double lambda = 0.0;

  double predict(std::span<const double> x) const;
};

// Ridge regression with an unpenalized intercept. `x` is row-major with
// `features` columns. Throws SingularDesign at lambda = 0 when the centered
// normal equations are singular.
LinearModel fit_ridge(std::span<const double> x, std::size_t features,
                      std::span<const double> y, double lambda);

using Predictor = std::function<double(std::span<const double>)>;

struct ShapleyReport {
  std::vector<std::string> features;
  std::vector<double> phi;
  double base_value = 0.0;  // value of the empty coalition
  double prediction = 0.0;  // value of the full coalition
};

inline constexpr std::size_t kMaxShapleyFeatures = 20;

// Exact Shapley values by enumerating all 2^n coalitions. The value of a
// coalition is the prediction on the hybrid vector taking instance values on
// the coalition and background values elsewhere.
ShapleyReport shapley_exact(const Predictor& predict, std::span<const double> instance,
                            std::span<const double> background,
                            std::span<const std::string> features);

// Same, with the coalition value averaged over every background row.
ShapleyReport shapley_exact(const Predictor& predict, std::span<const double> instance,
                            const std::vector<std::vector<double>>& backgrounds,
                            std::span<const std::string> features);

// Per-feature mean of |phi|. Reports must share one feature list.
std::vector<double> mean_abs_shap(std::span<const ShapleyReport> reports);

}  // namespace blinkforge
