#include "blinkforge/shapley.hpp"

#include "blinkforge/detail/linalg.hpp"
#include "blinkforge/error.hpp"

#include <cmath>
#include <cstdint>

namespace blinkforge {

double LinearModel::predict(std::span<const double> x) const {
  if (x.size() != weights.size())
    fail(ErrorKind::InvalidInput, "feature vector length does not match the model");
  double acc = intercept;
  for (std::size_t i = 0; i < x.size(); ++i) acc += weights[i] * x[i];
  return acc;
}

LinearModel fit_ridge(std::span<const double> x, std::size_t features,
                      std::span<const double> y, double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    fail(ErrorKind::InvalidArgument, "ridge lambda must be a non-negative number");
  const std::size_t rows = y.size();
  if (rows < 2) fail(ErrorKind::InvalidInput, "ridge regression needs at least 2 rows");
  if (x.size() != rows * features)
    fail(ErrorKind::InvalidInput, "design matrix size does not match rows x features");

  std::vector<double> mx(features, 0.0);
  double my = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t f = 0; f < features; ++f) mx[f] += x[r * features + f];
    my += y[r];
  }
  for (double& m : mx) m /= static_cast<double>(rows);
  my /= static_cast<double>(rows);

  LinearModel model;
  model.lambda = lambda;
  model.weights.assign(features, 0.0);
  if (features > 0) {
    std::vector<double> a(features * features, 0.0), b(features, 0.0);
    std::vector<double> xc(features);
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t f = 0; f < features; ++f) xc[f] = x[r * features + f] - mx[f];
      const double yc = y[r] - my;
      for (std::size_t i = 0; i < features; ++i) {
        b[i] += xc[i] * yc;
        for (std::size_t j = 0; j < features; ++j) a[i * features + j] += xc[i] * xc[j];
      }
    }
    for (std::size_t i = 0; i < features; ++i) a[i * features + i] += lambda;
    auto w = detail::solve_dense(std::move(a), std::move(b), features);
    if (!w)
      fail(ErrorKind::SingularDesign,
           "normal equations are singular; use a positive ridge lambda");
    model.weights = std::move(*w);
  }
  model.intercept = my;
  for (std::size_t f = 0; f < features; ++f) model.intercept -= model.weights[f] * mx[f];
  return model;
}

namespace {

ShapleyReport from_values(const std::vector<double>& v, std::size_t n,
                          std::span<const std::string> features) {
  // weight[s] = s! (n-s-1)! / n! = 1 / (n * C(n-1, s))
  std::vector<double> weight(n, 0.0);
  double binom = 1.0;
  for (std::size_t s = 0; s < n; ++s) {
    weight[s] = 1.0 / (static_cast<double>(n) * binom);
    binom = binom * static_cast<double>(n - 1 - s) / static_cast<double>(s + 1);
  }
  ShapleyReport out;
  out.features.assign(features.begin(), features.end());
  out.phi.assign(n, 0.0);
  const std::uint64_t full = (std::uint64_t{1} << n) - 1;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t bit = std::uint64_t{1} << i;
    double acc = 0.0;
    for (std::uint64_t s = 0; s <= full; ++s) {
      if (s & bit) continue;
      acc += weight[static_cast<std::size_t>(__builtin_popcountll(s))] * (v[s | bit] - v[s]);
    }
    out.phi[i] = acc;
  }
  out.base_value = v[0];
  out.prediction = v[full];
  return out;
}

void check_shapes(std::span<const double> instance, std::size_t background_size,
                  std::span<const std::string> features) {
  if (features.size() > kMaxShapleyFeatures)
    fail(ErrorKind::TooManyFeatures,
         "exact Shapley enumeration supports at most 20 features, got " +
             std::to_string(features.size()));
  if (instance.size() != features.size() || background_size != features.size())
    fail(ErrorKind::InvalidInput, "instance/background length does not match feature list");
}

}  // namespace

ShapleyReport shapley_exact(const Predictor& predict, std::span<const double> instance,
                            std::span<const double> background,
                            std::span<const std::string> features) {
  check_shapes(instance, background.size(), features);
  const std::size_t n = features.size();
  std::vector<double> v(std::size_t{1} << n);
  std::vector<double> hybrid(n);
  for (std::uint64_t s = 0; s < v.size(); ++s) {
    for (std::size_t i = 0; i < n; ++i) hybrid[i] = (s >> i) & 1 ? instance[i] : background[i];
    v[s] = predict(hybrid);
  }
  return from_values(v, n, features);
}

ShapleyReport shapley_exact(const Predictor& predict, std::span<const double> instance,
                            const std::vector<std::vector<double>>& backgrounds,
                            std::span<const std::string> features) {
  if (backgrounds.empty()) fail(ErrorKind::InvalidInput, "background set is empty");
  for (const auto& b : backgrounds) check_shapes(instance, b.size(), features);
  const std::size_t n = features.size();
  std::vector<double> v(std::size_t{1} << n, 0.0);
  std::vector<double> hybrid(n);
  for (std::uint64_t s = 0; s < v.size(); ++s) {
    double acc = 0.0;
    for (const auto& b : backgrounds) {
      for (std::size_t i = 0; i < n; ++i) hybrid[i] = (s >> i) & 1 ? instance[i] : b[i];
      acc += predict(hybrid);
    }
    v[s] = acc / static_cast<double>(backgrounds.size());
  }
  return from_values(v, n, features);
}

std::vector<double> mean_abs_shap(std::span<const ShapleyReport> reports) {
  if (reports.empty()) fail(ErrorKind::InvalidInput, "no Shapley reports to aggregate");
  const auto& names = reports.front().features;
  std::vector<double> out(names.size(), 0.0);
  for (const auto& r : reports) {
    if (r.features != names || r.phi.size() != names.size())
      fail(ErrorKind::InvalidInput, "Shapley reports use different feature sets");
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += std::fabs(r.phi[i]);
  }
  for (double& m : out) m /= static_cast<double>(reports.size());
  return out;
}

}  // namespace blinkforge
