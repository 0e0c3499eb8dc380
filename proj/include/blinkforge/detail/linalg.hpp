#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace blinkforge::detail {

// Solves the dense n x n system A x = b (A row-major) by Gaussian elimination
// with partial pivoting. Returns nullopt when a pivot falls below
// `rel_tol` times the largest absolute entry of A.
std::optional<std::vector<double>> solve_dense(std::vector<double> a,
                                               std::vector<double> b,
                                               std::size_t n,
                                               double rel_tol = 1e-13);

// Least-squares slope of y against x.
double ols_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace blinkforge::detail
