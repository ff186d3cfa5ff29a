#pragma once

// Brute-force reference computations for tests. Nothing here shares code
// with the production numerical path: fits go through explicit normal
// equations, covariances through dense matrix products, distribution
// functions through adaptive quadrature of the densities.

#include <cstdint>
#include <string>
#include <vector>

namespace citepred::oracle {

using Matrix = std::vector<std::vector<double>>;  // row-major rows

Matrix transpose(const Matrix& a);
Matrix multiply(const Matrix& a, const Matrix& b);
/// Inverse of a p x p matrix (p <= 3) via the adjugate. Throws
/// std::domain_error when the determinant vanishes.
Matrix invert_small(const Matrix& a);

/// (X'X)^-1 X'y.
std::vector<double> oracle_fit(const Matrix& design, const std::vector<double>& response);

/// Hat diagonal from X (X'X)^-1 X'.
std::vector<double> hat_diagonal(const Matrix& design);

/// Residuals of the normal-equations fit.
std::vector<double> residuals(const Matrix& design, const std::vector<double>& response);

/// Sandwich with weights e_i^2 / (1 - h_ii)^2.
Matrix hc3_sandwich(const Matrix& design, const std::vector<double>& response);

/// n R^2 of the auxiliary regression of squared residuals on the design.
double breusch_pagan_lm(const Matrix& design, const std::vector<double>& response);

double r_squared(const Matrix& design, const std::vector<double>& response);

/// CDFs by Gauss-Kronrod integration of the unnormalized densities; the
/// normalizing constant is itself integrated, not taken from Gamma functions.
double t_cdf(double t, double df);
double chi_square_cdf(double x, double df);

/// Bin 1..q of each cited item (value >= 1) by brute-force rank counting
/// under the order (value, id, tag); 0 for uncited items.
std::vector<int> quantile_bins(const std::vector<std::int64_t>& values,
                               const std::vector<std::string>& ids,
                               const std::vector<std::string>& tags, int q);

/// Spearman rank correlation with average ranks for ties.
double spearman(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace citepred::oracle
