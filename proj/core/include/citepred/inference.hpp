#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "citepred/ols.hpp"

namespace citepred {

/// Small dense symmetric matrix, row-major.
class CovMatrix {
 public:
  explicit CovMatrix(std::size_t dim = 0) : dim_(dim), v_(dim * dim, 0.0) {}

  std::size_t dim() const { return dim_; }
  double& operator()(std::size_t i, std::size_t j) { return v_[i * dim_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return v_[i * dim_ + j]; }
  const std::vector<double>& values() const { return v_; }

 private:
  std::size_t dim_;
  std::vector<double> v_;
};

/// (X'X)^-1 X' diag(e_i^2 / (1 - h_ii)^2) X (X'X)^-1.
/// Throws PerfectLeverageError if some h_ii is numerically 1.
CovMatrix hc3_covariance(const OlsFit& fit, const DesignMatrix& design);

/// White's estimator, diag(e_i^2); kept for comparisons in tests.
CovMatrix hc0_covariance(const OlsFit& fit, const DesignMatrix& design);

struct CoefficientTest {
  double estimate = 0.0;
  double std_error = 0.0;
  double t_stat = 0.0;
  double p_value = 1.0;
  std::string_view stars;
  bool degenerate = false;  // zero standard error with a nonzero estimate
};

/// Two-sided Student-t p-values with df = n - p.
std::vector<CoefficientTest> p_values(const OlsFit& fit, const CovMatrix& cov);

struct BreuschPagan {
  double statistic = 0.0;
  double p_value = 1.0;
  std::size_t df = 0;
};

/// LM form: n * R^2 of e_i^2 regressed on the model's regressors, chi-square
/// with p - 1 degrees of freedom.
BreuschPagan breusch_pagan(const OlsFit& fit, const DesignMatrix& design);

/// "***" for p < 0.01, "**" for p < 0.05, "*" for p < 0.1, "" otherwise.
std::string_view stars(double p);

struct RobustSummary {
  std::vector<CoefficientTest> coefficients;
  CovMatrix covariance;
  BreuschPagan bp;
};

RobustSummary robust_summary(const OlsFit& fit, const DesignMatrix& design);

}  // namespace citepred
