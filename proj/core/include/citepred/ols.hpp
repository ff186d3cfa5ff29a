#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "citepred/transforms.hpp"

namespace citepred {

/// Regressor set of a fit: the full early-citation model or the IF-only model
/// used for publications without citations at the window.
enum class Model { full, if_only };

/// Dense n x p design (column-major) with its response vector. Column 0 is the
/// intercept.
class DesignMatrix {
 public:
  DesignMatrix(std::size_t rows, std::vector<std::string> column_names);

  static DesignMatrix from_samples(std::span<const RegressionSample> samples, Model model);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return names_.size(); }

  double& operator()(std::size_t i, std::size_t j) { return data_[j * rows_ + i]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[j * rows_ + i]; }

  std::span<const double> column(std::size_t j) const {
    return {data_.data() + j * rows_, rows_};
  }
  std::span<double> response() { return response_; }
  std::span<const double> response() const { return response_; }
  const std::vector<std::string>& column_names() const { return names_; }

 private:
  std::size_t rows_;
  std::vector<std::string> names_;
  std::vector<double> data_;
  std::vector<double> response_;
};

/// Least-squares solution of one design, with the thin QR factors kept for
/// the robust covariance and the auxiliary Breusch-Pagan regression.
struct OlsFit {
  std::vector<double> coefficients;
  std::vector<double> residuals;
  std::vector<double> leverage;  // diagonal of the hat matrix
  double r2 = 0.0;
  double rss = 0.0;
  double tss = 0.0;
  std::size_t n = 0;
  std::size_t p = 0;
  bool degenerate_response = false;  // constant response fitted exactly; r2 reported as 1
  double rcond = 0.0;

  // Factorization of the column-equilibrated design X * diag(1 / scale).
  std::vector<double> q;      // n x p, column-major
  std::vector<double> r_inv;  // p x p, row-major, upper triangular
  std::vector<double> scale;  // Euclidean norm of each original column
};

/// Designs whose reciprocal condition estimate falls below this are rejected.
inline constexpr double kRcondThreshold = 1e-12;

/// Householder QR least squares. Throws InsufficientDataError (n < p),
/// RankDeficientError naming the dependent column, DegenerateResponseError,
/// or ValidationError on non-finite input.
OlsFit fit_ols(const DesignMatrix& design);

/// b0 + b1 * regressors[0] + b2 * regressors[1] + ...
double predict(const OlsFit& fit, std::span<const double> regressors);
double predict(const OlsFit& fit, double x, double y_t);

}  // namespace citepred
