#include "citepred/ols.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "citepred/csv.hpp"
#include "citepred/error.hpp"

namespace citepred {

DesignMatrix::DesignMatrix(std::size_t rows, std::vector<std::string> column_names)
    : rows_(rows),
      names_(std::move(column_names)),
      data_(rows * names_.size(), 0.0),
      response_(rows, 0.0) {}

DesignMatrix DesignMatrix::from_samples(std::span<const RegressionSample> samples, Model model) {
  std::vector<std::string> names = {"intercept", "x"};
  if (model == Model::full) names.emplace_back("y_t");
  DesignMatrix d(samples.size(), std::move(names));
  for (std::size_t i = 0; i < samples.size(); ++i) {
    d(i, 0) = 1.0;
    d(i, 1) = samples[i].x;
    if (model == Model::full) d(i, 2) = samples[i].y_t;
    d.response_[i] = samples[i].y_long;
  }
  return d;
}

namespace {

// Upper-triangular inverse, row-major p x p.
std::vector<double> invert_upper(const std::vector<double>& r, std::size_t p) {
  std::vector<double> inv(p * p, 0.0);
  for (std::size_t j = 0; j < p; ++j) {
    inv[j * p + j] = 1.0 / r[j * p + j];
    for (std::size_t i = j; i-- > 0;) {
      double s = 0.0;
      for (std::size_t k = i + 1; k <= j; ++k) s += r[i * p + k] * inv[k * p + j];
      inv[i * p + j] = -s / r[i * p + i];
    }
  }
  return inv;
}

double norm1_upper(const std::vector<double>& m, std::size_t p) {
  double best = 0.0;
  for (std::size_t j = 0; j < p; ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i <= j; ++i) s += std::abs(m[i * p + j]);
    best = std::max(best, s);
  }
  return best;
}

[[noreturn]] void rank_deficient(const DesignMatrix& d, std::size_t column, double rcond) {
  const auto& name = d.column_names()[column];
  throw RankDeficientError(name, "rank-deficient design: column '" + name +
                                     "' is (nearly) collinear with the preceding columns "
                                     "(rcond=" + csv::format_double(rcond) + ")");
}

}  // namespace

OlsFit fit_ols(const DesignMatrix& design) {
  const std::size_t n = design.rows();
  const std::size_t p = design.cols();
  if (p == 0) throw ValidationError("design has no columns");
  if (n < p) {
    throw InsufficientDataError("insufficient data: " + std::to_string(n) +
                                " observations for " + std::to_string(p) + " parameters");
  }
  const auto y = design.response();
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(y[i])) throw ValidationError("non-finite response value");
    for (std::size_t j = 0; j < p; ++j) {
      if (!std::isfinite(design(i, j))) throw ValidationError("non-finite design entry");
    }
  }

  OlsFit fit;
  fit.n = n;
  fit.p = p;
  fit.scale.assign(p, 0.0);

  // Column-equilibrated working copy; reflector k overwrites rows k.. of column k.
  std::vector<double> a(n * p);
  for (std::size_t j = 0; j < p; ++j) {
    double ss = 0.0;
    for (double v : design.column(j)) ss += v * v;
    const double norm = std::sqrt(ss);
    if (norm == 0.0) rank_deficient(design, j, 0.0);
    fit.scale[j] = norm;
    for (std::size_t i = 0; i < n; ++i) a[j * n + i] = design(i, j) / norm;
  }

  std::vector<double> r(p * p, 0.0);
  std::vector<double> tau(p, 0.0);
  for (std::size_t k = 0; k < p; ++k) {
    double* col = a.data() + k * n;
    double ss = 0.0;
    for (std::size_t i = k; i < n; ++i) ss += col[i] * col[i];
    const double alpha = std::sqrt(ss);
    if (alpha == 0.0) {
      r[k * p + k] = 0.0;
      continue;
    }
    const double x0 = col[k];
    const double diag = x0 >= 0 ? -alpha : alpha;
    col[k] = x0 - diag;
    double vnorm2 = 0.0;
    for (std::size_t i = k; i < n; ++i) vnorm2 += col[i] * col[i];
    tau[k] = 2.0 / vnorm2;
    for (std::size_t j = k + 1; j < p; ++j) {
      double* cj = a.data() + j * n;
      double s = 0.0;
      for (std::size_t i = k; i < n; ++i) s += col[i] * cj[i];
      s *= tau[k];
      for (std::size_t i = k; i < n; ++i) cj[i] -= s * col[i];
    }
    r[k * p + k] = diag;
    for (std::size_t j = k + 1; j < p; ++j) r[k * p + j] = a[j * n + k];
  }

  // Reflector k acts on rows k..n-1 of a vector.
  auto apply_reflector = [&](std::size_t k, std::vector<double>& v) {
    if (tau[k] == 0.0) return;
    const double* col = a.data() + k * n;
    double s = 0.0;
    for (std::size_t i = k; i < n; ++i) s += col[i] * v[i];
    s *= tau[k];
    for (std::size_t i = k; i < n; ++i) v[i] -= s * col[i];
  };

  std::size_t weakest = 0;
  double weakest_abs = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < p; ++k) {
    if (std::abs(r[k * p + k]) < weakest_abs) {
      weakest_abs = std::abs(r[k * p + k]);
      weakest = k;
    }
  }
  if (weakest_abs == 0.0) rank_deficient(design, weakest, 0.0);
  fit.r_inv = invert_upper(r, p);
  fit.rcond = 1.0 / (norm1_upper(r, p) * norm1_upper(fit.r_inv, p));
  if (!(fit.rcond >= kRcondThreshold)) rank_deficient(design, weakest, fit.rcond);

  std::vector<double> qty(y.begin(), y.end());
  for (std::size_t k = 0; k < p; ++k) apply_reflector(k, qty);
  std::vector<double> scaled(p, 0.0);
  for (std::size_t i = 0; i < p; ++i) {
    double s = 0.0;
    for (std::size_t k = i; k < p; ++k) s += fit.r_inv[i * p + k] * qty[k];
    scaled[i] = s;
  }
  fit.coefficients.resize(p);
  for (std::size_t j = 0; j < p; ++j) fit.coefficients[j] = scaled[j] / fit.scale[j];

  fit.q.assign(n * p, 0.0);
  std::vector<double> e(n);
  for (std::size_t j = 0; j < p; ++j) {
    std::fill(e.begin(), e.end(), 0.0);
    e[j] = 1.0;
    for (std::size_t k = p; k-- > 0;) apply_reflector(k, e);
    std::copy(e.begin(), e.end(), fit.q.begin() + static_cast<std::ptrdiff_t>(j * n));
  }
  fit.leverage.assign(n, 0.0);
  for (std::size_t j = 0; j < p; ++j) {
    const double* qj = fit.q.data() + j * n;
    for (std::size_t i = 0; i < n; ++i) fit.leverage[i] += qj[i] * qj[i];
  }

  fit.residuals.resize(n);
  double ymax = 0.0;
  double ysum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double pred = 0.0;
    for (std::size_t j = 0; j < p; ++j) pred += design(i, j) * fit.coefficients[j];
    fit.residuals[i] = y[i] - pred;
    fit.rss += fit.residuals[i] * fit.residuals[i];
    ymax = std::max(ymax, std::abs(y[i]));
    ysum += y[i];
  }
  const double ymean = ysum / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) fit.tss += (y[i] - ymean) * (y[i] - ymean);

  const double tiny_unit = 64.0 * std::numeric_limits<double>::epsilon() * ymax;
  const double tiny = static_cast<double>(n) * tiny_unit * tiny_unit;
  if (fit.tss <= tiny) {
    if (fit.rss > tiny) {
      throw DegenerateResponseError("degenerate response: constant y with nonzero residuals");
    }
    fit.degenerate_response = true;
    fit.r2 = 1.0;
  } else {
    fit.r2 = std::clamp(1.0 - fit.rss / fit.tss, 0.0, 1.0);
  }
  return fit;
}

double predict(const OlsFit& fit, std::span<const double> regressors) {
  double pred = 1.0 * fit.coefficients.at(0);
  for (std::size_t j = 1; j < fit.coefficients.size(); ++j) {
    pred += regressors[j - 1] * fit.coefficients[j];
  }
  return pred;
}

double predict(const OlsFit& fit, double x, double y_t) {
  const double regressors[] = {x, y_t};
  return predict(fit, std::span<const double>(regressors, fit.coefficients.size() - 1));
}

}  // namespace citepred
