#include "citepred/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "citepred/error.hpp"
#include "citepred/special_functions.hpp"

namespace citepred {
namespace {

constexpr double kLeverageTolerance = 1e-12;

// S^-1 R^-1 M R^-T S^-1 for a p x p "meat" matrix M in the equilibrated basis.
CovMatrix sandwich_from_meat(const OlsFit& fit, const std::vector<double>& meat) {
  const std::size_t p = fit.p;
  std::vector<double> a(p * p, 0.0);  // S^-1 R^-1
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t k = 0; k < p; ++k) a[i * p + k] = fit.r_inv[i * p + k] / fit.scale[i];
  }
  std::vector<double> am(p * p, 0.0);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < p; ++k) s += a[i * p + k] * meat[k * p + j];
      am[i * p + j] = s;
    }
  }
  CovMatrix cov(p);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = i; j < p; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < p; ++k) s += am[i * p + k] * a[j * p + k];
      cov(i, j) = s;
      cov(j, i) = s;
    }
  }
  return cov;
}

template <class Weight>
CovMatrix weighted_sandwich(const OlsFit& fit, const DesignMatrix& design, Weight weight) {
  if (design.rows() != fit.n || design.cols() != fit.p || fit.q.size() != fit.n * fit.p) {
    throw ValidationError("fit does not belong to this design");
  }
  const std::size_t n = fit.n;
  const std::size_t p = fit.p;
  std::vector<double> meat(p * p, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double w = weight(i);
    if (w == 0.0) continue;
    for (std::size_t j = 0; j < p; ++j) {
      const double qj = fit.q[j * n + i];
      for (std::size_t k = j; k < p; ++k) meat[j * p + k] += w * qj * fit.q[k * n + i];
    }
  }
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t k = 0; k < j; ++k) meat[j * p + k] = meat[k * p + j];
  }
  return sandwich_from_meat(fit, meat);
}

}  // namespace

CovMatrix hc3_covariance(const OlsFit& fit, const DesignMatrix& design) {
  for (std::size_t i = 0; i < fit.n; ++i) {
    if (1.0 - fit.leverage[i] < kLeverageTolerance) {
      throw PerfectLeverageError("observation " + std::to_string(i) +
                                 " has leverage 1; HC3 covariance undefined");
    }
  }
  return weighted_sandwich(fit, design, [&](std::size_t i) {
    const double e = fit.residuals[i];
    const double d = 1.0 - fit.leverage[i];
    return (e * e) / (d * d);
  });
}

CovMatrix hc0_covariance(const OlsFit& fit, const DesignMatrix& design) {
  return weighted_sandwich(fit, design, [&](std::size_t i) {
    return fit.residuals[i] * fit.residuals[i];
  });
}

std::string_view stars(double p) {
  if (p < 0.01) return "***";
  if (p < 0.05) return "**";
  if (p < 0.1) return "*";
  return "";
}

std::vector<CoefficientTest> p_values(const OlsFit& fit, const CovMatrix& cov) {
  if (fit.n <= fit.p) {
    throw InsufficientDataError("p-values need n > p (n=" + std::to_string(fit.n) +
                                ", p=" + std::to_string(fit.p) + ")");
  }
  const double df = static_cast<double>(fit.n - fit.p);
  std::vector<CoefficientTest> out(fit.p);
  for (std::size_t j = 0; j < fit.p; ++j) {
    auto& c = out[j];
    c.estimate = fit.coefficients[j];
    const double var = cov(j, j);
    c.std_error = std::sqrt(std::max(var, 0.0));
    if (c.std_error == 0.0) {
      if (c.estimate == 0.0) {
        c.t_stat = 0.0;
        c.p_value = 1.0;
      } else {
        c.t_stat = std::copysign(std::numeric_limits<double>::infinity(), c.estimate);
        c.p_value = 0.0;
        c.degenerate = true;
      }
    } else {
      c.t_stat = c.estimate / c.std_error;
      c.p_value = std::clamp(special::student_t_two_sided(c.t_stat, df), 0.0, 1.0);
    }
    c.stars = stars(c.p_value);
  }
  return out;
}

BreuschPagan breusch_pagan(const OlsFit& fit, const DesignMatrix& design) {
  if (design.rows() != fit.n || design.cols() != fit.p) {
    throw ValidationError("fit does not belong to this design");
  }
  if (fit.n <= fit.p) throw InsufficientDataError("Breusch-Pagan needs n > p");
  BreuschPagan bp;
  bp.df = fit.p - 1;
  const std::size_t n = fit.n;
  std::vector<double> u(n);
  double umax = 0.0;
  double usum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    u[i] = fit.residuals[i] * fit.residuals[i];
    umax = std::max(umax, u[i]);
    usum += u[i];
  }
  const double umean = usum / static_cast<double>(n);
  double tss = 0.0;
  for (double v : u) tss += (v - umean) * (v - umean);
  const double unit = 64.0 * std::numeric_limits<double>::epsilon() * umax;
  if (bp.df == 0 || tss <= static_cast<double>(n) * unit * unit) return bp;

  // The auxiliary regression shares the design, so its fitted values are
  // the projection Q Q' u.
  std::vector<double> fitted(n, 0.0);
  for (std::size_t j = 0; j < fit.p; ++j) {
    const double* qj = fit.q.data() + j * n;
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += qj[i] * u[i];
    for (std::size_t i = 0; i < n; ++i) fitted[i] += s * qj[i];
  }
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) rss += (u[i] - fitted[i]) * (u[i] - fitted[i]);
  const double r2 = std::clamp(1.0 - rss / tss, 0.0, 1.0);
  bp.statistic = static_cast<double>(n) * r2;
  bp.p_value = std::clamp(special::chi_square_sf(bp.statistic, static_cast<double>(bp.df)),
                          0.0, 1.0);
  return bp;
}

RobustSummary robust_summary(const OlsFit& fit, const DesignMatrix& design) {
  RobustSummary s;
  s.covariance = hc3_covariance(fit, design);
  s.coefficients = p_values(fit, s.covariance);
  s.bp = breusch_pagan(fit, design);
  return s;
}

}  // namespace citepred
