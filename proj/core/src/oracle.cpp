#include "citepred/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <tuple>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace citepred::oracle {

Matrix transpose(const Matrix& a) {
  if (a.empty()) return {};
  Matrix t(a[0].size(), std::vector<double>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a[0].size(); ++j) t[j][i] = a[i][j];
  }
  return t;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
  Matrix c(a.size(), std::vector<double>(b[0].size(), 0.0));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t k = 0; k < b.size(); ++k) {
      for (std::size_t j = 0; j < b[0].size(); ++j) c[i][j] += a[i][k] * b[k][j];
    }
  }
  return c;
}

Matrix invert_small(const Matrix& a) {
  const std::size_t p = a.size();
  if (p == 1) {
    if (a[0][0] == 0.0) throw std::domain_error("singular matrix");
    return {{1.0 / a[0][0]}};
  }
  if (p == 2) {
    const double det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    if (det == 0.0) throw std::domain_error("singular matrix");
    return {{a[1][1] / det, -a[0][1] / det}, {-a[1][0] / det, a[0][0] / det}};
  }
  if (p != 3) throw std::domain_error("invert_small supports p <= 3");
  const auto& m = a;
  const double c00 = m[1][1] * m[2][2] - m[1][2] * m[2][1];
  const double c01 = m[1][2] * m[2][0] - m[1][0] * m[2][2];
  const double c02 = m[1][0] * m[2][1] - m[1][1] * m[2][0];
  const double det = m[0][0] * c00 + m[0][1] * c01 + m[0][2] * c02;
  if (det == 0.0) throw std::domain_error("singular matrix");
  Matrix inv(3, std::vector<double>(3));
  inv[0][0] = c00 / det;
  inv[1][0] = c01 / det;
  inv[2][0] = c02 / det;
  inv[0][1] = (m[0][2] * m[2][1] - m[0][1] * m[2][2]) / det;
  inv[1][1] = (m[0][0] * m[2][2] - m[0][2] * m[2][0]) / det;
  inv[2][1] = (m[0][1] * m[2][0] - m[0][0] * m[2][1]) / det;
  inv[0][2] = (m[0][1] * m[1][2] - m[0][2] * m[1][1]) / det;
  inv[1][2] = (m[0][2] * m[1][0] - m[0][0] * m[1][2]) / det;
  inv[2][2] = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) / det;
  return inv;
}

namespace {

Matrix column(const std::vector<double>& v) {
  Matrix m(v.size(), std::vector<double>(1));
  for (std::size_t i = 0; i < v.size(); ++i) m[i][0] = v[i];
  return m;
}

Matrix xtx_inverse(const Matrix& x) { return invert_small(multiply(transpose(x), x)); }

}  // namespace

std::vector<double> oracle_fit(const Matrix& design, const std::vector<double>& response) {
  const Matrix b = multiply(multiply(xtx_inverse(design), transpose(design)), column(response));
  std::vector<double> out(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) out[i] = b[i][0];
  return out;
}

std::vector<double> residuals(const Matrix& design, const std::vector<double>& response) {
  const auto b = oracle_fit(design, response);
  std::vector<double> e(response.size());
  for (std::size_t i = 0; i < response.size(); ++i) {
    double pred = 0.0;
    for (std::size_t j = 0; j < b.size(); ++j) pred += design[i][j] * b[j];
    e[i] = response[i] - pred;
  }
  return e;
}

std::vector<double> hat_diagonal(const Matrix& design) {
  const Matrix h = multiply(multiply(design, xtx_inverse(design)), transpose(design));
  std::vector<double> d(design.size());
  for (std::size_t i = 0; i < design.size(); ++i) d[i] = h[i][i];
  return d;
}

Matrix hc3_sandwich(const Matrix& design, const std::vector<double>& response) {
  const std::size_t n = design.size();
  const auto e = residuals(design, response);
  const auto h = hat_diagonal(design);
  Matrix omega(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) omega[i][i] = e[i] * e[i] / ((1 - h[i]) * (1 - h[i]));
  const Matrix bread = xtx_inverse(design);
  const Matrix meat = multiply(multiply(transpose(design), omega), design);
  return multiply(multiply(bread, meat), bread);
}

double r_squared(const Matrix& design, const std::vector<double>& response) {
  const auto e = residuals(design, response);
  double mean = 0.0;
  for (double y : response) mean += y;
  mean /= static_cast<double>(response.size());
  double rss = 0.0;
  double tss = 0.0;
  for (std::size_t i = 0; i < response.size(); ++i) {
    rss += e[i] * e[i];
    tss += (response[i] - mean) * (response[i] - mean);
  }
  return 1.0 - rss / tss;
}

double breusch_pagan_lm(const Matrix& design, const std::vector<double>& response) {
  const auto e = residuals(design, response);
  std::vector<double> u(e.size());
  for (std::size_t i = 0; i < e.size(); ++i) u[i] = e[i] * e[i];
  return static_cast<double>(e.size()) * r_squared(design, u);
}

namespace {

template <class F>
double integrate(F f, double a, double b) {
  using boost::math::quadrature::gauss_kronrod;
  return gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-12);
}

}  // namespace

double t_cdf(double t, double df) {
  // Unnormalized density, written through log1p to stay finite for huge df.
  auto density = [df](double x) { return std::exp(-0.5 * (df + 1.0) * std::log1p(x * x / df)); };
  const double inf = std::numeric_limits<double>::infinity();
  const double half = integrate(density, 0.0, inf);
  const double at = std::abs(t);
  // Split at the bulk so the adaptive rule sees the peak.
  const double inner = at <= 8.0 ? integrate(density, 0.0, at)
                                 : integrate(density, 0.0, 8.0) + integrate(density, 8.0, at);
  const double upper = half - inner;
  const double tail = 0.5 * upper / half;
  return t >= 0 ? 1.0 - tail : tail;
}

double chi_square_cdf(double x, double df) {
  if (x <= 0) return 0.0;
  // Substituting x = u^2 makes the integrand u^(df-1) exp(-u^2/2), regular
  // at 0 for df >= 1. Scale by the value at the mode to avoid overflow.
  const double mode = std::sqrt(std::max(df - 1.0, 0.0));
  // log f(u) - log f(mode) written in s = u - mode; with r = s / mode it is
  // mode^2 (log1p(r) - r) - s^2 / 2, evaluated by series for small r.
  auto log1p_minus = [](double r) {
    if (std::abs(r) > 0.05) return std::log1p(r) - r;
    double term = -r * r / 2.0;
    double sum = term;
    for (int k = 3; k < 40; ++k) {
      term *= -r * (k - 1) / k;
      sum += term;
    }
    return sum;
  };
  auto f = [&](double u) {
    if (mode == 0.0) return std::exp(-0.5 * u * u);
    if (u <= 0.0) return 0.0;
    const double s = u - mode;
    return std::exp(mode * mode * log1p_minus(s / mode) - 0.5 * s * s);
  };
  // Around the mode log f ~ -(u - mode)^2, so nothing beyond +-40 is
  // representable; the integral is confined to that support.
  const double lo_support = std::max(0.0, mode - 40.0);
  const double hi_support = mode + 40.0;
  std::vector<double> cuts = {lo_support};
  for (double w : {-10.0, -3.0, 0.0, 3.0, 10.0}) {
    const double c = mode + w;
    if (c > cuts.back()) cuts.push_back(c);
  }
  cuts.push_back(hi_support);
  auto integrate_to = [&](double limit) {
    limit = std::min(limit, hi_support);
    double s = 0.0;
    double lo = cuts.front();
    if (limit <= lo) return 0.0;
    for (std::size_t k = 1; k < cuts.size() && cuts[k] < limit; ++k) {
      s += integrate(f, lo, cuts[k]);
      lo = cuts[k];
    }
    return s + integrate(f, lo, limit);
  };
  const double total = integrate_to(hi_support);
  const double part = integrate_to(std::sqrt(x));
  return std::min(1.0, part / total);
}

std::vector<int> quantile_bins(const std::vector<std::int64_t>& values,
                               const std::vector<std::string>& ids,
                               const std::vector<std::string>& tags, int q) {
  const std::size_t n = values.size();
  std::vector<int> bins(n, 0);
  std::size_t cited = 0;
  for (auto v : values) cited += v >= 1 ? 1 : 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (values[i] < 1) continue;
    std::size_t rank = 1;
    for (std::size_t k = 0; k < n; ++k) {
      if (values[k] >= 1 && std::tie(values[k], ids[k], tags[k]) < std::tie(values[i], ids[i], tags[i])) {
        ++rank;
      }
    }
    // Smallest j with rank <= ceil(j * cited / q).
    for (int j = 1; j <= q; ++j) {
      const double bound = std::ceil(static_cast<double>(j) * static_cast<double>(cited) / q);
      if (static_cast<double>(rank) <= bound) {
        bins[i] = j;
        break;
      }
    }
  }
  return bins;
}

namespace {

std::vector<double> average_ranks(const std::vector<double>& v) {
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    double less = 0.0;
    double equal = 0.0;
    for (double w : v) {
      if (w < v[i]) less += 1.0;
      if (w == v[i]) equal += 1.0;
    }
    ranks[i] = less + (equal + 1.0) / 2.0;
  }
  return ranks;
}

}  // namespace

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  const auto ra = average_ranks(a);
  const auto rb = average_ranks(b);
  const double n = static_cast<double>(a.size());
  double ma = 0.0;
  double mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += ra[i];
    mb += rb[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0.0;
  double saa = 0.0;
  double sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (ra[i] - ma) * (rb[i] - mb);
    saa += (ra[i] - ma) * (ra[i] - ma);
    sbb += (rb[i] - mb) * (rb[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

}  // namespace citepred::oracle
