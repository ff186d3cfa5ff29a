#pragma once

namespace citepred::special {

// Regularized incomplete beta/gamma functions. Absolute accuracy target is
// 1e-10 for the parameter ranges produced by Student-t and chi-square
// distributions with 1 <= df <= 1e6.

/// I_x(a, b) for a, b > 0 and x in [0, 1].
double incomplete_beta(double a, double b, double x);

/// P(a, x) = gamma(a, x) / Gamma(a), lower regularized.
double gamma_p(double a, double x);

/// Q(a, x) = 1 - P(a, x), computed without cancellation.
double gamma_q(double a, double x);

/// log Gamma(a) - log Gamma(a + b), accurate for large a.
double log_gamma_ratio(double a, double b);

double student_t_cdf(double t, double df);

/// P(|T| >= |t|) for T ~ t(df).
double student_t_two_sided(double t, double df);

double chi_square_cdf(double x, double df);

/// P(X >= x) for X ~ chi-square(df).
double chi_square_sf(double x, double df);

}  // namespace citepred::special
