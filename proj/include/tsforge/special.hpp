#pragma once

namespace tsforge::special {

/// Standard normal CDF.
double normal_cdf(double x);

/// Upper-tail probability of a chi-square distribution with k degrees of
/// freedom: P(X > x).
double chi2_sf(double x, double k);

/// Regularized lower incomplete gamma P(a, x).
double gamma_p(double a, double x);

}  // namespace tsforge::special
