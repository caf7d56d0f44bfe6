#pragma once

#include <cstdint>

namespace raystat::sf {

// Natural log of the gamma function, x > 0.
double ln_gamma(double x);

// Regularized incomplete gamma functions P(a, x) and Q(a, x) = 1 - P(a, x)
// for a > 0, x >= 0. Each tail is computed directly (series for P when
// x < a + 1, continued fraction for Q otherwise), so small tails keep full
// relative accuracy instead of cancelling against 1.
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// CDF of the chi-square distribution with dof degrees of freedom,
// F(x) = P(dof/2, x/2). Accurate in absolute terms up to dof ~ 2e7.
double chi2_cdf(std::int64_t dof, double x);

// Pr{Y < n} for Y ~ Poisson(theta): e^-theta * sum_{k<n} theta^k / k!.
// The largest in-range term is evaluated in log space and the remaining
// terms by ratio recurrences outward from it, in extended precision.
double poisson_below(double theta, std::int64_t n);

// Standard normal CDF.
double normal_cdf(double z);

// Inverse of the standard normal CDF on (0, 1): rational initial guess
// refined by Halley steps against normal_cdf.
double normal_quantile(double p);

}  // namespace raystat::sf
