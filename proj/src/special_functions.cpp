#include "raystat/special_functions.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace raystat::sf {

namespace {

constexpr double kTwoPi = 6.28318530717958647692;
constexpr int kMaxIter = 2000000;

// ln(1 + u) - u without cancellation near u = 0.
double log1p_minus(double u) {
  if (std::fabs(u) > 0.375) return std::log1p(u) - u;
  // sum_{k>=2} (-1)^k u^k / k
  double sum = 0.0;
  double upow = u;
  double sign = 1.0;
  for (int k = 2; k < 200; ++k) {
    upow *= u;
    sign = -sign;
    const double term = sign * upow / k;
    sum += term;
    if (std::fabs(term) < 1e-18 * std::fabs(sum)) break;
  }
  return sum;
}

// lnGamma(a) - [(a - 1/2) ln a - a + ln(2 pi)/2], asymptotic series; a >= 16.
double stirling_remainder(double a) {
  static const double c[] = {1.0 / 12.0,   -1.0 / 360.0,   1.0 / 1260.0,
                             -1.0 / 1680.0, 1.0 / 1188.0};
  const double ia = 1.0 / a;
  const double ia2 = ia * ia;
  return ia * (c[0] + ia2 * (c[1] + ia2 * (c[2] + ia2 * (c[3] + ia2 * c[4]))));
}

// ln( x^a e^-x / Gamma(a + 1) ). For large a the three naive pieces are each
// O(a ln a) and cancel catastrophically, so the Stirling form is used: the
// surviving a*(ln(1 + mu) - mu) term stays O(1) near the distribution bulk.
double ln_dominant(double a, double x) {
  if (a < 16.0) return a * std::log(x) - x - ln_gamma(a + 1.0);
  const double mu = (x - a) / a;
  return a * log1p_minus(mu) - 0.5 * std::log(kTwoPi * a) - stirling_remainder(a);
}

// P(a, x) by power series, for x < a + 1.
double gamma_p_series(double a, double x) {
  double sum = 1.0;
  double term = 1.0;
  for (int n = 1; n < kMaxIter; ++n) {
    term *= x / (a + n);
    sum += term;
    if (term < sum * 1e-17) {
      const double p = sum * std::exp(ln_dominant(a, x));
      return p < 1.0 ? p : 1.0;
    }
  }
  throw std::runtime_error("gamma_p: series failed to converge");
}

// Q(a, x) by modified Lentz continued fraction, for x >= a + 1.
double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIter; ++i) {
    const double an = -static_cast<double>(i) * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 2.3e-16) {
      // Q = D(a,x) * a * h, since x^a e^-x / Gamma(a) = D(a,x) * a
      const double q = std::exp(ln_dominant(a, x) + std::log(a)) * h;
      return q < 1.0 ? q : 1.0;
    }
  }
  throw std::runtime_error("gamma_q: continued fraction failed to converge");
}

}  // namespace

double ln_gamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("ln_gamma: argument must be > 0");
  return std::lgamma(x);
}

double gamma_p(double a, double x) {
  if (!(a > 0.0)) throw std::domain_error("gamma_p: a must be > 0");
  if (!(x >= 0.0)) throw std::domain_error("gamma_p: x must be >= 0");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_cf(a, x);
}

double gamma_q(double a, double x) {
  if (!(a > 0.0)) throw std::domain_error("gamma_q: a must be > 0");
  if (!(x >= 0.0)) throw std::domain_error("gamma_q: x must be >= 0");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_cf(a, x);
}

double chi2_cdf(std::int64_t dof, double x) {
  if (dof < 1) throw std::domain_error("chi2_cdf: dof must be >= 1");
  if (!(x >= 0.0)) throw std::domain_error("chi2_cdf: x must be >= 0");
  return gamma_p(static_cast<double>(dof) / 2.0, x / 2.0);
}

double poisson_below(double theta, std::int64_t n) {
  if (!(theta > 0.0)) throw std::domain_error("poisson_below: theta must be > 0");
  if (n < 1) throw std::domain_error("poisson_below: n must be >= 1");

  const std::int64_t kmax = n - 1;
  const std::int64_t kstar =
      std::min(kmax, static_cast<std::int64_t>(std::floor(theta)));

  // Largest term in range, in extended precision; everything else follows
  // from the term ratios p_{k-1}/p_k = k/theta and p_{k+1}/p_k = theta/(k+1).
  const long double th = theta;
  const long double lp =
      kstar * std::log(th) - th - std::lgamma(static_cast<long double>(kstar) + 1.0L);
  const long double anchor = std::exp(lp);

  long double sum = anchor;
  long double term = anchor;
  for (std::int64_t k = kstar; k >= 1; --k) {
    term *= static_cast<long double>(k) / th;
    sum += term;
    if (term <= sum * 1e-22L) break;
  }
  term = anchor;
  for (std::int64_t k = kstar + 1; k <= kmax; ++k) {
    term *= th / static_cast<long double>(k);
    sum += term;
    if (term <= sum * 1e-22L) break;
  }
  const double out = static_cast<double>(sum);
  return out < 1.0 ? out : 1.0;
}

double normal_cdf(double z) {
  return 0.5 * std::erfc(-z * 0.70710678118654752440);
}

namespace {

// Rational approximation of the lower-tail normal quantile (Acklam).
double quantile_estimate(double p) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425;
  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

// Lower-half quantile (p <= 0.5) with Halley refinement.
double quantile_lower(double p) {
  double z = quantile_estimate(p);
  for (int i = 0; i < 2; ++i) {
    const double e = normal_cdf(z) - p;
    const double u = e * std::sqrt(kTwoPi) * std::exp(0.5 * z * z);
    z -= u / (1.0 + 0.5 * z * u);
  }
  return z;
}

}  // namespace

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::domain_error("normal_quantile: p must lie in (0, 1)");
  // 1 - p is exact for p >= 0.5, so the upper half reduces to the lower half
  // without precision loss.
  if (p > 0.5) return -quantile_lower(1.0 - p);
  if (p == 0.5) return 0.0;
  return quantile_lower(p);
}

}  // namespace raystat::sf
