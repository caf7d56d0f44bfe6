#include "raystat/planner.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "raystat/special_functions.hpp"

namespace raystat::planner {

namespace {

// "N > bound" as an integer: floor(bound) + 1. Never round-to-nearest; a
// bound that lands exactly on an integer still goes up.
std::int64_t least_integer_above(long double bound) {
  if (!(bound > 0.0L) || bound > 9.0e17L)
    throw std::domain_error("sample-size bound out of range");
  return static_cast<std::int64_t>(std::floor(bound)) + 1;
}

// Smallest n in [1, hi] satisfying pred, assuming pred is monotone in n.
// The assumption is verified afterwards at n-1 and n; if it fails, an
// ascending scan from max(1, n - 8) settles the answer.
std::int64_t min_n_search(std::int64_t hi, const std::function<bool(std::int64_t)>& pred) {
  while (!pred(hi)) hi *= 2;  // grow the bracket if the initial bound misses
  std::int64_t lo = 1;
  while (lo < hi) {
    const std::int64_t mid = lo + (hi - lo) / 2;
    if (pred(mid)) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  if (pred(lo) && (lo == 1 || !pred(lo - 1))) return lo;
  for (std::int64_t n = std::max<std::int64_t>(1, lo - 8);; ++n)
    if (pred(n)) return n;
}

}  // namespace

std::int64_t apriori_noiseless(const AccuracySpec& spec) {
  validate(spec);
  const long double e = spec.epsilon;
  const long double d = spec.delta;
  return least_integer_above(2.0L * (3.0L + 2.0L * e) * std::log(2.0L / d) /
                             (3.0L * e * e));
}

std::int64_t apriori_noisy(const AccuracySpec& spec) {
  validate(spec);
  const long double e = spec.epsilon;
  const long double d = spec.delta;
  return least_integer_above(2.0L * (3.0L + 2.0L * e) * std::log(4.0L / d) /
                             (3.0L * e * e));
}

std::int64_t apriori_snr(const AccuracySpec& spec) {
  validate(spec);
  const long double e = spec.epsilon;
  const long double d = spec.delta;
  return least_integer_above(2.0L * (2.0L + e) * (6.0L + 5.0L * e) *
                             std::log(4.0L / d) / (3.0L * e * e));
}

double exact_coverage(std::int64_t n, double epsilon) {
  if (n < 1) throw std::domain_error("exact_coverage: n must be >= 1");
  if (!(epsilon >= 0.0 && epsilon < 1.0))
    throw std::domain_error("exact_coverage: epsilon must lie in [0, 1)");
  const double dn = 2.0 * static_cast<double>(n);
  return sf::chi2_cdf(2 * n, dn * (1.0 + epsilon)) -
         sf::chi2_cdf(2 * n, dn * (1.0 - epsilon));
}

std::int64_t min_n_noiseless(const AccuracySpec& spec) {
  validate(spec);
  const double thr = 1.0 - spec.delta;
  const double eps = spec.epsilon;
  return min_n_search(apriori_noiseless(spec),
                      [&](std::int64_t n) { return exact_coverage(n, eps) > thr; });
}

std::int64_t min_n_noisy(const AccuracySpec& spec) {
  validate(spec);
  const double thr = std::sqrt(1.0 - spec.delta);
  const double eps = spec.epsilon;
  return min_n_search(apriori_noisy(spec),
                      [&](std::int64_t n) { return exact_coverage(n, eps) >= thr; });
}

std::int64_t min_n_snr(const AccuracySpec& spec) {
  validate(spec);
  const double thr = std::sqrt(1.0 - spec.delta);
  const double eps = spec.epsilon / (2.0 + spec.epsilon);
  return min_n_search(apriori_snr(spec),
                      [&](std::int64_t n) { return exact_coverage(n, eps) >= thr; });
}

namespace {

double eps_root(std::int64_t n, double delta, double log_numerator) {
  if (!(delta > 0.0 && delta < 1.0))
    throw std::domain_error("delta must lie in (0, 1)");
  if (n < 1) throw std::domain_error("n must be >= 1");
  const long double L = std::log(static_cast<long double>(log_numerator) / delta);
  if (!(static_cast<long double>(n) > 10.0L / 3.0L * L))
    throw std::domain_error(
        "n too small: no margin below 1 exists (need n > (10/3) ln(" +
        std::to_string(static_cast<int>(log_numerator)) + "/delta))");
  const long double t = 2.0L * L / (3.0L * static_cast<long double>(n));
  return static_cast<double>(
      t * (1.0L + std::sqrt(1.0L + 9.0L * static_cast<long double>(n) / (2.0L * L))));
}

}  // namespace

double eps_for_n(std::int64_t n, double delta) { return eps_root(n, delta, 2.0); }

double eps_for_n_noisy(std::int64_t n, double delta) { return eps_root(n, delta, 4.0); }

double tightness_ratio(double delta) {
  if (!(delta > 0.0 && delta < 1.0))
    throw std::domain_error("tightness_ratio: delta must lie in (0, 1)");
  // Z at 1 - delta/2, computed from the exact tail mass delta/2.
  const double z = -sf::normal_quantile(delta / 2.0);
  return 2.0 * std::log(2.0 / delta) / (z * z);
}

double chernoff_tail_upper(std::int64_t n, double epsilon) {
  if (n < 1) throw std::domain_error("chernoff_tail_upper: n must be >= 1");
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::domain_error("chernoff_tail_upper: epsilon must lie in (0, 1)");
  return std::exp(static_cast<double>(n) * (std::log1p(epsilon) - epsilon));
}

double chernoff_tail_lower(std::int64_t n, double epsilon) {
  if (n < 1) throw std::domain_error("chernoff_tail_lower: n must be >= 1");
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::domain_error("chernoff_tail_lower: epsilon must lie in (0, 1)");
  return std::exp(static_cast<double>(n) * (std::log1p(-epsilon) + epsilon));
}

}  // namespace raystat::planner
