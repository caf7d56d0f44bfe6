#pragma once

#include <cstdint>

#include "raystat/types.hpp"

namespace raystat::planner {

// Closed-form a priori sample-size bounds. Each returns the least integer
// strictly greater than the bound, evaluated in the widest native floating
// type so that an integral bound still rounds up.
//
//   noiseless: 2(3 + 2e) ln(2/d) / (3 e^2)        single power level
//   noisy:     2(3 + 2e) ln(4/d) / (3 e^2)        two power levels, joint
//   snr:       2(2 + e)(6 + 5e) ln(4/d) / (3 e^2) ratio sigma_H^2 / sigma_V^2
std::int64_t apriori_noiseless(const AccuracySpec& spec);
std::int64_t apriori_noisy(const AccuracySpec& spec);
std::int64_t apriori_snr(const AccuracySpec& spec);

// Exact probability that the normalized power statistic of n samples lands
// within relative margin epsilon of its mean:
// F_{chi2,2n}(2n(1+eps)) - F_{chi2,2n}(2n(1-eps)). Requires 0 <= eps < 1.
double exact_coverage(std::int64_t n, double epsilon);

// Smallest n whose exact coverage clears the confidence threshold:
// strictly above 1 - delta (noiseless), at least sqrt(1 - delta) (noisy),
// and the same sqrt threshold at shrunk margin eps/(2 + eps) (snr).
std::int64_t min_n_noiseless(const AccuracySpec& spec);
std::int64_t min_n_noisy(const AccuracySpec& spec);
std::int64_t min_n_snr(const AccuracySpec& spec);

// The margin achievable with n samples at confidence 1 - delta: unique
// positive root of n = 2(3 + 2e) ln(2/d) / (3 e^2). Defined (root < 1)
// only for n > (10/3) ln(2/delta); throws otherwise.
double eps_for_n(std::int64_t n, double delta);

// Same inversion against the two-power bound, ln(4/delta) in place of
// ln(2/delta).
double eps_for_n_noisy(std::int64_t n, double delta);

// 2 ln(2/delta) / Z^2 with Z the standard normal quantile at 1 - delta/2.
// Exceeds 1 and decreases toward 1 as delta -> 0; measures how loose the
// closed-form bound is relative to the asymptotic minimum.
double tightness_ratio(double delta);

// Chernoff bounds on the upper and lower tail probabilities,
// [(1+e)e^-e]^n and [(1-e)e^e]^n, evaluated in log space.
double chernoff_tail_upper(std::int64_t n, double epsilon);
double chernoff_tail_lower(std::int64_t n, double epsilon);

}  // namespace raystat::planner
