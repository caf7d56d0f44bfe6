#pragma once

#include <array>
#include <cstdint>

#include "raystat/types.hpp"

namespace raystat::estimator {

// Point estimates for the two variances. Estimates are reported as computed,
// even when negative: clipping would destroy unbiasedness and the covariance
// identity. `negative` flags that case for callers that care.
struct PointEstimate {
  double sigma_h2_hat = 0.0;
  double sigma_v2_hat = 0.0;
  bool negative = false;
};

using Matrix2 = std::array<std::array<double, 2>, 2>;

// Fisher information for (sigma_H^2, sigma_V^2), its analytic inverse, and
// the per-parameter bound standard deviations sqrt(cov[0][0]), sqrt(cov[1][1]).
struct CrbReport {
  Matrix2 fim{};
  Matrix2 cov{};
  double crb_h = 0.0;
  double crb_v = 0.0;
};

struct DbReport {
  double pl_db = 0.0;   // -10 log10(2 sigma_H^2)
  double snr_db = 0.0;  // 10 log10(p_s) + 10 log10(sigma_H^2 / sigma_V^2)
};

// (1/2n) sum |X_i|^2; expectation is p_s*sigma_H^2 + sigma_V^2.
double half_mean_power(const SampleBatch& batch);

// sum |X_i|^2 / n, the estimate of the second moment mu = 2 sigma^2.
// Always equals 2 * half_mean_power.
double noiseless_second_moment(const SampleBatch& batch);

// half_mean_power / power: channel-gain variance estimate when the batch was
// measured without noise. Requires batch.power > 0.
double noiseless_sigma_h2(const SampleBatch& batch);

// Two-power estimates from the half-mean powers x1, x2:
//   sigma_H^2 = (x1 - x2) / dP,  sigma_V^2 = (p_s1*x2 - p_s2*x1) / dP.
PointEstimate point_estimates_from_stats(double x1, double x2, const SignalPlan& plan);

// Same, from raw batches; batches must have equal size and powers matching
// the plan.
PointEstimate point_estimates(const SampleBatch& batch1, const SampleBatch& batch2,
                              const SignalPlan& plan);

// Ratio estimate of sigma_H^2 / sigma_V^2:
// (x1 - x2) / (p_s1*x2 - p_s2*x1). Throws SnrUndefinedError when the noise
// denominator is not positive.
double snr_point_estimate_from_stats(double x1, double x2, const SignalPlan& plan);
double snr_point_estimate(const SampleBatch& batch1, const SampleBatch& batch2,
                          const SignalPlan& plan);

// Fisher information of n two-power sample pairs at the given truth, with
// its analytic inverse. Requires both composite variances positive.
CrbReport fisher_information(const ChannelParams& params, const SignalPlan& plan,
                             std::int64_t n);

// Path loss and SNR in dB. sigma_v2 == 0 reports SNR as +infinity.
DbReport db_conversions(double p_s, const ChannelParams& params);

}  // namespace raystat::estimator
