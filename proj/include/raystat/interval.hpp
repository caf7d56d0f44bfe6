#pragma once

#include "raystat/types.hpp"

namespace raystat::interval {

// A confidence interval with its guaranteed level 1 - delta. `confidence`
// records the guarantee, not the exact coverage; endpoints are reported
// unclamped (the lower endpoint may be negative on unlucky data).
struct ConfidenceInterval {
  double lower = 0.0;
  double upper = 0.0;
  double confidence = 0.0;
};

struct JointIntervals {
  ConfidenceInterval i_h;
  ConfidenceInterval i_v;
};

// [mu_hat/(1+eps), mu_hat/(1-eps)] for the second moment; holds with
// probability > 1 - delta once n meets the noiseless sample-size bound.
ConfidenceInterval noiseless_interval(double mu_hat, const AccuracySpec& spec);

// Simultaneous intervals for sigma_H^2 and sigma_V^2 from the two half-mean
// powers x1, x2; jointly valid at 1 - delta once n meets the two-power bound.
JointIntervals noisy_joint_intervals(double x1, double x2, const SignalPlan& plan,
                                     const AccuracySpec& spec);

// Interval for sigma_H^2 / sigma_V^2 when p_s2 = 0. Requires x2 > 0.
ConfidenceInterval snr_interval_zero_p2(double x1, double x2, double p_s1,
                                        const AccuracySpec& spec);

// General-plan SNR interval; reduces exactly to snr_interval_zero_p2 when
// p_s2 = 0. Throws SnrUndefinedError unless both side conditions
// ((1 +- eps)/(1 -+ eps)) p_s1 x2 - p_s2 x1 > 0 hold.
ConfidenceInterval snr_interval_general(double x1, double x2, const SignalPlan& plan,
                                        const AccuracySpec& spec);

// Presentation helper: clamp negative endpoints to zero. Coverage guarantees
// concern the unclamped sets; clamping only ever enlarges them.
ConfidenceInterval clamp_nonnegative(ConfidenceInterval ci);

}  // namespace raystat::interval
