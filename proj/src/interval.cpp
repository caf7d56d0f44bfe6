#include "raystat/interval.hpp"

#include <algorithm>
#include <stdexcept>

namespace raystat::interval {

namespace {

// Interval construction tolerates the degenerate zero-width case eps = 0,
// unlike the planner formulas.
void require_margin(const AccuracySpec& spec) {
  if (!(spec.epsilon >= 0.0 && spec.epsilon < 1.0))
    throw std::domain_error("epsilon must lie in [0, 1)");
  if (!(spec.delta > 0.0 && spec.delta < 1.0))
    throw std::domain_error("delta must lie in (0, 1)");
}

}  // namespace

ConfidenceInterval noiseless_interval(double mu_hat, const AccuracySpec& spec) {
  require_margin(spec);
  if (!(mu_hat >= 0.0)) throw std::domain_error("mu_hat must be >= 0");
  return {mu_hat / (1.0 + spec.epsilon), mu_hat / (1.0 - spec.epsilon),
          1.0 - spec.delta};
}

JointIntervals noisy_joint_intervals(double x1, double x2, const SignalPlan& plan,
                                     const AccuracySpec& spec) {
  validate(plan);
  require_margin(spec);
  if (!(x1 >= 0.0 && x2 >= 0.0))
    throw std::domain_error("half-mean powers must be >= 0");
  const double lo = 1.0 - spec.epsilon;
  const double hi = 1.0 + spec.epsilon;
  const double dp = plan.delta_p();
  const double conf = 1.0 - spec.delta;
  JointIntervals j;
  j.i_h = {(x1 / hi - x2 / lo) / dp, (x1 / lo - x2 / hi) / dp, conf};
  j.i_v = {(plan.p_s1 * x2 / hi - plan.p_s2 * x1 / lo) / dp,
           (plan.p_s1 * x2 / lo - plan.p_s2 * x1 / hi) / dp, conf};
  return j;
}

ConfidenceInterval snr_interval_zero_p2(double x1, double x2, double p_s1,
                                        const AccuracySpec& spec) {
  require_margin(spec);
  if (!(p_s1 > 0.0)) throw std::domain_error("p_s1 must be > 0");
  if (!(x1 >= 0.0)) throw std::domain_error("x1 must be >= 0");
  if (!(x2 > 0.0))
    throw std::domain_error("x2 must be > 0 (no noise-floor information)");
  const double lo = 1.0 - spec.epsilon;
  const double hi = 1.0 + spec.epsilon;
  return {(lo * x1 / (hi * x2) - 1.0) / p_s1, (hi * x1 / (lo * x2) - 1.0) / p_s1,
          1.0 - spec.delta};
}

ConfidenceInterval snr_interval_general(double x1, double x2, const SignalPlan& plan,
                                        const AccuracySpec& spec) {
  validate(plan);
  require_margin(spec);
  if (!(x1 >= 0.0 && x2 >= 0.0))
    throw std::domain_error("half-mean powers must be >= 0");
  const double lo = 1.0 - spec.epsilon;
  const double hi = 1.0 + spec.epsilon;
  const double denom_lower = (hi / lo) * plan.p_s1 * x2 - plan.p_s2 * x1;
  const double denom_upper = (lo / hi) * plan.p_s1 * x2 - plan.p_s2 * x1;
  if (!(denom_lower > 0.0 && denom_upper > 0.0))
    throw SnrUndefinedError(
        "snr_interval_general: side condition violated, a denominator "
        "(1 +- eps)/(1 -+ eps) * p_s1 * x2 - p_s2 * x1 is not positive");
  // bit-exact reduction to the p_s2 = 0 form
  if (plan.p_s2 == 0.0) return snr_interval_zero_p2(x1, x2, plan.p_s1, spec);
  const double scale = (1.0 - plan.p_s2 / plan.p_s1) * x1;
  return {scale / denom_lower - 1.0 / plan.p_s1, scale / denom_upper - 1.0 / plan.p_s1,
          1.0 - spec.delta};
}

ConfidenceInterval clamp_nonnegative(ConfidenceInterval ci) {
  ci.lower = std::max(ci.lower, 0.0);
  ci.upper = std::max(ci.upper, 0.0);
  return ci;
}

}  // namespace raystat::interval
