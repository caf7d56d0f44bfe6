#include "raystat/estimator.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace raystat::estimator {

double half_mean_power(const SampleBatch& batch) {
  validate(batch);
  long double total = 0.0L;
  for (double v : batch.received_power) total += v;
  return static_cast<double>(total / (2.0L * static_cast<long double>(batch.n())));
}

double noiseless_second_moment(const SampleBatch& batch) {
  return 2.0 * half_mean_power(batch);
}

double noiseless_sigma_h2(const SampleBatch& batch) {
  if (!(batch.power > 0.0))
    throw std::domain_error(
        "noiseless_sigma_h2: batch power must be > 0 (a noise-only batch "
        "carries no channel information)");
  return half_mean_power(batch) / batch.power;
}

PointEstimate point_estimates_from_stats(double x1, double x2, const SignalPlan& plan) {
  validate(plan);
  if (!(x1 >= 0.0 && x2 >= 0.0))
    throw std::domain_error("half-mean powers must be >= 0");
  const double dp = plan.delta_p();
  PointEstimate est;
  est.sigma_h2_hat = (x1 - x2) / dp;
  est.sigma_v2_hat = (plan.p_s1 * x2 - plan.p_s2 * x1) / dp;
  est.negative = est.sigma_h2_hat < 0.0 || est.sigma_v2_hat < 0.0;
  return est;
}

namespace {

void check_campaign(const SampleBatch& batch1, const SampleBatch& batch2,
                    const SignalPlan& plan) {
  validate(batch1);
  validate(batch2);
  if (batch1.n() != batch2.n())
    throw std::invalid_argument("batches must have equal sample counts");
  if (batch1.power != plan.p_s1 || batch2.power != plan.p_s2)
    throw std::invalid_argument("batch powers do not match the signal plan");
}

}  // namespace

PointEstimate point_estimates(const SampleBatch& batch1, const SampleBatch& batch2,
                              const SignalPlan& plan) {
  check_campaign(batch1, batch2, plan);
  return point_estimates_from_stats(half_mean_power(batch1), half_mean_power(batch2),
                                    plan);
}

double snr_point_estimate_from_stats(double x1, double x2, const SignalPlan& plan) {
  validate(plan);
  const double denom = plan.p_s1 * x2 - plan.p_s2 * x1;
  if (!(denom > 0.0))
    throw SnrUndefinedError(
        "snr_point_estimate: noise-power estimate is not positive; SNR undefined");
  return (x1 - x2) / denom;
}

double snr_point_estimate(const SampleBatch& batch1, const SampleBatch& batch2,
                          const SignalPlan& plan) {
  check_campaign(batch1, batch2, plan);
  return snr_point_estimate_from_stats(half_mean_power(batch1),
                                       half_mean_power(batch2), plan);
}

CrbReport fisher_information(const ChannelParams& params, const SignalPlan& plan,
                             std::int64_t n) {
  validate(params);
  validate(plan);
  if (n < 1) throw std::domain_error("fisher_information: n must be >= 1");
  const double s1 = params.composite(plan.p_s1);
  const double s2 = params.composite(plan.p_s2);
  if (!(s1 > 0.0 && s2 > 0.0))
    throw std::domain_error("fisher_information: composite variances must be > 0");

  const double p1 = plan.p_s1;
  const double p2 = plan.p_s2;
  const double dn = static_cast<double>(n);
  const double s1q = s1 * s1;  // sigma_1^4
  const double s2q = s2 * s2;  // sigma_2^4

  CrbReport r;
  r.fim[0][0] = dn * (p1 * p1 / s1q + p2 * p2 / s2q);
  r.fim[0][1] = dn * (p1 / s1q + p2 / s2q);
  r.fim[1][0] = r.fim[0][1];
  r.fim[1][1] = dn * (1.0 / s1q + 1.0 / s2q);

  const double dp2 = plan.delta_p() * plan.delta_p();
  r.cov[0][0] = (s1q + s2q) / (dn * dp2);
  r.cov[0][1] = -(p1 * s2q + p2 * s1q) / (dn * dp2);
  r.cov[1][0] = r.cov[0][1];
  r.cov[1][1] = (p1 * p1 * s2q + p2 * p2 * s1q) / (dn * dp2);

  r.crb_h = std::sqrt(r.cov[0][0]);
  r.crb_v = std::sqrt(r.cov[1][1]);
  return r;
}

DbReport db_conversions(double p_s, const ChannelParams& params) {
  validate(params);
  if (!(p_s > 0.0)) throw std::domain_error("db_conversions: p_s must be > 0");
  DbReport r;
  r.pl_db = -10.0 * std::log10(2.0 * params.sigma_h2);
  r.snr_db = params.sigma_v2 == 0.0
                 ? std::numeric_limits<double>::infinity()
                 : 10.0 * std::log10(p_s) +
                       10.0 * std::log10(params.sigma_h2 / params.sigma_v2);
  return r;
}

}  // namespace raystat::estimator
