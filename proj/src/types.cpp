#include "raystat/types.hpp"

#include <cmath>

namespace raystat {

void validate(const AccuracySpec& spec) {
  if (!(spec.epsilon > 0.0 && spec.epsilon < 1.0))
    throw std::domain_error("epsilon must lie in (0, 1)");
  if (!(spec.delta > 0.0 && spec.delta < 1.0))
    throw std::domain_error("delta must lie in (0, 1)");
}

void validate(const SignalPlan& plan) {
  if (!(plan.p_s2 >= 0.0)) throw std::domain_error("p_s2 must be >= 0");
  if (!(plan.p_s1 > plan.p_s2)) throw std::domain_error("p_s1 must exceed p_s2");
  if (!std::isfinite(plan.p_s1)) throw std::domain_error("p_s1 must be finite");
}

void validate(const ChannelParams& params) {
  if (!(params.sigma_h2 > 0.0)) throw std::domain_error("sigma_h2 must be > 0");
  if (!(params.sigma_v2 >= 0.0)) throw std::domain_error("sigma_v2 must be >= 0");
}

void validate(const SampleBatch& batch) {
  if (batch.received_power.empty()) throw std::domain_error("batch is empty");
  for (double v : batch.received_power)
    if (!(v >= 0.0)) throw std::domain_error("received power values must be >= 0");
}

}  // namespace raystat
