#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace raystat {

// Requested accuracy: |estimate - truth| / truth < epsilon with
// probability > 1 - delta.
struct AccuracySpec {
  double epsilon = 0.0;  // margin of relative error, in (0, 1)
  double delta = 0.0;    // confidence gap, in (0, 1)
};

// The two BPSK transmit power levels, p_s1 > p_s2 >= 0 (linear units).
struct SignalPlan {
  double p_s1 = 1.0;
  double p_s2 = 0.0;

  double delta_p() const { return p_s1 - p_s2; }
};

// Ground-truth per-component variances of the channel gain and of the
// additive noise.
struct ChannelParams {
  double sigma_h2 = 1.0;
  double sigma_v2 = 0.0;

  // Per-component variance p_s*sigma_H^2 + sigma_V^2 of the received
  // signal at transmit power p_s.
  double composite(double p_s) const { return p_s * sigma_h2 + sigma_v2; }
};

// N received-power measurements |X_i|^2 taken at one transmit power.
struct SampleBatch {
  double power = 0.0;
  std::vector<double> received_power;

  std::int64_t n() const { return static_cast<std::int64_t>(received_power.size()); }
};

// Raised when an SNR estimate or interval is undefined because the noise
// denominator came out nonpositive.
class SnrUndefinedError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

void validate(const AccuracySpec& spec);
void validate(const SignalPlan& plan);
void validate(const ChannelParams& params);
void validate(const SampleBatch& batch);

}  // namespace raystat
