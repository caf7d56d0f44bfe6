#pragma once

#include <cstdint>
#include <string>

#include "raystat/types.hpp"

namespace raystat::sim {

// How received powers are drawn. complex_gaussian builds |sqrt(P)*H*s + V|^2
// from fresh complex Gaussian H, V and a BPSK sign s; exponential_shortcut
// draws -2*sigma_l^2*ln(U) directly, using the fact that the received power
// is exponential with mean twice the composite variance. The two agree in
// distribution; the shortcut is for large Monte Carlo runs.
enum class GenMethod { complex_gaussian, exponential_shortcut };

struct CampaignConfig {
  ChannelParams params;
  SignalPlan plan;
  std::int64_t n = 1;
  std::uint64_t seed = 0;
  GenMethod method = GenMethod::complex_gaussian;
};

// Deterministic sub-seed derived by hashing (seed, label). Streams under
// distinct labels never share state, so batches and trials can be generated
// concurrently and redrawn independently.
std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t label);

// Counter-based stream: the value sequence is a pure function of
// (seed, label). No shared mutable generator anywhere.
class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t label);

  std::uint64_t next_u64();
  double next_unit();      // uniform on (0, 1), never returns an endpoint
  double next_gaussian();  // standard normal via Box-Muller, pairs cached

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double cached_ = 0.0;
  bool have_cached_ = false;
};

struct Campaign {
  SampleBatch batch1;
  SampleBatch batch2;
};

// One batch of n received powers at the given power level, which must be one
// of the plan's two levels. Identical (config, power) always yields the
// identical batch.
SampleBatch generate_batch(const CampaignConfig& config, double power);

// Both batches, from disjoint sub-streams of the seed.
Campaign generate_campaign(const CampaignConfig& config);

// Batch CSV: a power,n,seed header row, its values, then one received-power
// value per line at full round-trip precision.
void write_batch_csv(const std::string& path, const SampleBatch& batch,
                     std::uint64_t seed);

struct BatchFile {
  SampleBatch batch;
  std::uint64_t seed = 0;
};

BatchFile read_batch_csv(const std::string& path);

}  // namespace raystat::sim
