#include "raystat/channel_sim.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace raystat::sim {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
constexpr double kTwoPi = 6.28318530717958647692;

std::uint64_t avalanche(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t label) {
  return avalanche(avalanche(seed + kGolden) ^ (label * kGolden + 1));
}

Stream::Stream(std::uint64_t seed, std::uint64_t label)
    : key_(sub_seed(seed, label)) {}

std::uint64_t Stream::next_u64() {
  counter_ += 1;
  return avalanche(key_ + counter_ * kGolden);
}

double Stream::next_unit() {
  // 53 random bits centered in (0,1); both endpoints are unreachable
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double Stream::next_gaussian() {
  if (have_cached_) {
    have_cached_ = false;
    return cached_;
  }
  const double r = std::sqrt(-2.0 * std::log(next_unit()));
  const double phi = kTwoPi * next_unit();
  cached_ = r * std::sin(phi);
  have_cached_ = true;
  return r * std::cos(phi);
}

namespace {

void validate_config(const CampaignConfig& config) {
  validate(config.params);
  validate(config.plan);
  if (config.n < 1) throw std::domain_error("campaign n must be >= 1");
}

}  // namespace

SampleBatch generate_batch(const CampaignConfig& config, double power) {
  validate_config(config);
  std::uint64_t label;
  if (power == config.plan.p_s1) {
    label = 1;
  } else if (power == config.plan.p_s2) {
    label = 2;
  } else {
    throw std::invalid_argument("power is not one of the plan's two levels");
  }
  Stream stream(config.seed, label);

  SampleBatch batch;
  batch.power = power;
  batch.received_power.reserve(static_cast<std::size_t>(config.n));
  const double composite = config.params.composite(power);

  if (config.method == GenMethod::exponential_shortcut) {
    for (std::int64_t i = 0; i < config.n; ++i)
      batch.received_power.push_back(-2.0 * composite * std::log(stream.next_unit()));
    return batch;
  }

  const double sh = std::sqrt(config.params.sigma_h2);
  const double sv = std::sqrt(config.params.sigma_v2);
  const double sp = std::sqrt(power);
  for (std::int64_t i = 0; i < config.n; ++i) {
    const double s = (stream.next_u64() & 1) ? 1.0 : -1.0;  // BPSK symbol
    const double hr = sh * stream.next_gaussian();
    const double hi = sh * stream.next_gaussian();
    const double vr = sv * stream.next_gaussian();
    const double vi = sv * stream.next_gaussian();
    const double re = sp * s * hr + vr;
    const double im = sp * s * hi + vi;
    batch.received_power.push_back(re * re + im * im);
  }
  return batch;
}

Campaign generate_campaign(const CampaignConfig& config) {
  validate_config(config);
  return {generate_batch(config, config.plan.p_s1),
          generate_batch(config, config.plan.p_s2)};
}

void write_batch_csv(const std::string& path, const SampleBatch& batch,
                     std::uint64_t seed) {
  validate(batch);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  char line[96];
  std::snprintf(line, sizeof(line), "%.17g,%" PRId64 ",%" PRIu64 "\n", batch.power,
                batch.n(), seed);
  out << "power,n,seed\n" << line;
  for (double v : batch.received_power) {
    std::snprintf(line, sizeof(line), "%.17g\n", v);
    out << line;
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

BatchFile read_batch_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::string header;
  if (!std::getline(in, header) || header != "power,n,seed")
    throw std::runtime_error(path + ": expected header 'power,n,seed'");
  std::string meta;
  if (!std::getline(in, meta)) throw std::runtime_error(path + ": missing metadata row");

  BatchFile bf;
  std::int64_t n = 0;
  {
    std::istringstream ss(meta);
    std::string field;
    if (!std::getline(ss, field, ',')) throw std::runtime_error(path + ": bad metadata");
    bf.batch.power = std::stod(field);
    if (!std::getline(ss, field, ',')) throw std::runtime_error(path + ": bad metadata");
    n = std::stoll(field);
    if (!std::getline(ss, field, ',')) throw std::runtime_error(path + ": bad metadata");
    bf.seed = std::stoull(field);
  }
  if (n < 1) throw std::runtime_error(path + ": n must be >= 1");

  bf.batch.received_power.reserve(static_cast<std::size_t>(n));
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    bf.batch.received_power.push_back(std::stod(line));
  }
  if (bf.batch.n() != n)
    throw std::runtime_error(path + ": sample count does not match header n");
  validate(bf.batch);
  return bf;
}

}  // namespace raystat::sim
