#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "raystat/channel_sim.hpp"
#include "raystat/types.hpp"

namespace raystat::experiments {

// Per-N Monte Carlo results. Lists that apply to the experiment share
// n_grid's length; the others stay empty.
struct MonteCarloReport {
  std::int64_t trials = 0;
  std::vector<std::int64_t> n_grid;
  std::vector<double> coverage;    // joint coverage of (sigma_H^2, sigma_V^2)
  std::vector<double> coverage_h;  // marginal for sigma_H^2
  std::vector<double> coverage_v;  // marginal for sigma_V^2
  std::vector<double> rmse_h;
  std::vector<double> rmse_v;
  std::vector<double> crb_h;
  std::vector<double> crb_v;
  std::uint64_t seed = 0;
};

// Fraction of campaigns whose simultaneous intervals contain the truth,
// jointly and per parameter. Containment is strict, matching the interval
// events; epsilon = 0 gives zero-width intervals and coverage 0.
MonteCarloReport coverage_experiment(const ChannelParams& params,
                                     const SignalPlan& plan, const AccuracySpec& spec,
                                     std::int64_t n, std::int64_t trials,
                                     std::uint64_t seed,
                                     sim::GenMethod method = sim::GenMethod::complex_gaussian);

// Single-power noise-free case: fraction of batches whose second-moment
// estimate lands within relative margin epsilon of the truth.
MonteCarloReport noiseless_coverage(const AccuracySpec& spec, std::int64_t n,
                                    std::int64_t trials, std::uint64_t seed,
                                    sim::GenMethod method = sim::GenMethod::complex_gaussian);

// Empirical RMSE of the two-power point estimates over the n grid, alongside
// the analytic bound standard deviations.
MonteCarloReport rmse_vs_crb(const ChannelParams& params, const SignalPlan& plan,
                             const std::vector<std::int64_t>& n_grid,
                             std::int64_t trials, std::uint64_t seed,
                             sim::GenMethod method = sim::GenMethod::complex_gaussian);

enum class RatioMode { noiseless, noisy_h, noisy_v, snr };

// One row per sample size: the margin implied by the matching a priori
// bound, the realized half-mean powers (NaN for the noiseless mode), and
// 20*log10(upper/lower) of the interval, NaN when the interval is undefined
// or not positive.
struct RatioCurveRow {
  std::int64_t n = 0;
  double eps = 0.0;
  double x1 = 0.0;
  double x2 = 0.0;
  double ratio_db = 0.0;
};

struct RatioCurveTable {
  RatioMode mode = RatioMode::noiseless;
  double delta = 0.0;
  std::uint64_t seed = 0;
  std::vector<RatioCurveRow> rows;
};

RatioCurveTable ratio_curves(RatioMode mode, double delta,
                             const std::vector<std::int64_t>& n_grid,
                             const ChannelParams& params, const SignalPlan& plan,
                             std::uint64_t seed,
                             sim::GenMethod method = sim::GenMethod::complex_gaussian);

// Per-delta tightness of the closed-form bound: the asymptotic ratio
// 2 ln(2/delta)/Z^2 and the finite-sample ratio apriori/min_n at a fixed
// margin epsilon.
struct TightnessRow {
  double delta = 0.0;
  double ratio = 0.0;
  std::int64_t apriori_n = 0;
  std::int64_t min_n = 0;
  double apriori_over_min = 0.0;
};

struct TightnessTable {
  double epsilon = 0.0;
  std::vector<TightnessRow> rows;
};

TightnessTable tightness_table(const std::vector<double>& delta_grid, double epsilon);

// Plot-ready serializations. Identical inputs produce identical bytes.
std::string to_csv(const MonteCarloReport& report);
std::string to_csv(const RatioCurveTable& table);
std::string to_csv(const TightnessTable& table);
nlohmann::ordered_json to_json(const MonteCarloReport& report);
nlohmann::ordered_json to_json(const RatioCurveTable& table);
nlohmann::ordered_json to_json(const TightnessTable& table);

const char* to_string(RatioMode mode);
RatioMode ratio_mode_from_string(const std::string& name);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace raystat::experiments
