#include "raystat/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "raystat/estimator.hpp"
#include "raystat/interval.hpp"
#include "raystat/planner.hpp"

namespace raystat::experiments {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// Runs body(t) for every trial index. Trials are independent by contract
// (each derives its own stream and writes only its own slot), so scheduling
// order cannot affect the result.
void run_trials(std::int64_t trials, const std::function<void(std::int64_t)>& body) {
  const unsigned hw = std::thread::hardware_concurrency();
  const unsigned nthreads = std::min<unsigned>(hw ? hw : 1, 16);
  if (nthreads <= 1 || trials < 512) {
    for (std::int64_t t = 0; t < trials; ++t) body(t);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  for (unsigned i = 0; i < nthreads; ++i) {
    pool.emplace_back([&] {
      try {
        for (;;) {
          const std::int64_t t = next.fetch_add(1);
          if (t >= trials) return;
          body(t);
        }
      } catch (...) {
        const std::scoped_lock lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

void require_trials(std::int64_t trials) {
  if (trials < 100) throw std::domain_error("trials must be >= 100");
}

void require_margin(const AccuracySpec& spec) {
  if (!(spec.epsilon >= 0.0 && spec.epsilon < 1.0))
    throw std::domain_error("epsilon must lie in [0, 1)");
  if (!(spec.delta > 0.0 && spec.delta < 1.0))
    throw std::domain_error("delta must lie in (0, 1)");
}

bool inside(const interval::ConfidenceInterval& ci, double truth) {
  return ci.lower < truth && truth < ci.upper;
}

}  // namespace

MonteCarloReport coverage_experiment(const ChannelParams& params,
                                     const SignalPlan& plan, const AccuracySpec& spec,
                                     std::int64_t n, std::int64_t trials,
                                     std::uint64_t seed, sim::GenMethod method) {
  validate(params);
  validate(plan);
  require_margin(spec);
  require_trials(trials);
  if (n < 1) throw std::domain_error("n must be >= 1");

  MonteCarloReport report;
  report.trials = trials;
  report.n_grid = {n};
  report.seed = seed;

  if (spec.epsilon == 0.0) {
    // zero-width intervals contain nothing
    report.coverage = {0.0};
    report.coverage_h = {0.0};
    report.coverage_v = {0.0};
    return report;
  }

  std::vector<unsigned char> hit_h(static_cast<std::size_t>(trials));
  std::vector<unsigned char> hit_v(static_cast<std::size_t>(trials));
  run_trials(trials, [&](std::int64_t t) {
    sim::CampaignConfig config{params, plan, n, sim::sub_seed(seed, static_cast<std::uint64_t>(t) + 1),
                               method};
    const sim::Campaign campaign = sim::generate_campaign(config);
    const double x1 = estimator::half_mean_power(campaign.batch1);
    const double x2 = estimator::half_mean_power(campaign.batch2);
    const interval::JointIntervals joint =
        interval::noisy_joint_intervals(x1, x2, plan, spec);
    hit_h[static_cast<std::size_t>(t)] = inside(joint.i_h, params.sigma_h2) ? 1 : 0;
    hit_v[static_cast<std::size_t>(t)] = inside(joint.i_v, params.sigma_v2) ? 1 : 0;
  });

  std::int64_t joint_hits = 0, h_hits = 0, v_hits = 0;
  for (std::int64_t t = 0; t < trials; ++t) {
    h_hits += hit_h[static_cast<std::size_t>(t)];
    v_hits += hit_v[static_cast<std::size_t>(t)];
    joint_hits += hit_h[static_cast<std::size_t>(t)] & hit_v[static_cast<std::size_t>(t)];
  }
  const double m = static_cast<double>(trials);
  report.coverage = {static_cast<double>(joint_hits) / m};
  report.coverage_h = {static_cast<double>(h_hits) / m};
  report.coverage_v = {static_cast<double>(v_hits) / m};
  return report;
}

MonteCarloReport noiseless_coverage(const AccuracySpec& spec, std::int64_t n,
                                    std::int64_t trials, std::uint64_t seed,
                                    sim::GenMethod method) {
  require_margin(spec);
  require_trials(trials);
  if (n < 1) throw std::domain_error("n must be >= 1");

  MonteCarloReport report;
  report.trials = trials;
  report.n_grid = {n};
  report.seed = seed;
  if (spec.epsilon == 0.0) {
    report.coverage = {0.0};
    return report;
  }

  // Scale-free: unit composite variance, so the true second moment is 2.
  const ChannelParams params{1.0, 0.0};
  const SignalPlan plan{1.0, 0.0};
  std::vector<unsigned char> hit(static_cast<std::size_t>(trials));
  run_trials(trials, [&](std::int64_t t) {
    sim::CampaignConfig config{params, plan, n, sim::sub_seed(seed, static_cast<std::uint64_t>(t) + 1),
                               method};
    const SampleBatch batch = sim::generate_batch(config, plan.p_s1);
    const double mu_hat = estimator::noiseless_second_moment(batch);
    hit[static_cast<std::size_t>(t)] =
        std::fabs(mu_hat - 2.0) / 2.0 < spec.epsilon ? 1 : 0;
  });
  std::int64_t hits = 0;
  for (unsigned char h : hit) hits += h;
  report.coverage = {static_cast<double>(hits) / static_cast<double>(trials)};
  return report;
}

MonteCarloReport rmse_vs_crb(const ChannelParams& params, const SignalPlan& plan,
                             const std::vector<std::int64_t>& n_grid,
                             std::int64_t trials, std::uint64_t seed,
                             sim::GenMethod method) {
  validate(params);
  validate(plan);
  require_trials(trials);
  if (n_grid.empty()) throw std::domain_error("n_grid must not be empty");

  MonteCarloReport report;
  report.trials = trials;
  report.n_grid = n_grid;
  report.seed = seed;

  std::vector<double> err2_h(static_cast<std::size_t>(trials));
  std::vector<double> err2_v(static_cast<std::size_t>(trials));
  for (std::size_t idx = 0; idx < n_grid.size(); ++idx) {
    const std::int64_t n = n_grid[idx];
    if (n < 1) throw std::domain_error("n_grid entries must be >= 1");
    const std::uint64_t base = sim::sub_seed(seed, static_cast<std::uint64_t>(idx) + 1);
    run_trials(trials, [&](std::int64_t t) {
      sim::CampaignConfig config{params, plan, n, sim::sub_seed(base, static_cast<std::uint64_t>(t) + 1),
                                 method};
      const sim::Campaign campaign = sim::generate_campaign(config);
      const estimator::PointEstimate est = estimator::point_estimates(
          campaign.batch1, campaign.batch2, plan);
      const double eh = est.sigma_h2_hat - params.sigma_h2;
      const double ev = est.sigma_v2_hat - params.sigma_v2;
      err2_h[static_cast<std::size_t>(t)] = eh * eh;
      err2_v[static_cast<std::size_t>(t)] = ev * ev;
    });
    double sum_h = 0.0, sum_v = 0.0;
    for (std::int64_t t = 0; t < trials; ++t) {
      sum_h += err2_h[static_cast<std::size_t>(t)];
      sum_v += err2_v[static_cast<std::size_t>(t)];
    }
    const double m = static_cast<double>(trials);
    report.rmse_h.push_back(std::sqrt(sum_h / m));
    report.rmse_v.push_back(std::sqrt(sum_v / m));
    const estimator::CrbReport crb = estimator::fisher_information(params, plan, n);
    report.crb_h.push_back(crb.crb_h);
    report.crb_v.push_back(crb.crb_v);
  }
  return report;
}

namespace {

double endpoint_ratio_db(const interval::ConfidenceInterval& ci) {
  if (!(ci.lower > 0.0) || !(ci.upper > 0.0)) return kNan;
  return 20.0 * std::log10(ci.upper / ci.lower);
}

}  // namespace

RatioCurveTable ratio_curves(RatioMode mode, double delta,
                             const std::vector<std::int64_t>& n_grid,
                             const ChannelParams& params, const SignalPlan& plan,
                             std::uint64_t seed, sim::GenMethod method) {
  if (!(delta > 0.0 && delta < 1.0))
    throw std::domain_error("delta must lie in (0, 1)");
  if (n_grid.empty()) throw std::domain_error("n_grid must not be empty");
  validate(params);
  validate(plan);

  RatioCurveTable table;
  table.mode = mode;
  table.delta = delta;
  table.seed = seed;
  table.rows.reserve(n_grid.size());

  for (std::size_t idx = 0; idx < n_grid.size(); ++idx) {
    const std::int64_t n = n_grid[idx];
    RatioCurveRow row;
    row.n = n;
    if (mode == RatioMode::noiseless) {
      row.eps = planner::eps_for_n(n, delta);
      row.x1 = kNan;
      row.x2 = kNan;
      row.ratio_db = 20.0 * std::log10((1.0 + row.eps) / (1.0 - row.eps));
      table.rows.push_back(row);
      continue;
    }
    row.eps = planner::eps_for_n_noisy(n, delta);
    sim::CampaignConfig config{params, plan, n, sim::sub_seed(seed, static_cast<std::uint64_t>(idx) + 1),
                               method};
    const sim::Campaign campaign = sim::generate_campaign(config);
    row.x1 = estimator::half_mean_power(campaign.batch1);
    row.x2 = estimator::half_mean_power(campaign.batch2);
    const AccuracySpec spec{row.eps, delta};
    if (mode == RatioMode::snr) {
      try {
        row.ratio_db = endpoint_ratio_db(
            interval::snr_interval_general(row.x1, row.x2, plan, spec));
      } catch (const SnrUndefinedError&) {
        row.ratio_db = kNan;
      }
    } else {
      const interval::JointIntervals joint =
          interval::noisy_joint_intervals(row.x1, row.x2, plan, spec);
      row.ratio_db =
          endpoint_ratio_db(mode == RatioMode::noisy_h ? joint.i_h : joint.i_v);
    }
    table.rows.push_back(row);
  }
  return table;
}

TightnessTable tightness_table(const std::vector<double>& delta_grid, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0))
    throw std::domain_error("epsilon must lie in (0, 1)");
  if (delta_grid.empty()) throw std::domain_error("delta_grid must not be empty");
  TightnessTable table;
  table.epsilon = epsilon;
  table.rows.reserve(delta_grid.size());
  for (double delta : delta_grid) {
    const AccuracySpec spec{epsilon, delta};
    TightnessRow row;
    row.delta = delta;
    row.ratio = planner::tightness_ratio(delta);
    row.apriori_n = planner::apriori_noiseless(spec);
    row.min_n = planner::min_n_noiseless(spec);
    row.apriori_over_min =
        static_cast<double>(row.apriori_n) / static_cast<double>(row.min_n);
    table.rows.push_back(row);
  }
  return table;
}

namespace {

std::string format_double(double v) {
  if (std::isnan(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void append_optional(std::string& line, const std::vector<double>& column,
                     std::size_t idx) {
  line += ',';
  if (idx < column.size()) line += format_double(column[idx]);
}

}  // namespace

std::string to_csv(const MonteCarloReport& report) {
  std::string out = "n,coverage,coverage_h,coverage_v,rmse_h,rmse_v,crb_h,crb_v\n";
  for (std::size_t i = 0; i < report.n_grid.size(); ++i) {
    std::string line = std::to_string(report.n_grid[i]);
    append_optional(line, report.coverage, i);
    append_optional(line, report.coverage_h, i);
    append_optional(line, report.coverage_v, i);
    append_optional(line, report.rmse_h, i);
    append_optional(line, report.rmse_v, i);
    append_optional(line, report.crb_h, i);
    append_optional(line, report.crb_v, i);
    out += line;
    out += '\n';
  }
  return out;
}

std::string to_csv(const RatioCurveTable& table) {
  std::string out = "n,eps,x1,x2,ratio_db\n";
  for (const RatioCurveRow& row : table.rows) {
    out += std::to_string(row.n);
    out += ',';
    out += format_double(row.eps);
    out += ',';
    out += format_double(row.x1);
    out += ',';
    out += format_double(row.x2);
    out += ',';
    out += format_double(row.ratio_db);
    out += '\n';
  }
  return out;
}

std::string to_csv(const TightnessTable& table) {
  std::string out = "delta,tightness_ratio,apriori_n,min_n,apriori_over_min\n";
  for (const TightnessRow& row : table.rows) {
    out += format_double(row.delta);
    out += ',';
    out += format_double(row.ratio);
    out += ',';
    out += std::to_string(row.apriori_n);
    out += ',';
    out += std::to_string(row.min_n);
    out += ',';
    out += format_double(row.apriori_over_min);
    out += '\n';
  }
  return out;
}

namespace {

nlohmann::ordered_json json_number_array(const std::vector<double>& values) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (double v : values) {
    if (std::isnan(v)) {
      arr.push_back(nullptr);
    } else {
      arr.push_back(v);
    }
  }
  return arr;
}

}  // namespace

nlohmann::ordered_json to_json(const MonteCarloReport& report) {
  nlohmann::ordered_json j;
  j["trials"] = report.trials;
  j["seed"] = report.seed;
  j["n_grid"] = report.n_grid;
  if (!report.coverage.empty()) j["coverage"] = json_number_array(report.coverage);
  if (!report.coverage_h.empty()) j["coverage_h"] = json_number_array(report.coverage_h);
  if (!report.coverage_v.empty()) j["coverage_v"] = json_number_array(report.coverage_v);
  if (!report.rmse_h.empty()) j["rmse_h"] = json_number_array(report.rmse_h);
  if (!report.rmse_v.empty()) j["rmse_v"] = json_number_array(report.rmse_v);
  if (!report.crb_h.empty()) j["crb_h"] = json_number_array(report.crb_h);
  if (!report.crb_v.empty()) j["crb_v"] = json_number_array(report.crb_v);
  return j;
}

nlohmann::ordered_json to_json(const RatioCurveTable& table) {
  nlohmann::ordered_json j;
  j["mode"] = to_string(table.mode);
  j["delta"] = table.delta;
  j["seed"] = table.seed;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const RatioCurveRow& row : table.rows) {
    nlohmann::ordered_json r;
    r["n"] = row.n;
    r["eps"] = row.eps;
    r["x1"] = std::isnan(row.x1) ? nlohmann::ordered_json(nullptr)
                                 : nlohmann::ordered_json(row.x1);
    r["x2"] = std::isnan(row.x2) ? nlohmann::ordered_json(nullptr)
                                 : nlohmann::ordered_json(row.x2);
    r["ratio_db"] = std::isnan(row.ratio_db) ? nlohmann::ordered_json(nullptr)
                                             : nlohmann::ordered_json(row.ratio_db);
    rows.push_back(r);
  }
  j["rows"] = rows;
  return j;
}

nlohmann::ordered_json to_json(const TightnessTable& table) {
  nlohmann::ordered_json j;
  j["epsilon"] = table.epsilon;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const TightnessRow& row : table.rows) {
    nlohmann::ordered_json r;
    r["delta"] = row.delta;
    r["tightness_ratio"] = row.ratio;
    r["apriori_n"] = row.apriori_n;
    r["min_n"] = row.min_n;
    r["apriori_over_min"] = row.apriori_over_min;
    rows.push_back(r);
  }
  j["rows"] = rows;
  return j;
}

const char* to_string(RatioMode mode) {
  switch (mode) {
    case RatioMode::noiseless: return "noiseless";
    case RatioMode::noisy_h: return "noisy-H";
    case RatioMode::noisy_v: return "noisy-V";
    case RatioMode::snr: return "snr";
  }
  throw std::logic_error("unknown ratio mode");
}

RatioMode ratio_mode_from_string(const std::string& name) {
  if (name == "noiseless") return RatioMode::noiseless;
  if (name == "noisy-H" || name == "noisy-h") return RatioMode::noisy_h;
  if (name == "noisy-V" || name == "noisy-v") return RatioMode::noisy_v;
  if (name == "snr") return RatioMode::snr;
  throw std::domain_error("unknown ratio mode: " + name);
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace raystat::experiments
