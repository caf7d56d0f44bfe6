// Command-line front end: thin adapters over the library modules.
// Subcommands: plan, estimate, interval, simulate, experiment.
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "raystat/channel_sim.hpp"
#include "raystat/estimator.hpp"
#include "raystat/experiments.hpp"
#include "raystat/interval.hpp"
#include "raystat/planner.hpp"
#include "raystat/types.hpp"

using nlohmann::ordered_json;
using namespace raystat;

namespace {

ordered_json json_double(double v) {
  // JSON has no inf/nan; emit null (nlohmann would anyway, this is explicit)
  if (!std::isfinite(v)) return nullptr;
  return v;
}

ordered_json wrap(const std::string& command, ordered_json config, ordered_json seed,
                  ordered_json results) {
  ordered_json doc;
  doc["schema"] = 1;
  doc["command"] = command;
  doc["config"] = std::move(config);
  doc["seed"] = std::move(seed);
  doc["results"] = std::move(results);
  return doc;
}

void write_single(const std::string& out, const std::string& format,
                  const ordered_json& doc, const std::string& csv) {
  if (out.empty()) return;
  if (format == "csv") {
    experiments::write_text_file(out, csv);
  } else {
    experiments::write_text_file(out, doc.dump(2) + "\n");
  }
  std::printf("wrote %s\n", out.c_str());
}

// Experiment reports always land in both formats.
void write_report_pair(const std::string& prefix, const ordered_json& doc,
                       const std::string& csv) {
  experiments::write_text_file(prefix + ".json", doc.dump(2) + "\n");
  experiments::write_text_file(prefix + ".csv", csv);
  std::printf("wrote %s.json\nwrote %s.csv\n", prefix.c_str(), prefix.c_str());
}

sim::GenMethod parse_method(const std::string& name) {
  if (name == "complex-gaussian") return sim::GenMethod::complex_gaussian;
  if (name == "exponential-shortcut") return sim::GenMethod::exponential_shortcut;
  throw std::domain_error("unknown method: " + name +
                          " (expected complex-gaussian or exponential-shortcut)");
}

std::string format_csv_value(double v) {
  if (std::isnan(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// ---------------------------------------------------------------- plan ----

struct PlanArgs {
  double eps = 0.0;
  double delta = 0.0;
  std::string mode = "noiseless";
  bool exact = false;
  std::string out;
  std::string format = "json";
};

int run_plan(const PlanArgs& args) {
  const AccuracySpec spec{args.eps, args.delta};
  std::int64_t apriori = 0;
  std::int64_t min_n = 0;
  double coverage_at_min = 0.0;
  if (args.mode == "noiseless") {
    apriori = planner::apriori_noiseless(spec);
    if (args.exact) {
      min_n = planner::min_n_noiseless(spec);
      coverage_at_min = planner::exact_coverage(min_n, spec.epsilon);
    }
  } else if (args.mode == "noisy") {
    apriori = planner::apriori_noisy(spec);
    if (args.exact) {
      min_n = planner::min_n_noisy(spec);
      coverage_at_min = planner::exact_coverage(min_n, spec.epsilon);
    }
  } else if (args.mode == "snr") {
    apriori = planner::apriori_snr(spec);
    if (args.exact) {
      min_n = planner::min_n_snr(spec);
      coverage_at_min =
          planner::exact_coverage(min_n, spec.epsilon / (2.0 + spec.epsilon));
    }
  } else {
    throw std::domain_error("unknown mode: " + args.mode);
  }

  std::printf("a priori sample size (%s): %" PRId64 "\n", args.mode.c_str(), apriori);
  if (args.exact)
    std::printf("exact minimal sample size: %" PRId64 "  (coverage %.10f)\n", min_n,
                coverage_at_min);

  ordered_json config{{"eps", args.eps},
                      {"delta", args.delta},
                      {"mode", args.mode},
                      {"exact", args.exact}};
  ordered_json results;
  results["apriori_n"] = apriori;
  if (args.exact) {
    results["min_n"] = min_n;
    results["exact_coverage"] = coverage_at_min;
  }
  std::string csv = "mode,eps,delta,apriori_n,min_n,exact_coverage\n";
  csv += args.mode + ',' + format_csv_value(args.eps) + ',' +
         format_csv_value(args.delta) + ',' + std::to_string(apriori) + ',';
  if (args.exact)
    csv += std::to_string(min_n) + ',' + format_csv_value(coverage_at_min);
  else
    csv += ",";
  csv += '\n';
  write_single(args.out, args.format, wrap("plan", config, nullptr, results), csv);
  return 0;
}

// ------------------------------------------------------------ estimate ----

struct EstimateArgs {
  std::string batch1, batch2, batch;
  double ps1 = 1.0, ps2 = 0.0;
  bool ps1_set = false, ps2_set = false;
  bool noiseless = false;
  std::string out;
  std::string format = "json";
};

int run_estimate_noiseless(const EstimateArgs& args) {
  const sim::BatchFile file = sim::read_batch_csv(args.batch);
  const double mu_hat = estimator::noiseless_second_moment(file.batch);
  const double sigma_h2 = estimator::noiseless_sigma_h2(file.batch);
  std::printf("mu_hat: %.10g\nsigma_h2_hat: %.10g\n", mu_hat, sigma_h2);

  ordered_json config{{"batch", args.batch}, {"noiseless", true}};
  ordered_json results;
  results["n"] = file.batch.n();
  results["power"] = file.batch.power;
  results["mu_hat"] = mu_hat;
  results["sigma_h2_hat"] = sigma_h2;
  std::string csv = "n,power,mu_hat,sigma_h2_hat\n" + std::to_string(file.batch.n()) +
                    ',' + format_csv_value(file.batch.power) + ',' +
                    format_csv_value(mu_hat) + ',' + format_csv_value(sigma_h2) + '\n';
  write_single(args.out, args.format, wrap("estimate", config, nullptr, results), csv);
  return 0;
}

int run_estimate(const EstimateArgs& args) {
  if (args.noiseless) return run_estimate_noiseless(args);

  const sim::BatchFile f1 = sim::read_batch_csv(args.batch1);
  const sim::BatchFile f2 = sim::read_batch_csv(args.batch2);
  const SignalPlan plan{args.ps1_set ? args.ps1 : f1.batch.power,
                        args.ps2_set ? args.ps2 : f2.batch.power};
  const estimator::PointEstimate est =
      estimator::point_estimates(f1.batch, f2.batch, plan);

  ordered_json results;
  ordered_json warnings = ordered_json::array();
  results["n"] = f1.batch.n();
  results["sigma_h2_hat"] = est.sigma_h2_hat;
  results["sigma_v2_hat"] = est.sigma_v2_hat;
  results["negative"] = est.negative;
  if (est.negative)
    warnings.push_back("a variance estimate is negative; reported unclipped");

  std::printf("sigma_h2_hat: %.10g\nsigma_v2_hat: %.10g\n", est.sigma_h2_hat,
              est.sigma_v2_hat);

  // SNR, dB figures, and the bound at the estimated parameters exist only
  // when the estimates form a valid parameter point.
  if (est.sigma_v2_hat > 0.0 && est.sigma_h2_hat > 0.0) {
    const double snr_hat = estimator::snr_point_estimate(f1.batch, f2.batch, plan);
    const ChannelParams at_estimate{est.sigma_h2_hat, est.sigma_v2_hat};
    const estimator::DbReport db = estimator::db_conversions(plan.p_s1, at_estimate);
    const estimator::CrbReport crb =
        estimator::fisher_information(at_estimate, plan, f1.batch.n());
    results["snr_hat"] = snr_hat;
    results["pl_db"] = json_double(db.pl_db);
    results["snr_db"] = json_double(db.snr_db);
    results["crb_h"] = crb.crb_h;
    results["crb_v"] = crb.crb_v;
    std::printf("snr_hat: %.10g  (%.4f dB)\npl_db: %.4f\ncrb_h: %.6g\ncrb_v: %.6g\n",
                snr_hat, db.snr_db, db.pl_db, crb.crb_h, crb.crb_v);
  } else {
    results["snr_hat"] = nullptr;
    results["pl_db"] = nullptr;
    results["snr_db"] = nullptr;
    results["crb_h"] = nullptr;
    results["crb_v"] = nullptr;
    warnings.push_back("estimates outside the parameter space; SNR, dB and "
                       "bound figures unavailable");
    std::printf("snr_hat: undefined (nonpositive variance estimate)\n");
  }
  results["warnings"] = warnings;

  ordered_json config{{"batch1", args.batch1},
                      {"batch2", args.batch2},
                      {"ps1", plan.p_s1},
                      {"ps2", plan.p_s2}};
  std::string csv = "n,sigma_h2_hat,sigma_v2_hat,snr_hat,crb_h,crb_v\n";
  csv += std::to_string(f1.batch.n()) + ',' + format_csv_value(est.sigma_h2_hat) +
         ',' + format_csv_value(est.sigma_v2_hat) + ',';
  if (results["snr_hat"].is_number()) {
    csv += format_csv_value(results["snr_hat"].get<double>());
    csv += ',';
    csv += format_csv_value(results["crb_h"].get<double>());
    csv += ',';
    csv += format_csv_value(results["crb_v"].get<double>());
  } else {
    csv += ",,";
  }
  csv += '\n';
  write_single(args.out, args.format, wrap("estimate", config, nullptr, results), csv);
  return 0;
}

// ------------------------------------------------------------ interval ----

struct IntervalArgs {
  double eps = 0.0, delta = 0.0;
  double x1 = 0.0, x2 = 0.0, mu_hat = 0.0;
  bool x_set = false, mu_set = false;
  std::string batch1, batch2;
  double ps1 = 1.0, ps2 = 0.0;
  std::int64_t n = 0;
  bool noiseless = false;
  bool clamp = false;
  std::string out;
  std::string format = "json";
};

ordered_json interval_json(const interval::ConfidenceInterval& ci) {
  return ordered_json{{"lower", ci.lower}, {"upper", ci.upper},
                      {"confidence", ci.confidence}};
}

int run_interval(IntervalArgs args) {
  const AccuracySpec spec{args.eps, args.delta};
  ordered_json config{{"eps", args.eps}, {"delta", args.delta}};
  std::string csv = "target,lower,upper,confidence\n";

  if (args.noiseless) {
    if (!args.mu_set)
      throw std::domain_error("--noiseless interval needs --mu-hat");
    interval::ConfidenceInterval ci = interval::noiseless_interval(args.mu_hat, spec);
    if (args.clamp) ci = interval::clamp_nonnegative(ci);
    const std::int64_t threshold = planner::min_n_noiseless(spec);
    const bool guarantee = args.n >= threshold;
    std::printf("mu interval: [%.10g, %.10g]  confidence %.6g  guarantee: %s\n",
                ci.lower, ci.upper, ci.confidence, guarantee ? "true" : "false");
    if (!guarantee)
      std::printf("warning: n=%" PRId64 " is below the minimal sample size %" PRId64 "\n",
                  args.n, threshold);
    config["noiseless"] = true;
    config["mu_hat"] = args.mu_hat;
    config["n"] = args.n;
    ordered_json results;
    results["mu"] = interval_json(ci);
    results["min_n"] = threshold;
    results["guarantee"] = guarantee;
    csv += "mu," + format_csv_value(ci.lower) + ',' + format_csv_value(ci.upper) +
           ',' + format_csv_value(ci.confidence) + '\n';
    write_single(args.out, args.format, wrap("interval", config, nullptr, results), csv);
    return 0;
  }

  double x1 = args.x1, x2 = args.x2;
  std::int64_t n = args.n;
  SignalPlan plan{args.ps1, args.ps2};
  if (!args.batch1.empty() || !args.batch2.empty()) {
    if (args.batch1.empty() || args.batch2.empty())
      throw std::domain_error("provide both --batch1 and --batch2");
    const sim::BatchFile f1 = sim::read_batch_csv(args.batch1);
    const sim::BatchFile f2 = sim::read_batch_csv(args.batch2);
    if (f1.batch.n() != f2.batch.n())
      throw std::invalid_argument("batches must have equal sample counts");
    x1 = estimator::half_mean_power(f1.batch);
    x2 = estimator::half_mean_power(f2.batch);
    n = f1.batch.n();
    plan = SignalPlan{f1.batch.power, f2.batch.power};
    config["batch1"] = args.batch1;
    config["batch2"] = args.batch2;
  } else {
    if (!args.x_set)
      throw std::domain_error("provide --x1 and --x2 (or batch files)");
    if (n < 1) throw std::domain_error("provide --n >= 1 with summary stats");
    config["x1"] = x1;
    config["x2"] = x2;
    config["n"] = n;
  }
  config["ps1"] = plan.p_s1;
  config["ps2"] = plan.p_s2;

  interval::JointIntervals joint = interval::noisy_joint_intervals(x1, x2, plan, spec);
  interval::ConfidenceInterval snr = interval::snr_interval_general(x1, x2, plan, spec);
  if (args.clamp) {
    joint.i_h = interval::clamp_nonnegative(joint.i_h);
    joint.i_v = interval::clamp_nonnegative(joint.i_v);
    snr = interval::clamp_nonnegative(snr);
  }
  const std::int64_t threshold = planner::min_n_noisy(spec);
  const bool guarantee = n >= threshold;

  std::printf("sigma_h2 interval: [%.10g, %.10g]\n", joint.i_h.lower, joint.i_h.upper);
  std::printf("sigma_v2 interval: [%.10g, %.10g]\n", joint.i_v.lower, joint.i_v.upper);
  std::printf("snr interval:      [%.10g, %.10g]\n", snr.lower, snr.upper);
  std::printf("confidence %.6g  guarantee: %s\n", joint.i_h.confidence,
              guarantee ? "true" : "false");
  if (!guarantee)
    std::printf("warning: n=%" PRId64 " is below the minimal sample size %" PRId64 "\n",
                n, threshold);

  ordered_json results;
  results["i_h"] = interval_json(joint.i_h);
  results["i_v"] = interval_json(joint.i_v);
  results["snr"] = interval_json(snr);
  results["min_n_noisy"] = threshold;
  results["guarantee"] = guarantee;
  csv += "sigma_h2," + format_csv_value(joint.i_h.lower) + ',' +
         format_csv_value(joint.i_h.upper) + ',' +
         format_csv_value(joint.i_h.confidence) + '\n';
  csv += "sigma_v2," + format_csv_value(joint.i_v.lower) + ',' +
         format_csv_value(joint.i_v.upper) + ',' +
         format_csv_value(joint.i_v.confidence) + '\n';
  csv += "snr," + format_csv_value(snr.lower) + ',' + format_csv_value(snr.upper) +
         ',' + format_csv_value(snr.confidence) + '\n';
  write_single(args.out, args.format, wrap("interval", config, nullptr, results), csv);
  return 0;
}

// ------------------------------------------------------------ simulate ----

struct SimulateArgs {
  double sigma_h2 = 1.0, sigma_v2 = 0.0;
  double ps1 = 1.0, ps2 = 0.0;
  std::int64_t n = 0;
  std::uint64_t seed = 0;
  std::string method = "complex-gaussian";
  std::string out;
};

int run_simulate(const SimulateArgs& args) {
  sim::CampaignConfig config;
  config.params = ChannelParams{args.sigma_h2, args.sigma_v2};
  config.plan = SignalPlan{args.ps1, args.ps2};
  config.n = args.n;
  config.seed = args.seed;
  config.method = parse_method(args.method);
  const sim::Campaign campaign = sim::generate_campaign(config);
  const std::string p1 = args.out + ".batch1.csv";
  const std::string p2 = args.out + ".batch2.csv";
  sim::write_batch_csv(p1, campaign.batch1, args.seed);
  sim::write_batch_csv(p2, campaign.batch2, args.seed);
  std::printf("wrote %s\nwrote %s\n", p1.c_str(), p2.c_str());
  return 0;
}

// ---------------------------------------------------------- experiment ----

struct ExperimentArgs {
  double eps = 0.1, delta = 0.05;
  double sigma_h2 = 1.0, sigma_v2 = 0.01;
  double snr_db = 0.0;
  bool snr_db_set = false;
  double ps1 = 1.0, ps2 = 0.0;
  std::int64_t n = 0;
  std::int64_t m = 500;
  std::uint64_t seed = 0;
  std::string method = "complex-gaussian";
  std::string mode = "noiseless";
  std::vector<std::int64_t> n_grid;
  std::vector<double> delta_grid;
  std::string out;
};

ChannelParams experiment_params(const ExperimentArgs& args) {
  if (args.snr_db_set) {
    // SNR(dB) = 10 log10(ps1) + 10 log10(sigma_h2/sigma_v2)
    const double sigma_v2 =
        args.ps1 * args.sigma_h2 * std::pow(10.0, -args.snr_db / 10.0);
    return ChannelParams{args.sigma_h2, sigma_v2};
  }
  return ChannelParams{args.sigma_h2, args.sigma_v2};
}

ordered_json experiment_config(const ExperimentArgs& args, const ChannelParams& params) {
  return ordered_json{{"eps", args.eps},         {"delta", args.delta},
                      {"sigma_h2", params.sigma_h2}, {"sigma_v2", params.sigma_v2},
                      {"ps1", args.ps1},         {"ps2", args.ps2},
                      {"m", args.m},             {"method", args.method}};
}

int run_experiment_coverage(const ExperimentArgs& args) {
  const ChannelParams params = experiment_params(args);
  const SignalPlan plan{args.ps1, args.ps2};
  const experiments::MonteCarloReport report = experiments::coverage_experiment(
      params, plan, {args.eps, args.delta}, args.n, args.m, args.seed,
      parse_method(args.method));
  std::printf("joint coverage: %.6f  (h: %.6f, v: %.6f)\n", report.coverage[0],
              report.coverage_h[0], report.coverage_v[0]);
  ordered_json config = experiment_config(args, params);
  config["n"] = args.n;
  write_report_pair(args.out,
                    wrap("experiment coverage", config, args.seed,
                         experiments::to_json(report)),
                    experiments::to_csv(report));
  return 0;
}

int run_experiment_rmse(const ExperimentArgs& args) {
  const ChannelParams params = experiment_params(args);
  const SignalPlan plan{args.ps1, args.ps2};
  const experiments::MonteCarloReport report = experiments::rmse_vs_crb(
      params, plan, args.n_grid, args.m, args.seed, parse_method(args.method));
  for (std::size_t i = 0; i < report.n_grid.size(); ++i)
    std::printf("n=%" PRId64 "  rmse_h=%.6g crb_h=%.6g  rmse_v=%.6g crb_v=%.6g\n",
                report.n_grid[i], report.rmse_h[i], report.crb_h[i], report.rmse_v[i],
                report.crb_v[i]);
  ordered_json config = experiment_config(args, params);
  config["n_grid"] = args.n_grid;
  write_report_pair(args.out,
                    wrap("experiment rmse-crb", config, args.seed,
                         experiments::to_json(report)),
                    experiments::to_csv(report));
  return 0;
}

int run_experiment_ratio(const ExperimentArgs& args) {
  const ChannelParams params = experiment_params(args);
  const SignalPlan plan{args.ps1, args.ps2};
  const experiments::RatioCurveTable table = experiments::ratio_curves(
      experiments::ratio_mode_from_string(args.mode), args.delta, args.n_grid, params,
      plan, args.seed, parse_method(args.method));
  for (const experiments::RatioCurveRow& row : table.rows)
    std::printf("n=%" PRId64 "  eps=%.6g  ratio_db=%.6g\n", row.n, row.eps,
                row.ratio_db);
  ordered_json config = experiment_config(args, params);
  config["mode"] = args.mode;
  config["n_grid"] = args.n_grid;
  write_report_pair(args.out,
                    wrap("experiment ratio-curves", config, args.seed,
                         experiments::to_json(table)),
                    experiments::to_csv(table));
  return 0;
}

int run_experiment_tightness(const ExperimentArgs& args) {
  const experiments::TightnessTable table =
      experiments::tightness_table(args.delta_grid, args.eps);
  for (const experiments::TightnessRow& row : table.rows)
    std::printf("delta=%.3g  ratio=%.6f  apriori=%" PRId64 "  min_n=%" PRId64 "\n",
                row.delta, row.ratio, row.apriori_n, row.min_n);
  ordered_json config{{"eps", args.eps}, {"delta_grid", args.delta_grid}};
  write_report_pair(args.out,
                    wrap("experiment tightness", config, args.seed,
                         experiments::to_json(table)),
                    experiments::to_csv(table));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Statistical planning, estimation and verification for flat "
               "Rayleigh-fading power measurements"};
  app.require_subcommand(1);

  // ---- plan
  PlanArgs plan_args;
  CLI::App* plan = app.add_subcommand("plan", "Sample-size planning");
  plan->add_option("--eps", plan_args.eps, "margin of relative error, in (0,1)")
      ->required();
  plan->add_option("--delta", plan_args.delta, "confidence gap, in (0,1)")->required();
  plan->add_option("--mode", plan_args.mode, "noiseless | noisy | snr")
      ->check(CLI::IsMember({"noiseless", "noisy", "snr"}));
  plan->add_flag("--exact", plan_args.exact, "also search the exact minimal N");
  plan->add_option("--out", plan_args.out, "output file");
  plan->add_option("--format", plan_args.format, "json | csv")
      ->check(CLI::IsMember({"json", "csv"}));

  // ---- estimate
  EstimateArgs est_args;
  CLI::App* estimate = app.add_subcommand("estimate", "Point estimation from batches");
  estimate->add_option("--batch1", est_args.batch1, "batch CSV at power ps1");
  estimate->add_option("--batch2", est_args.batch2, "batch CSV at power ps2");
  estimate->add_option("--batch", est_args.batch, "single batch CSV (noiseless)");
  estimate->add_flag("--noiseless", est_args.noiseless, "single-power estimate");
  auto* e_ps1 = estimate->add_option("--ps1", est_args.ps1,
                                     "override power of batch 1 (default: from file)");
  auto* e_ps2 = estimate->add_option("--ps2", est_args.ps2,
                                     "override power of batch 2 (default: from file)");
  estimate->add_option("--out", est_args.out, "output file");
  estimate->add_option("--format", est_args.format, "json | csv")
      ->check(CLI::IsMember({"json", "csv"}));
  estimate->callback([&] {
    est_args.ps1_set = e_ps1->count() > 0;
    est_args.ps2_set = e_ps2->count() > 0;
    if (est_args.noiseless) {
      if (est_args.batch.empty())
        throw CLI::ValidationError("--noiseless needs --batch");
    } else if (est_args.batch1.empty() || est_args.batch2.empty()) {
      throw CLI::ValidationError("estimate needs --batch1 and --batch2");
    }
  });

  // ---- interval
  IntervalArgs int_args;
  CLI::App* interval_cmd =
      app.add_subcommand("interval", "Confidence intervals from stats or batches");
  interval_cmd->add_option("--eps", int_args.eps, "margin of relative error")
      ->required();
  interval_cmd->add_option("--delta", int_args.delta, "confidence gap")->required();
  auto* i_x1 = interval_cmd->add_option("--x1", int_args.x1, "half-mean power at ps1");
  auto* i_x2 = interval_cmd->add_option("--x2", int_args.x2, "half-mean power at ps2");
  auto* i_mu =
      interval_cmd->add_option("--mu-hat", int_args.mu_hat, "second-moment estimate");
  interval_cmd->callback([&, i_x1, i_x2, i_mu] {
    int_args.x_set = i_x1->count() > 0 && i_x2->count() > 0;
    int_args.mu_set = i_mu->count() > 0;
  });
  interval_cmd->add_option("--batch1", int_args.batch1, "batch CSV at power ps1");
  interval_cmd->add_option("--batch2", int_args.batch2, "batch CSV at power ps2");
  interval_cmd->add_option("--ps1", int_args.ps1, "transmit power 1");
  interval_cmd->add_option("--ps2", int_args.ps2, "transmit power 2");
  interval_cmd->add_option("--n", int_args.n, "sample count behind the stats");
  interval_cmd->add_flag("--noiseless", int_args.noiseless,
                         "single-power second-moment interval");
  interval_cmd->add_flag("--clamp", int_args.clamp, "clamp negative endpoints to 0");
  interval_cmd->add_option("--out", int_args.out, "output file");
  interval_cmd->add_option("--format", int_args.format, "json | csv")
      ->check(CLI::IsMember({"json", "csv"}));

  // ---- simulate
  SimulateArgs sim_args;
  CLI::App* simulate = app.add_subcommand("simulate", "Generate measurement batches");
  simulate->add_option("--sigma-h2", sim_args.sigma_h2, "channel variance (default 1)");
  simulate->add_option("--sigma-v2", sim_args.sigma_v2, "noise variance (default 0)");
  simulate->add_option("--ps1", sim_args.ps1, "transmit power 1 (default 1)");
  simulate->add_option("--ps2", sim_args.ps2, "transmit power 2 (default 0)");
  simulate->add_option("--n", sim_args.n, "samples per batch")->required();
  simulate->add_option("--seed", sim_args.seed, "RNG seed")->required();
  simulate->add_option("--method", sim_args.method,
                       "complex-gaussian | exponential-shortcut");
  simulate->add_option("--out", sim_args.out, "output prefix")->required();

  // ---- experiment
  ExperimentArgs exp_args;
  CLI::App* experiment = app.add_subcommand("experiment", "Monte Carlo experiments");
  experiment->require_subcommand(1);

  const auto add_common = [&](CLI::App* sub, bool needs_params) {
    sub->add_option("--seed", exp_args.seed, "RNG seed (required)")->required();
    sub->add_option("--out", exp_args.out, "output prefix (required)")->required();
    if (needs_params) {
      sub->add_option("--sigma-h2", exp_args.sigma_h2, "channel variance (default 1)");
      auto* sv = sub->add_option("--sigma-v2", exp_args.sigma_v2,
                                 "noise variance (default 0.01)");
      auto* sdb = sub->add_option("--snr-db", exp_args.snr_db,
                                  "set noise variance from an SNR in dB");
      sv->excludes(sdb);
      sub->add_option("--ps1", exp_args.ps1, "transmit power 1 (default 1)");
      sub->add_option("--ps2", exp_args.ps2, "transmit power 2 (default 0)");
      sub->add_option("--method", exp_args.method,
                      "complex-gaussian | exponential-shortcut");
      sub->callback([&, sdb] { exp_args.snr_db_set = sdb->count() > 0; });
    }
  };

  CLI::App* exp_cov = experiment->add_subcommand("coverage", "joint interval coverage");
  add_common(exp_cov, true);
  exp_cov->add_option("--eps", exp_args.eps, "margin of relative error")->required();
  exp_cov->add_option("--delta", exp_args.delta, "confidence gap")->required();
  exp_cov->add_option("--n", exp_args.n, "samples per batch")->required();
  exp_cov->add_option("--m", exp_args.m, "Monte Carlo trials (default 500)");

  CLI::App* exp_rmse = experiment->add_subcommand("rmse-crb", "estimator RMSE vs bound");
  add_common(exp_rmse, true);
  exp_rmse
      ->add_option("--n-grid", exp_args.n_grid,
                   "comma-separated sample sizes (default 100..10000)")
      ->delimiter(',');
  exp_rmse->add_option("--m", exp_args.m, "Monte Carlo trials (default 500)");

  CLI::App* exp_ratio =
      experiment->add_subcommand("ratio-curves", "interval endpoint ratios vs N");
  add_common(exp_ratio, true);
  exp_ratio->add_option("--mode", exp_args.mode, "noiseless | noisy-H | noisy-V | snr");
  exp_ratio->add_option("--delta", exp_args.delta, "confidence gap (default 0.01)");
  exp_ratio
      ->add_option("--n-grid", exp_args.n_grid,
                   "comma-separated sample sizes (default 50..10000)")
      ->delimiter(',');

  CLI::App* exp_tight = experiment->add_subcommand("tightness", "bound tightness table");
  add_common(exp_tight, false);
  exp_tight->add_option("--eps", exp_args.eps, "margin for the exact column "
                        "(default 0.05)");
  exp_tight
      ->add_option("--delta-grid", exp_args.delta_grid,
                   "comma-separated deltas (default 1e-2..1e-12)")
      ->delimiter(',');

  CLI11_PARSE(app, argc, argv);

  try {
    if (plan->parsed()) return run_plan(plan_args);
    if (estimate->parsed()) return run_estimate(est_args);
    if (interval_cmd->parsed()) return run_interval(int_args);
    if (simulate->parsed()) return run_simulate(sim_args);
    if (experiment->parsed()) {
      if (exp_cov->parsed()) return run_experiment_coverage(exp_args);
      if (exp_rmse->parsed()) {
        if (exp_args.n_grid.empty())
          exp_args.n_grid = {100, 200, 500, 1000, 2000, 5000, 10000};
        return run_experiment_rmse(exp_args);
      }
      if (exp_ratio->parsed()) {
        if (exp_args.n_grid.empty())
          exp_args.n_grid = {50, 100, 200, 500, 1000, 2000, 5000, 10000};
        if (exp_ratio->count("--delta") == 0) exp_args.delta = 0.01;
        return run_experiment_ratio(exp_args);
      }
      if (exp_tight->parsed()) {
        if (exp_args.delta_grid.empty())
          exp_args.delta_grid = {1e-2, 1e-4, 1e-6, 1e-8, 1e-10, 1e-12};
        if (exp_tight->count("--eps") == 0) exp_args.eps = 0.05;
        return run_experiment_tightness(exp_args);
      }
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 1;
}
