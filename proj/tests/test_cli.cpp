#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "raystat/channel_sim.hpp"
#include "raystat/estimator.hpp"
#include "raystat/experiments.hpp"
#include "raystat/planner.hpp"

using nlohmann::ordered_json;
using namespace raystat;

namespace {

struct CmdResult {
  int status = -1;
  std::string output;
};

CmdResult run_cli(const std::string& args) {
  const std::string cmd = std::string(RAYSTAT_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CmdResult result;
  char buf[4096];
  while (std::fgets(buf, sizeof(buf), pipe)) result.output += buf;
  const int rc = pclose(pipe);
  result.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  return result;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  std::filesystem::path path;
  TempDir() : path(std::filesystem::current_path() / "cli_test_tmp") {
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  REQUIRE(out.good());
  out << content;
}

}  // namespace

TEST_CASE("plan reports the a priori bound and the exact minimum") {
  TempDir tmp;
  const std::string out = tmp.file("plan.json");
  const CmdResult r = run_cli("plan --eps 0.05 --delta 0.01 --mode noiseless --exact --out " + out);
  CHECK(r.status == 0);
  CHECK(r.output.find("4380") != std::string::npos);
  const ordered_json doc = ordered_json::parse(slurp(out));
  CHECK(doc["schema"] == 1);
  CHECK(doc["command"] == "plan");
  CHECK(doc["seed"].is_null());
  CHECK(doc["results"]["apriori_n"] == planner::apriori_noiseless({0.05, 0.01}));
  CHECK(doc["results"]["min_n"] == 2655);
  CHECK(doc["results"]["exact_coverage"].get<double>() ==
        planner::exact_coverage(2655, 0.05));

  const CmdResult noisy = run_cli("plan --eps 0.05 --delta 0.01 --mode noisy");
  CHECK(noisy.status == 0);
  CHECK(noisy.output.find("4953") != std::string::npos);
}

TEST_CASE("plan rejects an out-of-range margin with a usage error") {
  const CmdResult r = run_cli("plan --eps 1.5 --delta 0.01");
  CHECK(r.status != 0);
  CHECK(r.output.find("epsilon must lie in (0, 1)") != std::string::npos);
}

TEST_CASE("simulate writes deterministic batch files") {
  TempDir tmp;
  const std::string a = tmp.file("a");
  const std::string b = tmp.file("b");
  const std::string flags =
      " --sigma-h2 1 --sigma-v2 0.01 --ps1 1 --ps2 0 --n 500 --seed 42 --out ";
  CHECK(run_cli("simulate" + flags + a).status == 0);
  CHECK(run_cli("simulate" + flags + b).status == 0);
  CHECK(slurp(a + ".batch1.csv") == slurp(b + ".batch1.csv"));
  CHECK(slurp(a + ".batch2.csv") == slurp(b + ".batch2.csv"));

  // files reproduce the in-process campaign exactly
  sim::CampaignConfig config;
  config.params = ChannelParams{1.0, 0.01};
  config.plan = SignalPlan{1.0, 0.0};
  config.n = 500;
  config.seed = 42;
  const sim::Campaign campaign = sim::generate_campaign(config);
  const sim::BatchFile loaded = sim::read_batch_csv(a + ".batch1.csv");
  CHECK(loaded.batch.received_power == campaign.batch1.received_power);
}

TEST_CASE("estimate mirrors the library on simulated batches") {
  TempDir tmp;
  const std::string prefix = tmp.file("c");
  REQUIRE(run_cli("simulate --sigma-v2 0.01 --n 400 --seed 9 --out " + prefix).status ==
          0);
  const std::string out = tmp.file("est.json");
  const CmdResult r = run_cli("estimate --batch1 " + prefix + ".batch1.csv --batch2 " +
                              prefix + ".batch2.csv --out " + out);
  CHECK(r.status == 0);

  const sim::BatchFile f1 = sim::read_batch_csv(prefix + ".batch1.csv");
  const sim::BatchFile f2 = sim::read_batch_csv(prefix + ".batch2.csv");
  const SignalPlan plan{1.0, 0.0};
  const estimator::PointEstimate est =
      estimator::point_estimates(f1.batch, f2.batch, plan);
  const ordered_json doc = ordered_json::parse(slurp(out));
  CHECK(doc["results"]["sigma_h2_hat"].get<double>() == est.sigma_h2_hat);
  CHECK(doc["results"]["sigma_v2_hat"].get<double>() == est.sigma_v2_hat);
  CHECK(doc["results"]["snr_hat"].get<double>() ==
        estimator::snr_point_estimate(f1.batch, f2.batch, plan));
}

TEST_CASE("estimate reproduces the 20 dB linear-solve example") {
  TempDir tmp;
  // half-mean powers 1.01 and 0.01
  write_file(tmp.file("b1.csv"), "power,n,seed\n1,1,0\n2.02\n");
  write_file(tmp.file("b2.csv"), "power,n,seed\n0,1,0\n0.02\n");
  const std::string out = tmp.file("est.json");
  const CmdResult r = run_cli("estimate --batch1 " + tmp.file("b1.csv") +
                              " --batch2 " + tmp.file("b2.csv") + " --out " + out);
  CHECK(r.status == 0);
  const ordered_json doc = ordered_json::parse(slurp(out));
  CHECK(doc["results"]["sigma_h2_hat"].get<double>() == doctest::Approx(1.0));
  CHECK(doc["results"]["sigma_v2_hat"].get<double>() == doctest::Approx(0.01));
  CHECK(doc["results"]["snr_hat"].get<double>() == doctest::Approx(100.0));
  CHECK(doc["results"]["snr_db"].get<double>() == doctest::Approx(20.0));
}

TEST_CASE("estimate supports the single-batch noiseless path") {
  TempDir tmp;
  write_file(tmp.file("b.csv"), "power,n,seed\n4,2,0\n8\n8\n");
  const std::string out = tmp.file("est.json");
  const CmdResult r = run_cli("estimate --noiseless --batch " + tmp.file("b.csv") +
                              " --out " + out);
  CHECK(r.status == 0);
  const ordered_json doc = ordered_json::parse(slurp(out));
  CHECK(doc["results"]["mu_hat"].get<double>() == doctest::Approx(8.0));
  CHECK(doc["results"]["sigma_h2_hat"].get<double>() == doctest::Approx(1.0));
}

TEST_CASE("estimate fails cleanly on malformed or empty batch files") {
  TempDir tmp;
  write_file(tmp.file("empty.csv"), "");
  const CmdResult r = run_cli("estimate --batch1 " + tmp.file("empty.csv") +
                              " --batch2 " + tmp.file("empty.csv"));
  CHECK(r.status != 0);
  write_file(tmp.file("zero.csv"), "power,n,seed\n1,0,0\n");
  const CmdResult z = run_cli("estimate --batch1 " + tmp.file("zero.csv") +
                              " --batch2 " + tmp.file("zero.csv"));
  CHECK(z.status != 0);
}

TEST_CASE("interval from summary stats matches the frozen example") {
  TempDir tmp;
  const std::string out = tmp.file("iv.json");
  const CmdResult r = run_cli(
      "interval --x1 1.01 --x2 0.01 --n 501 --ps1 1 --ps2 0 --eps 0.1 --delta 0.05 "
      "--out " + out);
  CHECK(r.status == 0);
  const ordered_json doc = ordered_json::parse(slurp(out));
  CHECK(doc["results"]["i_h"]["lower"].get<double>() ==
        doctest::Approx(0.90707070707071).epsilon(1e-12));
  CHECK(doc["results"]["i_h"]["upper"].get<double>() ==
        doctest::Approx(1.1131313131313).epsilon(1e-12));
  CHECK(doc["results"]["i_v"]["lower"].get<double>() ==
        doctest::Approx(0.0090909090909091).epsilon(1e-12));
  CHECK(doc["results"]["snr"]["lower"].get<double>() ==
        doctest::Approx(81.636363636364).epsilon(1e-12));
  CHECK(doc["results"]["snr"]["upper"].get<double>() ==
        doctest::Approx(122.44444444444).epsilon(1e-12));
  CHECK(doc["results"]["guarantee"].get<bool>() == true);  // min_n_noisy = 501

  const CmdResult below = run_cli(
      "interval --x1 1.01 --x2 0.01 --n 500 --ps1 1 --ps2 0 --eps 0.1 --delta 0.05 "
      "--out " + out);
  CHECK(below.status == 0);
  const ordered_json doc2 = ordered_json::parse(slurp(out));
  CHECK(doc2["results"]["guarantee"].get<bool>() == false);
  CHECK(below.output.find("warning") != std::string::npos);
}

TEST_CASE("interval propagates the SNR side-condition error") {
  const CmdResult r = run_cli(
      "interval --x1 2.02 --x2 1.02 --n 500 --ps1 2 --ps2 1 --eps 0.1 --delta 0.05");
  CHECK(r.status != 0);
  CHECK(r.output.find("side condition") != std::string::npos);
}

TEST_CASE("noiseless interval path") {
  TempDir tmp;
  const std::string out = tmp.file("nv.json");
  const CmdResult r = run_cli(
      "interval --noiseless --mu-hat 1 --n 384 --eps 0.1 --delta 0.05 --out " + out);
  CHECK(r.status == 0);
  const ordered_json doc = ordered_json::parse(slurp(out));
  CHECK(doc["results"]["mu"]["lower"].get<double>() ==
        doctest::Approx(0.909090909091).epsilon(1e-12));
  CHECK(doc["results"]["guarantee"].get<bool>() == true);  // min_n_noiseless = 384
}

TEST_CASE("experiment outputs are reproducible and mirror the library") {
  TempDir tmp;
  const std::string flags =
      "experiment coverage --eps 0.1 --delta 0.05 --n 80 --m 200 --seed 31 "
      "--sigma-v2 0.01 --out ";
  CHECK(run_cli(flags + tmp.file("r1")).status == 0);
  CHECK(run_cli(flags + tmp.file("r2")).status == 0);
  CHECK(slurp(tmp.file("r1.json")) == slurp(tmp.file("r2.json")));
  CHECK(slurp(tmp.file("r1.csv")) == slurp(tmp.file("r2.csv")));

  const experiments::MonteCarloReport report = experiments::coverage_experiment(
      ChannelParams{1.0, 0.01}, SignalPlan{1.0, 0.0}, {0.1, 0.05}, 80, 200, 31);
  CHECK(slurp(tmp.file("r1.csv")) == experiments::to_csv(report));
  const ordered_json doc = ordered_json::parse(slurp(tmp.file("r1.json")));
  CHECK(doc["results"] == experiments::to_json(report));
  CHECK(doc["seed"] == 31);
  CHECK(doc["schema"] == 1);
}

TEST_CASE("experiment tightness emits the frozen first row") {
  TempDir tmp;
  const CmdResult r =
      run_cli("experiment tightness --seed 1 --out " + tmp.file("t"));
  CHECK(r.status == 0);
  const std::string csv = slurp(tmp.file("t.csv"));
  CHECK(csv.find("0.01,1.5971062354558903,4380,2655,") != std::string::npos);
}

TEST_CASE("experiment commands demand a seed") {
  const CmdResult r =
      run_cli("experiment coverage --eps 0.1 --delta 0.05 --n 80 --m 200 --out /tmp/x");
  CHECK(r.status != 0);
  CHECK(r.output.find("--seed") != std::string::npos);
}

TEST_CASE("help exits cleanly") {
  CHECK(run_cli("--help").status == 0);
  CHECK(run_cli("plan --help").status == 0);
}
