// Acceptance suite: runs every verification criterion end to end and prints
// one pass/fail line per criterion. Exits nonzero if any criterion fails.
#include <chrono>
#include <cinttypes>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <string>
#include <vector>

#include "raystat/channel_sim.hpp"
#include "raystat/estimator.hpp"
#include "raystat/experiments.hpp"
#include "raystat/interval.hpp"
#include "raystat/planner.hpp"
#include "raystat/special_functions.hpp"

using namespace raystat;

namespace {

int failures = 0;

class Criterion {
 public:
  Criterion(int index, std::string name)
      : index_(index), name_(std::move(name)),
        start_(std::chrono::steady_clock::now()) {}

  void finish(bool ok, const std::string& detail) const {
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
            .count();
    std::printf("%s  %2d. %-34s (%6.2f s)  %s\n", ok ? "PASS" : "FAIL", index_,
                name_.c_str(), seconds, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }

 private:
  int index_;
  std::string name_;
  std::chrono::steady_clock::time_point start_;
};

struct TestRng {
  std::uint64_t state;
  explicit TestRng(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    return state;
  }
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

std::string fmt(const char* format, ...) {
  char buf[256];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

double binomial_3se(double p, std::int64_t m) {
  return 3.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(m));
}

// --- criterion 1: Poisson partial sum vs complementary chi-square CDF ------

void criterion_identity() {
  const Criterion c(1, "poisson / chi-square identity");
  TestRng rng(0xACCE0001);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double theta = std::pow(10.0, 4.0 * rng.unit());          // (0, 1e4]
    const std::int64_t n =
        1 + static_cast<std::int64_t>(std::pow(10.0, 5.0 * rng.unit()));  // [1, 1e5]
    const double lhs = sf::poisson_below(theta, n);
    const double rhs = 1.0 - sf::chi2_cdf(2 * n, 2.0 * theta);
    worst = std::max(worst, std::fabs(lhs - rhs));
  }
  c.finish(worst <= 1e-10, fmt("max |diff| = %.3e (tol 1e-10)", worst));
}

// --- criterion 2: inequality chain -----------------------------------------

void criterion_inequality_chain() {
  const Criterion c(2, "log-moment inequality chain");
  bool ok = true;
  for (int i = 1; i <= 500; ++i) {
    const double eps = 0.001 + (0.999 - 0.001) * (i - 1) / 499.0;
    const double lhs = 3.0 * eps * eps / (2.0 * (3.0 + 2.0 * eps));
    const double mid = eps - std::log1p(eps);
    const double rhs = -eps - std::log1p(-eps);
    ok = ok && lhs < mid && mid < rhs;
  }
  c.finish(ok, "500 margins in (0.001, 0.999), strict");
}

// --- criterion 3: planner correctness on a 20-point grid -------------------

void criterion_planner_grid() {
  const Criterion c(3, "planner exact-minimum grid");
  bool ok = true;
  std::string detail = "20 specs";
  for (double eps : {0.02, 0.05, 0.1, 0.2, 0.3}) {
    for (double delta : {0.001, 0.01, 0.05, 0.1}) {
      const AccuracySpec spec{eps, delta};
      const std::int64_t apriori = planner::apriori_noiseless(spec);
      const std::int64_t min_n = planner::min_n_noiseless(spec);
      const bool bounded = min_n <= apriori;
      const bool covers = planner::exact_coverage(min_n, eps) > 1.0 - delta;
      const bool sharp =
          min_n == 1 || planner::exact_coverage(min_n - 1, eps) <= 1.0 - delta;
      if (!(bounded && covers && sharp)) {
        ok = false;
        detail = fmt("violated at eps=%g delta=%g", eps, delta);
      }
    }
  }
  c.finish(ok, detail);
}

// --- criterion 4: asymptotic tightness of the a priori bound ---------------

void criterion_tightness() {
  const Criterion c(4, "bound tightness ratio");
  std::vector<double> ratios;
  for (double delta : {1e-2, 1e-4, 1e-6, 1e-8, 1e-10, 1e-12})
    ratios.push_back(planner::tightness_ratio(delta));
  bool ok = std::fabs(ratios.front() - 1.5971062354558903) < 1e-3;
  ok = ok && ratios.back() < 1.15;
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    ok = ok && ratios[i] > 1.0;
    if (i) ok = ok && ratios[i] < ratios[i - 1];
  }
  c.finish(ok, fmt("1.5971 -> %.5f, strictly decreasing toward 1", ratios.back()));
}

// --- criterion 5: noiseless coverage Monte Carlo ---------------------------

void criterion_noiseless_coverage() {
  const Criterion c(5, "noiseless coverage Monte Carlo");
  const AccuracySpec spec{0.1, 0.05};
  const std::int64_t n = planner::min_n_noiseless(spec);
  const std::int64_t m = 10000;
  const experiments::MonteCarloReport report =
      experiments::noiseless_coverage(spec, n, m, 0xACCE0005);
  const double threshold = 0.95 - binomial_3se(0.05, m);
  c.finish(report.coverage[0] >= threshold,
           fmt("coverage %.4f at N=%" PRId64 " (need >= %.4f)", report.coverage[0], n,
               threshold));
}

// --- criterion 6: estimator optimality at desk scale -----------------------

void criterion_estimator_optimality() {
  const Criterion c(6, "RMSE tracks the bound, unbiased");
  const ChannelParams params{1.0, 0.01};
  const SignalPlan plan{1.0, 0.0};
  const std::int64_t m = 2000;
  const std::vector<std::int64_t> grid{100, 1000, 10000};

  const experiments::MonteCarloReport report =
      experiments::rmse_vs_crb(params, plan, grid, m, 0xACCE0006);
  bool ok = true;
  std::string detail;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double rel = std::fabs(report.rmse_h[i] - report.crb_h[i]) / report.crb_h[i];
    if (rel > 0.10) {
      ok = false;
      detail = fmt("rmse_h off by %.1f%% at N=%" PRId64, 100.0 * rel, grid[i]);
    }
  }

  for (std::size_t i = 0; i < grid.size() && ok; ++i) {
    const std::int64_t n = grid[i];
    const estimator::CrbReport crb = estimator::fisher_information(params, plan, n);
    const std::uint64_t base = sim::sub_seed(0xACCE0616, i + 1);
    double sum_h = 0.0, sum_v = 0.0;
    for (std::int64_t t = 0; t < m; ++t) {
      sim::CampaignConfig config{params, plan, n, sim::sub_seed(base, static_cast<std::uint64_t>(t) + 1),
                                 sim::GenMethod::complex_gaussian};
      const sim::Campaign campaign = sim::generate_campaign(config);
      const estimator::PointEstimate est =
          estimator::point_estimates(campaign.batch1, campaign.batch2, plan);
      sum_h += est.sigma_h2_hat;
      sum_v += est.sigma_v2_hat;
    }
    const double dm = static_cast<double>(m);
    const double bias_h = std::fabs(sum_h / dm - params.sigma_h2);
    const double bias_v = std::fabs(sum_v / dm - params.sigma_v2);
    if (bias_h >= 4.0 * crb.crb_h / std::sqrt(dm) ||
        bias_v >= 4.0 * crb.crb_v / std::sqrt(dm)) {
      ok = false;
      detail = fmt("bias at N=%" PRId64, n);
    }
  }
  if (ok) detail = "RMSE within 10% of bound, bias within 4 crb/sqrt(M)";
  c.finish(ok, detail);
}

// --- criterion 7: information-matrix identity and curvature check ----------

void criterion_fim() {
  const Criterion c(7, "FIM inverse and curvature check");
  TestRng rng(0xACCE0007);
  double worst_identity = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const ChannelParams params{0.2 + 1.8 * rng.unit(), 0.2 + 0.8 * rng.unit()};
    const double p2 = rng.unit();
    const SignalPlan plan{p2 + 0.5 + 1.5 * rng.unit(), p2};
    const std::int64_t n = 1 + static_cast<std::int64_t>(rng.unit() * 100000);
    const estimator::CrbReport r = estimator::fisher_information(params, plan, n);
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        long double prod = 0.0L;
        for (int k = 0; k < 2; ++k)
          prod += static_cast<long double>(r.fim[a][k]) * r.cov[k][b];
        worst_identity = std::max(
            worst_identity,
            std::fabs(static_cast<double>(prod) - (a == b ? 1.0 : 0.0)));
      }
    }
  }
  bool ok = worst_identity <= 1e-10;

  // curvature of the expected log-likelihood vs the analytic inverse
  double worst_fd = 0.0;
  for (int i = 0; i < 10 && ok; ++i) {
    const ChannelParams params{0.4 + 1.2 * rng.unit(), 0.3 + 0.7 * rng.unit()};
    const double p2 = (i % 2) ? 0.0 : 0.5 + rng.unit();
    const SignalPlan plan{p2 + 0.8 + rng.unit(), p2};
    const std::int64_t n = 200 + static_cast<std::int64_t>(rng.unit() * 2000);
    const estimator::CrbReport r = estimator::fisher_information(params, plan, n);

    const long double s1_true = params.composite(plan.p_s1);
    const long double s2_true = params.composite(plan.p_s2);
    const auto loglik = [&](long double th, long double tv) {
      const long double s1 = plan.p_s1 * th + tv;
      const long double s2 = plan.p_s2 * th + tv;
      return -static_cast<long double>(n) *
             (std::log(s1) + std::log(s2) + s1_true / s1 + s2_true / s2);
    };
    const long double th = params.sigma_h2, tv = params.sigma_v2;
    const long double h = 1e-5L * th, k = 1e-5L * tv;
    double fd[2][2];
    fd[0][0] = static_cast<double>(
        -(loglik(th + h, tv) - 2.0L * loglik(th, tv) + loglik(th - h, tv)) / (h * h));
    fd[1][1] = static_cast<double>(
        -(loglik(th, tv + k) - 2.0L * loglik(th, tv) + loglik(th, tv - k)) / (k * k));
    fd[0][1] = static_cast<double>(-(loglik(th + h, tv + k) - loglik(th + h, tv - k) -
                                     loglik(th - h, tv + k) + loglik(th - h, tv - k)) /
                                   (4.0L * h * k));
    fd[1][0] = fd[0][1];
    // invert the finite-difference information and compare with cov
    const double det = fd[0][0] * fd[1][1] - fd[0][1] * fd[1][0];
    const double inv[2][2] = {{fd[1][1] / det, -fd[0][1] / det},
                              {-fd[1][0] / det, fd[0][0] / det}};
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        worst_fd = std::max(worst_fd,
                            std::fabs(inv[a][b] - r.cov[a][b]) / std::fabs(r.cov[a][b]));
  }
  ok = ok && worst_fd <= 1e-4;
  c.finish(ok, fmt("max |FIM*Cov - I| = %.2e, curvature rel err %.2e", worst_identity,
                   worst_fd));
}

// --- criterion 8: joint coverage of the simultaneous intervals -------------

void criterion_joint_coverage() {
  const Criterion c(8, "simultaneous interval coverage");
  const AccuracySpec spec{0.1, 0.05};
  const std::int64_t n = planner::min_n_noisy(spec);
  const std::int64_t m = 5000;

  // SNR 20 dB under the unit normalization
  const experiments::MonteCarloReport at = experiments::coverage_experiment(
      ChannelParams{1.0, 0.01}, SignalPlan{1.0, 0.0}, spec, n, m, 0xACCE0008);
  const double lower_threshold = 0.95 - binomial_3se(0.05, m);
  bool ok = at.coverage[0] >= lower_threshold;

  // one below the minimum, with a signal strong enough to pin the ceiling
  const experiments::MonteCarloReport below = experiments::coverage_experiment(
      ChannelParams{1.0, 0.01}, SignalPlan{1e6, 0.0}, spec, n - 1, m, 0xACCE0808);
  const double upper_threshold = 0.975 + binomial_3se(0.025, m);
  ok = ok && below.coverage[0] <= upper_threshold;

  c.finish(ok, fmt("%.4f >= %.4f at N=%" PRId64 "; %.4f <= %.4f at N-1",
                   at.coverage[0], lower_threshold, n, below.coverage[0],
                   upper_threshold));
}

// --- criterion 9: SNR estimation -------------------------------------------

void criterion_snr() {
  const Criterion c(9, "SNR ratio accuracy and sample cost");
  const AccuracySpec spec{0.1, 0.05};
  const std::int64_t n = planner::min_n_snr(spec);
  const std::int64_t m = 5000;
  const ChannelParams params{1.0, 0.01};
  const SignalPlan plan{1e4, 0.0};
  const double truth = params.sigma_h2 / params.sigma_v2;

  std::int64_t hits = 0;
  for (std::int64_t t = 0; t < m; ++t) {
    sim::CampaignConfig config{params, plan, n, sim::sub_seed(0xACCE0009, static_cast<std::uint64_t>(t) + 1),
                               sim::GenMethod::exponential_shortcut};
    const sim::Campaign campaign = sim::generate_campaign(config);
    const double est = estimator::snr_point_estimate(campaign.batch1, campaign.batch2,
                                                     plan);
    if (std::fabs(est - truth) / truth < spec.epsilon) ++hits;
  }
  const double coverage = static_cast<double>(hits) / static_cast<double>(m);
  const double threshold = 0.95 - binomial_3se(0.05, m);
  bool ok = coverage >= threshold;

  const double cost_ratio = static_cast<double>(planner::apriori_snr(spec)) /
                            static_cast<double>(planner::apriori_noisy(spec));
  ok = ok && cost_ratio > 3.5 && cost_ratio < 4.5;
  c.finish(ok, fmt("coverage %.4f at N=%" PRId64 " (need >= %.4f); cost ratio %.2f",
                   coverage, n, threshold, cost_ratio));
}

// --- criterion 10: reproducibility -----------------------------------------

void criterion_reproducibility() {
  const Criterion c(10, "byte-identical reruns");
  const ChannelParams params{1.0, 0.01};
  const SignalPlan plan{1.0, 0.0};
  const AccuracySpec spec{0.1, 0.05};
  bool ok = true;

  for (int round = 0; round < 2; ++round) {
    static std::string cov_csv, cov_json, rmse_csv, rmse_json, ratio_csv, ratio_json,
        tight_csv, tight_json;
    const experiments::MonteCarloReport cov =
        experiments::coverage_experiment(params, plan, spec, 120, 200, 100);
    const experiments::MonteCarloReport rmse =
        experiments::rmse_vs_crb(params, plan, {150, 300}, 200, 200);
    const experiments::RatioCurveTable ratio = experiments::ratio_curves(
        experiments::RatioMode::noisy_h, 0.01, {400, 900}, params, plan, 300);
    const experiments::TightnessTable tight = experiments::tightness_table(
        {1e-2, 1e-4}, 0.1);
    if (round == 0) {
      cov_csv = to_csv(cov);
      cov_json = to_json(cov).dump();
      rmse_csv = to_csv(rmse);
      rmse_json = to_json(rmse).dump();
      ratio_csv = to_csv(ratio);
      ratio_json = to_json(ratio).dump();
      tight_csv = to_csv(tight);
      tight_json = to_json(tight).dump();
    } else {
      ok = ok && cov_csv == to_csv(cov) && cov_json == to_json(cov).dump();
      ok = ok && rmse_csv == to_csv(rmse) && rmse_json == to_json(rmse).dump();
      ok = ok && ratio_csv == to_csv(ratio) && ratio_json == to_json(ratio).dump();
      ok = ok && tight_csv == to_csv(tight) && tight_json == to_json(tight).dump();
    }
  }
  c.finish(ok, "coverage, rmse-crb, ratio-curves, tightness");
}

}  // namespace

int main() {
  std::printf("acceptance suite\n----------------\n");
  criterion_identity();
  criterion_inequality_chain();
  criterion_planner_grid();
  criterion_tightness();
  criterion_noiseless_coverage();
  criterion_estimator_optimality();
  criterion_fim();
  criterion_joint_coverage();
  criterion_snr();
  criterion_reproducibility();
  std::printf("----------------\n%s\n", failures ? "FAILURES PRESENT" : "all criteria passed");
  return failures ? 1 : 0;
}
