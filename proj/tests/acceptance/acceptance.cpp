// One line per acceptance criterion: [PASS] or [FAIL], the measured value, its
// tolerance and the runtime against its limit.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "godds/aggregation.hpp"
#include "godds/dgp.hpp"
#include "godds/harness.hpp"
#include "godds/oracle.hpp"
#include "support/exact.hpp"

using namespace godds;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string title;
  double limit_seconds;
  std::function<Outcome()> run;
};

std::string fmt(const char* pattern, double a, double b = 0, double c = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

Real err(Real got, const exact::Rational& want) { return std::fabs(got - exact::to_real(want)); }

Outcome worked_example_exactness() {
  const DiscreteDgp dgp = worked_example();
  Real worst = 0;
  worst = std::max(worst, err(oracle::conditional_or(dgp, 0), exact::frac(1, 45)));
  worst = std::max(worst, err(oracle::conditional_or(dgp, 1), exact::frac(1, 45)));
  worst = std::max(worst, err(oracle::population_or(dgp), exact::frac(32, 945)));
  worst = std::max(worst, err(oracle::marginal_risk_ratio(dgp), exact::frac(140, 1053)));
  worst = std::max(worst, err(oracle::geometric_or(dgp), exact::frac(1, 45)));
  return {worst <= 1e-12L, fmt("max abs error %.3g (tol 1e-12)", static_cast<double>(worst))};
}

Outcome collapsibility() {
  Real geometric = 0, rr = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto r = collapsibility_residuals(random_dgp(seed, 2, 8));
    geometric = std::max(geometric, r.geometric_residual);
    rr = std::max(rr, r.rr_residual);
  }
  const auto w = collapsibility_residuals(worked_example());
  rr = std::max(rr, w.rr_residual);
  const bool ok = geometric < 1e-10L && w.arithmetic_relative > 0.10L && rr <= 1e-12L;
  return {ok, fmt("geometric residual %.3g (tol 1e-10), worked-example arithmetic relative residual %.4f (> 0.10), "
                  "RR residual %.3g (tol 1e-12)",
                  static_cast<double>(geometric), static_cast<double>(w.arithmetic_relative), static_cast<double>(rr))};
}

Outcome partial_identification() {
  Real worst = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const DiscreteDgp dgp = random_dgp(seed, 2, 6);
    const Real rho = dgp.outcome_rate();
    const Real gamma = oracle::geometric_or(dgp);
    const Real alpha = oracle::arithmetic_or(dgp);
    const Real pop = oracle::population_or(dgp);
    for (Real omega : {0.3L, 0.5L, 0.7L}) {
      const QLaw q = derive_q(dgp, omega);
      worst = std::max(worst, std::fabs(oracle::geometric_or_partial(q, rho) - gamma));
      worst = std::max(worst, std::fabs(oracle::arithmetic_or_partial(q, rho) - alpha));
      worst = std::max(worst, std::fabs(oracle::population_or_partial(q, rho) - pop));
    }
  }
  return {worst <= 1e-12L, fmt("max abs error over 150 tilted laws %.3g (tol 1e-12)", static_cast<double>(worst))};
}

ExperimentConfig oracle_study(std::vector<std::size_t> sizes, std::size_t reps, std::uint64_t seed) {
  ExperimentConfig c;
  c.scenario = "het3";
  c.omega = 0.5;
  c.sample_sizes = std::move(sizes);
  c.replications = reps;
  c.nuisance.kind = NuisanceKind::OracleTruth;
  c.master_seed = seed;
  return c;
}

StudyCheck find_check(const StudyReport& r, const std::string& prefix) {
  for (const auto& c : r.checks) {
    if (c.name.rfind(prefix, 0) == 0) return c;
  }
  throw std::runtime_error("missing check " + prefix);
}

Outcome rate() {
  const StudyReport r = run_rate(oracle_study({2000, 8000, 32000}, 500, 20240602));
  const auto& c = find_check(r, "rmse_slope");
  return {c.passed, fmt("RMSE slope %.4f (band [-0.6, -0.4])", c.value)};
}

Outcome efficiency() {
  ExperimentConfig c = oracle_study({10000}, 1000, 20240605);
  c.random_sampling = true;
  const StudyReport r = run_efficiency(c);
  const auto& ods = find_check(r, "ods_nvar_over_bound");
  const auto& rs = find_check(r, "rs_nvar_over_bound");
  return {ods.passed && rs.passed,
          fmt("ODS n*var/bound %.4f, random-sampling n*var/bound %.4f (band [0.90, 1.10])", ods.value, rs.value)};
}

Outcome coverage() {
  ExperimentConfig c;
  c.scenario = "het3";
  c.omega = 0.5;
  c.sample_sizes = {4000};
  c.replications = 1000;
  c.rho_halfwidth = 0.05;
  c.nuisance.kind = NuisanceKind::LogisticParametric;
  c.master_seed = 20240601;
  const StudyReport r = run_coverage(c);
  const auto& endpoint = find_check(r, "endpoint_coverage");
  const auto& bound = find_check(r, "bound_coverage");
  return {endpoint.passed && bound.passed,
          fmt("endpoint coverage %.3f (band [0.93, 0.97]), identified-set coverage %.3f (>= 0.93)", endpoint.value,
              bound.value)};
}

Outcome double_robustness() {
  ExperimentConfig shrinking = oracle_study({2000, 8000, 32000}, 500, 20240603);
  shrinking.nuisance.kind = NuisanceKind::PerturbedOracle;
  shrinking.perturbations = {{NuisanceTarget::Mu1, 1.0, 0.25}, {NuisanceTarget::Pi, 1.0, 0.25}};
  const StudyCheck slope = find_check(run_rate(shrinking), "rmse_slope");

  ExperimentConfig constant = oracle_study({2000, 8000, 32000}, 500, 20240604);
  constant.nuisance.kind = NuisanceKind::PerturbedOracle;
  constant.perturbations = {{NuisanceTarget::Mu1, 0.5, 0.0}};
  constant.expectation = RateExpectation::PersistentBias;
  const StudyCheck bias = find_check(run_rate(constant), "bias_over_se_n32000");
  return {slope.passed && bias.passed,
          fmt("perturbed RMSE slope %.4f (band [-0.6, -0.4]), constant-perturbation |bias|/SE at n=32000 %.2f (> 5)",
              slope.value, bias.value)};
}

Outcome influence_function() {
  std::vector<DiscreteDgp> laws{worked_example(), het3()};
  for (std::uint64_t seed = 0; seed < 20; ++seed) laws.push_back(random_dgp(seed, 2, 6));
  Real mean_err = 0, bound_err = 0;
  for (const auto& dgp : laws) {
    for (Real omega : {0.3L, 0.5L, 0.7L}) {
      const QLaw q = derive_q(dgp, omega);
      for (Real rho : {0.1L, 0.3L, 0.5L, 0.9L, dgp.outcome_rate()}) {
        Real total = 0;
        for (std::size_t x = 0; x < q.size(); ++x) {
          for (int a = 0; a < 2; ++a) {
            for (int y = 0; y < 2; ++y) total += q.mass(x, a, y) * oracle::influence_log_gamma(q, rho, x, a, y);
          }
        }
        mean_err = std::max(mean_err, std::fabs(total));
        bound_err = std::max(bound_err,
                             std::fabs(oracle::efficiency_bound_ods(q, rho) - oracle::influence_second_moment(q, rho)));
      }
    }
  }
  return {mean_err <= 1e-12L && bound_err <= 1e-12L,
          fmt("max |E[IF]| %.3g, max |bound - E[IF^2] gamma^2| %.3g (tol 1e-12)", static_cast<double>(mean_err),
              static_cast<double>(bound_err))};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  int only = 0;
  app.add_option("--only", only, "run a single criterion (1-8)")->check(CLI::Range(1, 8));
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria{
      {1, "worked-example exactness", 1, worked_example_exactness},
      {2, "collapsibility", 5, collapsibility},
      {3, "partial-identification identity", 5, partial_identification},
      {4, "estimator rate under outcome-dependent sampling", 180, rate},
      {5, "efficiency bound match", 180, efficiency},
      {6, "confidence interval coverage", 300, coverage},
      {7, "double-robustness structure", 180, double_robustness},
      {8, "brute-force influence function", 1, influence_function},
  };

  bool all = true;
  for (const auto& c : criteria) {
    if (only != 0 && c.id != only) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = seconds < c.limit_seconds;
    const bool passed = o.passed && in_time;
    all = all && passed;
    std::printf("[%s] AC%d %s: %s; runtime %.2f s (limit %.0f s)\n", passed ? "PASS" : "FAIL", c.id, c.title.c_str(),
                o.detail.c_str(), seconds, c.limit_seconds);
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
