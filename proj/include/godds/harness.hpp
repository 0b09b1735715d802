#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "godds/dgp.hpp"
#include "godds/io.hpp"
#include "godds/nuisance.hpp"

namespace godds {

// A data-generating law the studies can sample from and score against.
class Scenario {
 public:
  virtual ~Scenario() = default;
  virtual std::string name() const = 0;
  virtual double rho() const = 0;  // P(Y = 1) in the target population
  // gamma(rho') on the sampled law; the same for every design omega.
  virtual double gamma_at(double rho_prime) const = 0;
  virtual Dataset draw_ods(std::size_t n, double omega, std::uint64_t seed) const = 0;
  virtual Dataset draw_random(std::size_t n, std::uint64_t seed) const = 0;
  virtual std::shared_ptr<const NuisanceModel> truth_q(double omega) const = 0;
  virtual std::shared_ptr<const NuisanceModel> truth_p() const = 0;
  // Finite-support law when one exists; required for the closed-form bounds.
  virtual const DiscreteDgp* discrete() const { return nullptr; }
};

// "worked_example_ods", "het3", "logistic_cont".
std::unique_ptr<Scenario> make_builtin_scenario(const std::string& name);
std::unique_ptr<Scenario> make_discrete_scenario(std::string name, DiscreteDgp dgp);

struct PerturbationSchedule {
  NuisanceTarget target = NuisanceTarget::Mu1;
  double constant = 0;   // amplitude = constant * n^(-exponent)
  double exponent = 0;

  double amplitude(std::size_t n) const;
};

enum class RateExpectation { RootN, PersistentBias };

struct ExperimentConfig {
  std::string scenario = "het3";
  std::optional<std::filesystem::path> dgp_file;  // overrides `scenario`
  double omega = 0.5;
  std::optional<double> rho_low;   // unset: true rho - rho_halfwidth
  std::optional<double> rho_high;  // unset: true rho + rho_halfwidth
  double rho_halfwidth = 0.05;
  std::size_t rho_points = 101;
  std::vector<std::size_t> sample_sizes{4000};
  std::size_t replications = 1000;
  double alpha = 0.05;
  int folds = 2;
  NuisanceSpec nuisance;
  std::vector<PerturbationSchedule> perturbations;
  std::uint64_t master_seed = 20240601;
  bool random_sampling = true;  // efficiency: also run the random-sampling estimator
  RateExpectation expectation = RateExpectation::RootN;
  // Acceptance bands.
  double coverage_lo = 0.93;
  double coverage_hi = 0.97;
  double bound_coverage_lo = 0.93;
  double slope_lo = -0.6;
  double slope_hi = -0.4;
  double efficiency_tolerance = 0.10;
  double bias_se_multiple = 5.0;
  double max_failure_rate = 0.01;

  void validate() const;
};

ExperimentConfig experiment_config_from_json(const Json& j);
Json experiment_config_to_json(const ExperimentConfig& config);

struct StudyRecord {
  std::string scenario;
  std::string estimator;  // "ods" or "random_sampling"
  std::size_t n = 0;
  std::size_t replications = 0;
  std::size_t failures = 0;
  double truth = 0;
  double mean_estimate = 0;
  double bias = 0;
  double bias_se = 0;
  double rmse = 0;
  double rmse_se = 0;
  double n_var = 0;
  double n_var_se = 0;
  double sigma2 = 0;           // closed-form bound; NaN when unavailable
  double mean_n_var_zeta = 0;  // average of n * var(zeta) / n, i.e. var(zeta)
  double coverage = 0;         // NaN when not measured
  double coverage_se = 0;
  double bound_coverage = 0;
  double bound_coverage_se = 0;
};

struct StudyCheck {
  std::string name;
  double value = 0;
  double lo = 0;
  double hi = 0;
  bool passed = false;
};

struct StudyReport {
  std::string study;
  std::vector<StudyRecord> records;
  std::vector<StudyCheck> checks;
  Json notes = Json::object();

  bool passed() const;
  Json to_json() const;
  std::string to_csv() const;
};

StudyReport run_coverage(const ExperimentConfig& config);
StudyReport run_rate(const ExperimentConfig& config);
StudyReport run_efficiency(const ExperimentConfig& config);

// Worker count: GODDS_THREADS if set, otherwise the hardware concurrency.
unsigned worker_threads();

}  // namespace godds
