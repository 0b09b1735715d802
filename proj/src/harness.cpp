#include "godds/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "godds/error.hpp"
#include "godds/estimator.hpp"
#include "godds/inference.hpp"
#include "godds/numeric.hpp"
#include "godds/oracle.hpp"
#include "godds/rng.hpp"

namespace godds {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

// Runs body(i) for i in [0, count) on the worker pool. Results must be written
// to per-index slots so the outcome does not depend on scheduling.
template <class Body>
void parallel_for(std::size_t count, Body&& body) {
  const unsigned workers = std::min<std::size_t>(worker_threads(), std::max<std::size_t>(count, 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next.store(count);
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

struct RepResult {
  bool ok = false;
  double estimate = 0;
  double var_zeta = 0;
  bool covered = false;
  bool bound_covered = false;
};

std::unique_ptr<Scenario> resolve_scenario(const ExperimentConfig& config) {
  if (config.dgp_file) {
    return make_discrete_scenario(config.dgp_file->stem().string(), load_dgp(*config.dgp_file));
  }
  return make_builtin_scenario(config.scenario);
}

std::uint64_t rep_seed(const ExperimentConfig& config, std::size_t n, std::size_t rep) {
  return derive_seed(derive_seed(config.master_seed, n), rep);
}

NuisanceSpec spec_for(const ExperimentConfig& config, std::size_t n) {
  NuisanceSpec spec = config.nuisance;
  for (const PerturbationSchedule& p : config.perturbations) {
    spec.perturbations.push_back({p.target, p.amplitude(n), {}});
  }
  return spec;
}

struct RhoRange {
  double low;
  double high;
};

RhoRange rho_range(const ExperimentConfig& config, double rho_true) {
  RhoRange r{config.rho_low.value_or(rho_true - config.rho_halfwidth),
             config.rho_high.value_or(rho_true + config.rho_halfwidth)};
  if (!(r.low > 0 && r.high < 1 && r.low <= r.high)) {
    throw InvalidArgument("rho range must satisfy 0 < rho_low <= rho_high < 1");
  }
  return r;
}

struct OdsContext {
  const Scenario& scenario;
  const ExperimentConfig& config;
  std::shared_ptr<const NuisanceModel> truth;
  double rho_true;
  double gamma_true;
  RhoRange range;
  double set_min;
  double set_max;
};

RepResult ods_rep(const OdsContext& ctx, std::size_t n, std::uint64_t seed, bool intervals) {
  const ExperimentConfig& cfg = ctx.config;
  const Dataset data = ctx.scenario.draw_ods(n, cfg.omega, derive_seed(seed, 1));
  const CrossFitPlan plan = CrossFitPlan::make(n, cfg.folds, derive_seed(seed, 2));
  const auto fits = fit_nuisances(data, plan, spec_for(cfg, n), ctx.truth);
  const auto rows = predict_rows(data, plan, fits);
  const double omega_hat = estimate_omega(data, cfg.nuisance.clip_eps).value;
  const PsiCells cells = estimate_psi_cells(data, rows, omega_hat, cfg.nuisance.clip_eps);

  RepResult r;
  const auto grid = make_rho_grid(ctx.range.low, ctx.range.high, cfg.rho_points);
  const GammaEstimate est = estimate_gamma(cells, grid);
  r.estimate = est.at(ctx.rho_true);
  const CenteredContrasts contrasts = centered_contrasts(data, rows, cells, cfg.nuisance.clip_eps);
  const PseudoOutcomes at_truth = pseudo_outcomes(contrasts, ctx.rho_true, r.estimate);
  r.var_zeta = sample_variance(at_truth.zeta);
  if (intervals) {
    const ConfidenceInterval ci = ci_endpoint(at_truth, r.estimate, cfg.alpha);
    r.covered = ci.lo <= ctx.gamma_true && ctx.gamma_true <= ci.hi;
    const BoundInterval b = ci_bound(est, pseudo_outcomes(contrasts, grid.front(), est.gamma_hat.front()),
                                     pseudo_outcomes(contrasts, grid.back(), est.gamma_hat.back()), cfg.alpha);
    r.bound_covered = b.l_alpha <= ctx.set_min && ctx.set_max <= b.u_alpha;
  }
  r.ok = true;
  return r;
}

RepResult random_sampling_rep(const Scenario& scenario, const ExperimentConfig& cfg,
                              std::shared_ptr<const NuisanceModel> truth, std::size_t n, std::uint64_t seed) {
  const Dataset data = scenario.draw_random(n, derive_seed(seed, 3));
  const CrossFitPlan plan = CrossFitPlan::make(n, cfg.folds, derive_seed(seed, 4));
  const auto fits = fit_nuisances(data, plan, spec_for(cfg, n), std::move(truth));
  const auto scores = random_sampling_scores(data, fits, plan);
  RepResult r;
  r.estimate = std::exp(mean(scores));
  r.var_zeta = sample_variance(scores) * r.estimate * r.estimate;
  r.ok = true;
  return r;
}

template <class Rep>
std::vector<RepResult> replicate(const ExperimentConfig& config, std::size_t n, Rep&& rep) {
  std::vector<RepResult> results(config.replications);
  parallel_for(config.replications, [&](std::size_t i) {
    try {
      results[i] = rep(rep_seed(config, n, i));
    } catch (const Error&) {
      results[i].ok = false;
    }
  });
  std::size_t failures = 0;
  for (const auto& r : results) failures += r.ok ? 0 : 1;
  if (static_cast<double>(failures) > config.max_failure_rate * static_cast<double>(config.replications)) {
    throw NumericalError("study aborted: " + std::to_string(failures) + " of " +
                         std::to_string(config.replications) + " replications failed at n=" + std::to_string(n));
  }
  return results;
}

StudyRecord summarize(const std::string& scenario, const std::string& estimator, std::size_t n, double truth,
                      const std::vector<RepResult>& results, bool intervals) {
  std::vector<double> est, err, sq;
  CompensatedSum cover, bound_cover, var_zeta;
  for (const RepResult& r : results) {
    if (!r.ok) continue;
    est.push_back(r.estimate);
    err.push_back(r.estimate - truth);
    sq.push_back((r.estimate - truth) * (r.estimate - truth));
    cover.add(r.covered ? 1.0 : 0.0);
    bound_cover.add(r.bound_covered ? 1.0 : 0.0);
    var_zeta.add(r.var_zeta);
  }
  StudyRecord rec;
  rec.scenario = scenario;
  rec.estimator = estimator;
  rec.n = n;
  rec.replications = est.size();
  rec.failures = results.size() - est.size();
  rec.truth = truth;
  const double reps = static_cast<double>(est.size());
  if (est.size() < 2) throw NumericalError("too few successful replications to summarize");
  rec.mean_estimate = mean(est);
  rec.bias = mean(err);
  rec.bias_se = std::sqrt(sample_variance(err) / reps);
  const double mse = mean(sq);
  rec.rmse = std::sqrt(mse);
  rec.rmse_se = rec.rmse > 0 ? std::sqrt(sample_variance(sq) / reps) / (2 * rec.rmse) : 0.0;
  rec.n_var = static_cast<double>(n) * sample_variance(est);
  rec.n_var_se = rec.n_var * std::sqrt(2.0 / (reps - 1));
  rec.sigma2 = kNaN;
  rec.mean_n_var_zeta = var_zeta.value() / reps;
  if (intervals) {
    rec.coverage = cover.value() / reps;
    rec.coverage_se = std::sqrt(rec.coverage * (1 - rec.coverage) / reps);
    rec.bound_coverage = bound_cover.value() / reps;
    rec.bound_coverage_se = std::sqrt(rec.bound_coverage * (1 - rec.bound_coverage) / reps);
  } else {
    rec.coverage = rec.coverage_se = rec.bound_coverage = rec.bound_coverage_se = kNaN;
  }
  return rec;
}

StudyCheck band(std::string name, double value, double lo, double hi) {
  return {std::move(name), value, lo, hi, value >= lo && value <= hi};
}

OdsContext make_context(const Scenario& scenario, const ExperimentConfig& config) {
  const double rho = scenario.rho();
  const RhoRange range = rho_range(config, rho);
  const double g_lo = scenario.gamma_at(range.low);
  const double g_hi = scenario.gamma_at(range.high);
  std::shared_ptr<const NuisanceModel> truth;
  if (config.nuisance.kind != NuisanceKind::LogisticParametric) truth = scenario.truth_q(config.omega);
  return {scenario, config, truth, rho, scenario.gamma_at(rho), range, std::min(g_lo, g_hi), std::max(g_lo, g_hi)};
}

Json record_json(const StudyRecord& r) {
  return {{"scenario", r.scenario},
          {"estimator", r.estimator},
          {"n", r.n},
          {"replications", r.replications},
          {"failures", r.failures},
          {"truth", r.truth},
          {"mean_estimate", r.mean_estimate},
          {"bias", r.bias},
          {"bias_se", r.bias_se},
          {"rmse", r.rmse},
          {"rmse_se", r.rmse_se},
          {"n_var", r.n_var},
          {"n_var_se", r.n_var_se},
          {"sigma2", r.sigma2},
          {"mean_var_zeta", r.mean_n_var_zeta},
          {"coverage", r.coverage},
          {"coverage_se", r.coverage_se},
          {"bound_coverage", r.bound_coverage},
          {"bound_coverage_se", r.bound_coverage_se}};
}

const char* expectation_name(RateExpectation e) {
  return e == RateExpectation::RootN ? "root_n" : "persistent_bias";
}

}  // namespace

unsigned worker_threads() {
  if (const char* env = std::getenv("GODDS_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

double PerturbationSchedule::amplitude(std::size_t n) const {
  return constant * std::pow(static_cast<double>(n), -exponent);
}

void ExperimentConfig::validate() const {
  if (replications < 2) throw InvalidArgument("replications must be at least 2");
  if (sample_sizes.empty()) throw InvalidArgument("sample_sizes must not be empty");
  for (std::size_t i = 0; i < sample_sizes.size(); ++i) {
    if (sample_sizes[i] < static_cast<std::size_t>(2 * std::max(folds, 2))) {
      throw InvalidArgument("sample sizes must be at least twice the fold count");
    }
    if (i > 0 && sample_sizes[i] <= sample_sizes[i - 1]) {
      throw InvalidArgument("sample_sizes must be strictly increasing");
    }
  }
  if (!(omega > 0 && omega < 1)) throw InvalidArgument("omega must lie in (0, 1)");
  if (!(alpha > 0 && alpha <= 1)) throw InvalidArgument("alpha must lie in (0, 1]");
  if (folds < 2) throw InvalidArgument("folds must be at least 2");
  if (!(rho_halfwidth >= 0)) throw InvalidArgument("rho_halfwidth must be nonnegative");
  for (const auto& r : {rho_low, rho_high}) {
    if (r && !(*r > 0 && *r < 1)) throw InvalidArgument("rho bounds must lie in (0, 1)");
  }
  if (rho_low && rho_high && *rho_low > *rho_high) throw InvalidArgument("rho_low exceeds rho_high");
  if (rho_points < 2) throw InvalidArgument("rho_points must be at least 2");
  nuisance.validate();
  if (!perturbations.empty() && nuisance.kind != NuisanceKind::PerturbedOracle) {
    throw InvalidArgument("perturbation schedules need nuisance kind 'perturbed'");
  }
  if (!(max_failure_rate >= 0 && max_failure_rate < 1)) throw InvalidArgument("max_failure_rate must lie in [0, 1)");
}

ExperimentConfig experiment_config_from_json(const Json& j) {
  if (!j.is_object()) throw DataError("experiment config must be a JSON object");
  ExperimentConfig c;
  static const std::vector<std::string> known{
      "scenario", "dgp_file", "omega", "rho_low", "rho_high", "rho_halfwidth", "rho_points", "sample_sizes",
      "replications", "alpha", "folds", "nuisance", "perturbations", "master_seed", "random_sampling",
      "expectation", "bands"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(known.begin(), known.end(), it.key()) == known.end()) {
      throw DataError("unknown experiment config key '" + it.key() + "'");
    }
  }
  try {
    if (j.contains("scenario")) c.scenario = j["scenario"].get<std::string>();
    if (j.contains("dgp_file")) c.dgp_file = j["dgp_file"].get<std::string>();
    if (j.contains("omega")) c.omega = j["omega"].get<double>();
    if (j.contains("rho_low")) c.rho_low = j["rho_low"].get<double>();
    if (j.contains("rho_high")) c.rho_high = j["rho_high"].get<double>();
    if (j.contains("rho_halfwidth")) c.rho_halfwidth = j["rho_halfwidth"].get<double>();
    if (j.contains("rho_points")) c.rho_points = j["rho_points"].get<std::size_t>();
    if (j.contains("sample_sizes")) c.sample_sizes = j["sample_sizes"].get<std::vector<std::size_t>>();
    if (j.contains("replications")) c.replications = j["replications"].get<std::size_t>();
    if (j.contains("alpha")) c.alpha = j["alpha"].get<double>();
    if (j.contains("folds")) c.folds = j["folds"].get<int>();
    if (j.contains("master_seed")) c.master_seed = j["master_seed"].get<std::uint64_t>();
    if (j.contains("random_sampling")) c.random_sampling = j["random_sampling"].get<bool>();
    if (j.contains("expectation")) {
      const auto e = j["expectation"].get<std::string>();
      if (e == "root_n") {
        c.expectation = RateExpectation::RootN;
      } else if (e == "persistent_bias") {
        c.expectation = RateExpectation::PersistentBias;
      } else {
        throw DataError("expectation must be root_n or persistent_bias");
      }
    }
    if (j.contains("nuisance")) {
      const Json& nu = j["nuisance"];
      if (nu.contains("kind")) c.nuisance.kind = parse_nuisance_kind(nu["kind"].get<std::string>());
      if (nu.contains("clip_eps")) c.nuisance.clip_eps = nu["clip_eps"].get<double>();
      if (nu.contains("ridge")) c.nuisance.ridge = nu["ridge"].get<double>();
      if (nu.contains("max_newton_iters")) c.nuisance.max_newton_iters = nu["max_newton_iters"].get<int>();
      if (nu.contains("newton_tol")) c.nuisance.newton_tol = nu["newton_tol"].get<double>();
      if (nu.contains("eta_mode")) c.nuisance.eta_mode = parse_eta_mode(nu["eta_mode"].get<std::string>());
    }
    if (j.contains("perturbations")) {
      for (const Json& p : j["perturbations"]) {
        PerturbationSchedule s;
        s.target = parse_nuisance_target(p.at("target").get<std::string>());
        s.constant = p.at("constant").get<double>();
        s.exponent = p.value("exponent", 0.0);
        c.perturbations.push_back(s);
      }
    }
    if (j.contains("bands")) {
      const Json& b = j["bands"];
      c.coverage_lo = b.value("coverage_lo", c.coverage_lo);
      c.coverage_hi = b.value("coverage_hi", c.coverage_hi);
      c.bound_coverage_lo = b.value("bound_coverage_lo", c.bound_coverage_lo);
      c.slope_lo = b.value("slope_lo", c.slope_lo);
      c.slope_hi = b.value("slope_hi", c.slope_hi);
      c.efficiency_tolerance = b.value("efficiency_tolerance", c.efficiency_tolerance);
      c.bias_se_multiple = b.value("bias_se_multiple", c.bias_se_multiple);
      c.max_failure_rate = b.value("max_failure_rate", c.max_failure_rate);
    }
  } catch (const Json::exception& e) {
    throw DataError(std::string("experiment config: ") + e.what());
  }
  c.validate();
  return c;
}

Json experiment_config_to_json(const ExperimentConfig& c) {
  Json j;
  j["scenario"] = c.scenario;
  if (c.dgp_file) j["dgp_file"] = c.dgp_file->string();
  j["omega"] = c.omega;
  if (c.rho_low) j["rho_low"] = *c.rho_low;
  if (c.rho_high) j["rho_high"] = *c.rho_high;
  j["rho_halfwidth"] = c.rho_halfwidth;
  j["rho_points"] = c.rho_points;
  j["sample_sizes"] = c.sample_sizes;
  j["replications"] = c.replications;
  j["alpha"] = c.alpha;
  j["folds"] = c.folds;
  Json nu{{"kind", to_string(c.nuisance.kind)},
          {"clip_eps", c.nuisance.clip_eps},
          {"max_newton_iters", c.nuisance.max_newton_iters},
          {"newton_tol", c.nuisance.newton_tol},
          {"eta_mode", to_string(c.nuisance.eta_mode)}};
  if (c.nuisance.ridge) nu["ridge"] = *c.nuisance.ridge;
  j["nuisance"] = nu;
  Json perturbations = Json::array();
  for (const auto& p : c.perturbations) {
    perturbations.push_back({{"target", to_string(p.target)}, {"constant", p.constant}, {"exponent", p.exponent}});
  }
  j["perturbations"] = perturbations;
  j["master_seed"] = c.master_seed;
  j["random_sampling"] = c.random_sampling;
  j["expectation"] = expectation_name(c.expectation);
  j["bands"] = {{"coverage_lo", c.coverage_lo},
                {"coverage_hi", c.coverage_hi},
                {"bound_coverage_lo", c.bound_coverage_lo},
                {"slope_lo", c.slope_lo},
                {"slope_hi", c.slope_hi},
                {"efficiency_tolerance", c.efficiency_tolerance},
                {"bias_se_multiple", c.bias_se_multiple},
                {"max_failure_rate", c.max_failure_rate}};
  return j;
}

bool StudyReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const StudyCheck& c) { return c.passed; });
}

Json StudyReport::to_json() const {
  Json records_json = Json::array();
  for (const auto& r : records) records_json.push_back(record_json(r));
  Json checks_json = Json::array();
  for (const auto& c : checks) {
    checks_json.push_back({{"name", c.name}, {"value", c.value}, {"lo", c.lo}, {"hi", c.hi}, {"passed", c.passed}});
  }
  return {{"study", study}, {"passed", passed()}, {"records", records_json}, {"checks", checks_json}, {"notes", notes}};
}

std::string StudyReport::to_csv() const {
  std::ostringstream out;
  bool header = true;
  for (const auto& r : records) {
    const Json j = record_json(r);
    if (header) {
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        out << (first ? "" : ",") << it.key();
        first = false;
      }
      out << '\n';
      header = false;
    }
    bool first = true;
    for (auto it = j.begin(); it != j.end(); ++it) {
      out << (first ? "" : ",");
      first = false;
      if (it->is_string()) {
        out << it->get<std::string>();
      } else if (it->is_number_float()) {
        const double v = it->get<double>();
        if (std::isfinite(v)) out << format_double(v);
      } else {
        out << it->dump();
      }
    }
    out << '\n';
  }
  return out.str();
}

StudyReport run_coverage(const ExperimentConfig& config) {
  config.validate();
  const auto scenario = resolve_scenario(config);
  const OdsContext ctx = make_context(*scenario, config);
  StudyReport report;
  report.study = "coverage";
  report.notes = {{"rho_true", ctx.rho_true},
                  {"gamma_true", ctx.gamma_true},
                  {"rho_low", ctx.range.low},
                  {"rho_high", ctx.range.high},
                  {"identified_set", {ctx.set_min, ctx.set_max}},
                  {"config", experiment_config_to_json(config)}};
  for (std::size_t n : config.sample_sizes) {
    const auto results = replicate(config, n, [&](std::uint64_t seed) { return ods_rep(ctx, n, seed, true); });
    StudyRecord rec = summarize(scenario->name(), "ods", n, ctx.gamma_true, results, true);
    if (const DiscreteDgp* dgp = scenario->discrete()) {
      rec.sigma2 = static_cast<double>(oracle::efficiency_bound_ods(derive_q(*dgp, config.omega), ctx.rho_true));
    }
    const std::string suffix = "_n" + std::to_string(n);
    report.checks.push_back(band("endpoint_coverage" + suffix, rec.coverage, config.coverage_lo, config.coverage_hi));
    report.checks.push_back(band("bound_coverage" + suffix, rec.bound_coverage, config.bound_coverage_lo, 1.0));
    report.records.push_back(rec);
  }
  return report;
}

StudyReport run_rate(const ExperimentConfig& config) {
  config.validate();
  if (config.sample_sizes.size() < 2) throw InvalidArgument("a rate study needs at least two sample sizes");
  const auto scenario = resolve_scenario(config);
  const OdsContext ctx = make_context(*scenario, config);
  StudyReport report;
  report.study = "rate";
  std::vector<double> log_n, log_rmse, log_abs_bias;
  for (std::size_t n : config.sample_sizes) {
    const auto results = replicate(config, n, [&](std::uint64_t seed) { return ods_rep(ctx, n, seed, false); });
    StudyRecord rec = summarize(scenario->name(), "ods", n, ctx.gamma_true, results, false);
    log_n.push_back(std::log(static_cast<double>(n)));
    log_rmse.push_back(std::log(rec.rmse));
    log_abs_bias.push_back(std::log(std::fabs(rec.bias)));
    report.records.push_back(rec);
  }
  const double slope = ols_slope(log_n, log_rmse);
  const double bias_slope = ols_slope(log_n, log_abs_bias);
  Json amplitudes = Json::array();
  for (std::size_t n : config.sample_sizes) {
    Json row{{"n", n}};
    for (const auto& p : config.perturbations) row[to_string(p.target)] = p.amplitude(n);
    amplitudes.push_back(row);
  }
  report.notes = {{"rho_true", ctx.rho_true},
                  {"gamma_true", ctx.gamma_true},
                  {"rmse_slope", slope},
                  {"abs_bias_slope", bias_slope},
                  {"perturbation_amplitudes", amplitudes},
                  {"config", experiment_config_to_json(config)}};
  if (config.expectation == RateExpectation::RootN) {
    report.checks.push_back(band("rmse_slope", slope, config.slope_lo, config.slope_hi));
  } else {
    const StudyRecord& last = report.records.back();
    const double z = std::fabs(last.bias) / last.bias_se;
    report.checks.push_back(band("bias_over_se_n" + std::to_string(last.n), z, config.bias_se_multiple, kInf));
  }
  return report;
}

StudyReport run_efficiency(const ExperimentConfig& config) {
  config.validate();
  const auto scenario = resolve_scenario(config);
  const DiscreteDgp* dgp = scenario->discrete();
  if (!dgp) throw InvalidArgument("efficiency studies need a discrete scenario with a closed-form bound");
  const OdsContext ctx = make_context(*scenario, config);
  const QLaw q = derive_q(*dgp, config.omega);
  const double sigma2_ods = static_cast<double>(oracle::efficiency_bound_ods(q, ctx.rho_true));
  const double sigma2_rs = static_cast<double>(oracle::efficiency_bound_rs(*dgp));

  StudyReport report;
  report.study = "efficiency";
  const std::size_t n = config.sample_sizes.back();
  const std::string suffix = "_n" + std::to_string(n);
  {
    const auto results = replicate(config, n, [&](std::uint64_t seed) { return ods_rep(ctx, n, seed, false); });
    StudyRecord rec = summarize(scenario->name(), "ods", n, ctx.gamma_true, results, false);
    rec.sigma2 = sigma2_ods;
    report.checks.push_back(band("ods_nvar_over_bound" + suffix, rec.n_var / sigma2_ods,
                                 1 - config.efficiency_tolerance, 1 + config.efficiency_tolerance));
    report.records.push_back(rec);
  }
  if (config.random_sampling) {
    std::shared_ptr<const NuisanceModel> truth;
    if (config.nuisance.kind != NuisanceKind::LogisticParametric) truth = scenario->truth_p();
    const double gamma = static_cast<double>(oracle::geometric_or(*dgp));
    const auto results = replicate(config, n, [&](std::uint64_t seed) {
      return random_sampling_rep(*scenario, config, truth, n, seed);
    });
    StudyRecord rec = summarize(scenario->name(), "random_sampling", n, gamma, results, false);
    rec.sigma2 = sigma2_rs;
    report.checks.push_back(band("rs_nvar_over_bound" + suffix, rec.n_var / sigma2_rs,
                                 1 - config.efficiency_tolerance, 1 + config.efficiency_tolerance));
    report.records.push_back(rec);
  }

  // At omega = rho the sampling-correction coefficient is identically 1.
  const QLaw untilted = derive_q(*dgp, dgp->outcome_rate());
  Real worst = 0;
  for (std::size_t x = 0; x < untilted.size(); ++x) {
    const Real c = oracle::sampling_correction(untilted, untilted.rho(), x);
    worst = std::max(worst, std::fabs(c - 1));
  }
  report.checks.push_back(band("correction_coefficient_at_rho_eq_omega", static_cast<double>(worst), 0.0,
                               kExactTolerance));
  report.notes = {{"rho_true", ctx.rho_true},
                  {"gamma_true", ctx.gamma_true},
                  {"sigma2_ods", sigma2_ods},
                  {"sigma2_rs", sigma2_rs},
                  {"sigma2_ods_at_omega_eq_rho",
                   static_cast<double>(oracle::efficiency_bound_ods(untilted, untilted.rho()))},
                  {"config", experiment_config_to_json(config)}};
  return report;
}

}  // namespace godds
