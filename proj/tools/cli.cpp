#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <openssl/evp.h>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include "godds/aggregation.hpp"
#include "godds/error.hpp"
#include "godds/estimator.hpp"
#include "godds/harness.hpp"
#include "godds/inference.hpp"
#include "godds/io.hpp"
#include "godds/nuisance.hpp"
#include "godds/oracle.hpp"

namespace godds::cli {
namespace {

constexpr const char* kVersion = "0.1.0";

struct BandViolated {
  Json document;
};

struct Inputs {
  std::vector<std::string> paths;
  void add(const std::string& p) {
    if (!p.empty()) paths.push_back(p);
  }
};

double d(Real v) { return static_cast<double>(v); }

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream s;
  s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return s.str();
}

Json resolved_flags(const CLI::App& sub) {
  Json flags = Json::object();
  for (const CLI::Option* opt : sub.get_options()) {
    if (opt->get_lnames().empty() || opt->get_lnames().front() == "help") continue;
    const std::string name = opt->get_lnames().front();
    if (opt->count() > 0) {
      const auto& results = opt->results();
      if (opt->get_expected_max() == 0) {
        flags[name] = true;
      } else if (results.size() == 1) {
        flags[name] = results.front();
      } else {
        flags[name] = results;
      }
    } else if (!opt->get_default_str().empty()) {
      flags[name] = opt->get_default_str();
    }
  }
  return flags;
}

// Options shared by estimate and bound.
struct EstimateOptions {
  std::string data;
  std::string scheme = "ods";
  std::optional<double> rho_min;
  std::optional<double> rho_max;
  std::size_t rho_points = kDefaultRhoPoints;
  double alpha = 0.05;
  std::string nuisance = "logistic";
  int folds = 2;
  double clip_eps = kDefaultClipEps;
  std::optional<double> ridge;
  std::string eta_mode = "composed";
  std::uint64_t seed = 1;
  std::string truth_dgp;
  std::optional<double> truth_omega;
  std::vector<std::string> perturb_target;
  std::vector<double> perturb_amplitude;
};

void add_estimate_options(CLI::App* sub, EstimateOptions& o, bool rho_required) {
  sub->add_option("--data", o.data, "CSV with header y,a,x1..xd")->required()->check(CLI::ExistingFile);
  auto* lo = sub->add_option("--rho-min", o.rho_min, "lower end of the rho range")->check(CLI::Range(0.0, 1.0));
  auto* hi = sub->add_option("--rho-max", o.rho_max, "upper end of the rho range")->check(CLI::Range(0.0, 1.0));
  if (rho_required) {
    lo->required();
    hi->required();
  }
  sub->add_option("--rho-points", o.rho_points, "grid points over the rho range")->capture_default_str();
  sub->add_option("--alpha", o.alpha, "miscoverage level")->capture_default_str();
  sub->add_option("--nuisance", o.nuisance, "logistic, oracle or perturbed")
      ->check(CLI::IsMember({"logistic", "oracle", "perturbed"}))
      ->capture_default_str();
  sub->add_option("--folds", o.folds, "cross-fitting folds")->check(CLI::Range(2, 1000))->capture_default_str();
  sub->add_option("--clip-eps", o.clip_eps, "probability clipping level")->capture_default_str();
  sub->add_option("--ridge", o.ridge, "ridge penalty (default 1e-4 times the rows per regression)");
  sub->add_option("--eta-mode", o.eta_mode, "composed or direct")
      ->check(CLI::IsMember({"composed", "direct"}))
      ->capture_default_str();
  sub->add_option("--seed", o.seed, "seed for the fold assignment")->capture_default_str();
  sub->add_option("--truth-dgp", o.truth_dgp, "DGP config used by the oracle nuisance kinds")
      ->check(CLI::ExistingFile);
  sub->add_option("--truth-omega", o.truth_omega, "design outcome rate of the truth law");
  sub->add_option("--perturb-target", o.perturb_target, "mu1, mu0, pi or eta (repeatable)");
  sub->add_option("--perturb-amplitude", o.perturb_amplitude, "logit shift per target (repeatable)");
}

struct EstimateRun {
  Dataset data;
  OmegaEstimate omega;
  GammaEstimate est;
  CenteredContrasts contrasts;
  std::size_t n;
};

EstimateRun run_estimate(const EstimateOptions& o, double lo, double hi, Inputs& inputs,
                         spdlog::logger& log) {
  if (!(o.alpha > 0 && o.alpha < 1)) throw InvalidArgument("--alpha must lie in (0, 1)");
  NuisanceSpec spec;
  spec.kind = parse_nuisance_kind(o.nuisance);
  spec.clip_eps = o.clip_eps;
  spec.ridge = o.ridge;
  spec.eta_mode = parse_eta_mode(o.eta_mode);
  spec.validate();
  if (o.perturb_target.size() != o.perturb_amplitude.size()) {
    throw InvalidArgument("--perturb-target and --perturb-amplitude must be given in pairs");
  }
  if (!o.perturb_target.empty() && spec.kind != NuisanceKind::PerturbedOracle) {
    throw InvalidArgument("perturbations need --nuisance perturbed");
  }
  for (std::size_t i = 0; i < o.perturb_target.size(); ++i) {
    spec.perturbations.push_back({parse_nuisance_target(o.perturb_target[i]), o.perturb_amplitude[i], {}});
  }
  if (o.scheme != "ods") throw InvalidArgument("only outcome-dependent data are supported here");

  inputs.add(o.data);
  Dataset data = read_dataset_csv(o.data, SamplingScheme::OutcomeDependent);
  log.info("read {} rows with {} features from {}", data.size(), data.dim(), o.data);

  std::shared_ptr<const NuisanceModel> truth;
  if (spec.kind != NuisanceKind::LogisticParametric) {
    if (o.truth_dgp.empty() || !o.truth_omega) {
      throw InvalidArgument("oracle nuisances need --truth-dgp and --truth-omega");
    }
    inputs.add(o.truth_dgp);
    truth = truth_from_q(derive_q(load_dgp(o.truth_dgp), *o.truth_omega));
  }
  const CrossFitPlan plan = CrossFitPlan::make(data.size(), o.folds, o.seed);
  const auto fits = fit_nuisances(data, plan, spec, truth);
  const auto rows = predict_rows(data, plan, fits);
  const OmegaEstimate omega = estimate_omega(data, spec.clip_eps);
  if (omega.clipped) log.warn("outcome rate clipped to {}", omega.value);
  const PsiCells cells = estimate_psi_cells(data, rows, omega.value, spec.clip_eps);
  const auto grid = make_rho_grid(lo, hi, o.rho_points);
  GammaEstimate est = estimate_gamma(cells, grid);
  CenteredContrasts contrasts = centered_contrasts(data, rows, cells, spec.clip_eps);
  const std::size_t n = data.size();
  return {std::move(data), omega, std::move(est), std::move(contrasts), n};
}

Json psi_json(const PsiCells& cells) {
  return {{"a0y0", cells.at(0, 0)}, {"a0y1", cells.at(0, 1)}, {"a1y0", cells.at(1, 0)}, {"a1y1", cells.at(1, 1)}};
}

Json ci_json(const ConfidenceInterval& ci, double rho) {
  return {{"rho", rho},         {"estimate", ci.estimate}, {"lo", ci.lo},
          {"hi", ci.hi},        {"alpha", ci.alpha},       {"n", ci.n},
          {"variance_hat", ci.variance_hat}};
}

BoundInterval bound_of(const EstimateRun& r, double alpha) {
  const auto& est = r.est;
  return ci_bound(est, pseudo_outcomes(r.contrasts, est.rho_grid.front(), est.gamma_hat.front()),
                  pseudo_outcomes(r.contrasts, est.rho_grid.back(), est.gamma_hat.back()), alpha);
}

Json cmd_estimate(const EstimateOptions& o, Inputs& inputs, spdlog::logger& log) {
  const double lo = o.rho_min.value_or(o.clip_eps);
  const double hi = o.rho_max.value_or(1 - o.clip_eps);
  const EstimateRun r = run_estimate(o, lo, hi, inputs, log);
  Json curve = Json::array();
  for (std::size_t i = 0; i < r.est.rho_grid.size(); ++i) {
    const double rho = r.est.rho_grid[i];
    const double g = r.est.gamma_hat[i];
    const ConfidenceInterval ci = ci_endpoint(pseudo_outcomes(r.contrasts, rho, g), g, o.alpha);
    curve.push_back({{"rho", rho}, {"gamma_hat", g}, {"ci_lo", ci.lo}, {"ci_hi", ci.hi}});
  }
  const BoundInterval b = bound_of(r, o.alpha);
  return {{"n", r.n},
          {"omega_hat", r.omega.value},
          {"omega_clipped", r.omega.clipped},
          {"psi", psi_json(r.est.cells)},
          {"log_intercept", r.est.log_intercept},
          {"log_slope", r.est.log_slope},
          {"curve", curve},
          {"bound", {{"l", b.l_alpha}, {"u", b.u_alpha}}}};
}

Json cmd_bound(const EstimateOptions& o, Inputs& inputs, spdlog::logger& log) {
  if (*o.rho_min > *o.rho_max) throw InvalidArgument("--rho-min must not exceed --rho-max");
  EstimateOptions endpoints = o;
  endpoints.rho_points = 2;
  const EstimateRun r = run_estimate(endpoints, *o.rho_min, *o.rho_max, inputs, log);
  const BoundInterval b = bound_of(r, o.alpha);
  return {{"n", r.n},
          {"omega_hat", r.omega.value},
          {"psi", psi_json(r.est.cells)},
          {"rho_low", b.rho_low},
          {"rho_high", b.rho_high},
          {"gamma_min", b.gamma_min},
          {"gamma_max", b.gamma_max},
          {"l_alpha", b.l_alpha},
          {"u_alpha", b.u_alpha},
          {"endpoint_cis", {ci_json(b.low_endpoint, b.rho_low), ci_json(b.high_endpoint, b.rho_high)}}};
}

DiscreteDgp discrete_source(const std::string& dgp_file, const std::string& scenario, Inputs& inputs) {
  if (!dgp_file.empty()) {
    inputs.add(dgp_file);
    return load_dgp(dgp_file);
  }
  if (scenario == "worked_example_ods" || scenario == "worked_example") return worked_example();
  if (scenario == "het3") return het3();
  throw InvalidArgument("unknown discrete scenario '" + scenario + "' (expected worked_example_ods or het3)");
}

Json cmd_oracle(const std::string& dgp_file, const std::string& scenario, double omega, double rho_min,
                double rho_max, std::size_t points, Inputs& inputs) {
  const DiscreteDgp dgp = discrete_source(dgp_file, scenario, inputs);
  const oracle::EstimandReport rep = oracle::estimand_report(dgp, omega);
  const QLaw q = derive_q(dgp, omega);
  Json conditional = Json::object();
  for (const auto& [label, value] : rep.or_conditional) conditional[label] = d(value);
  const auto grid = make_rho_grid(rho_min, rho_max, points);
  std::vector<Real> real_grid(grid.begin(), grid.end());
  const oracle::PartialIdCurve curve = oracle::partial_id_curve(q, real_grid);
  Json curve_json = Json::array();
  for (std::size_t i = 0; i < curve.rho_grid.size(); ++i) {
    curve_json.push_back({{"rho", d(curve.rho_grid[i])},
                          {"gamma", d(curve.gamma_of_rho[i])},
                          {"alpha", d(curve.alpha_of_rho[i])},
                          {"or_population", d(curve.or_pop_of_rho[i])},
                          {"efficiency_bound_ods", d(oracle::efficiency_bound_ods(q, curve.rho_grid[i]))}});
  }
  const oracle::OdsBoundTerms terms = oracle::efficiency_bound_ods_terms(q, dgp.outcome_rate());
  return {{"strata", dgp.size()},
          {"rho", d(rep.rho)},
          {"omega", d(rep.omega)},
          {"or_conditional", conditional},
          {"or_population", d(rep.or_population)},
          {"risk_ratio", d(rep.risk_ratio)},
          {"alpha", d(rep.alpha)},
          {"gamma", d(rep.gamma)},
          {"psi",
           {{"a0y0", d(rep.psi.at(0, 0))},
            {"a0y1", d(rep.psi.at(0, 1))},
            {"a1y0", d(rep.psi.at(1, 0))},
            {"a1y1", d(rep.psi.at(1, 1))}}},
          {"log_gamma_intercept", d(rep.psi.log_intercept())},
          {"log_gamma_slope", d(rep.psi.log_slope())},
          {"partial_id_curve", curve_json},
          {"efficiency_bound_ods_at_rho",
           {{"var_psi", d(terms.var_psi)},
            {"var_psi_star", d(terms.var_psi_star)},
            {"cov_psi_psi_star", d(terms.cov_psi_psi_star)},
            {"sampling_term", d(terms.sampling_term)},
            {"bound", d(terms.bound)}}},
          {"efficiency_bound_rs", d(oracle::efficiency_bound_rs(dgp))},
          {"ard_bound", d(oracle::ard_bound(dgp))}};
}

Json cmd_example() {
  const DiscreteDgp dgp = worked_example();
  const EffectSummary s = summarize_effects(dgp);
  Json table = Json::array();
  for (const auto& st : s.strata) {
    table.push_back({{"stratum", st.label},
                     {"p_x", d(st.p_x)},
                     {"risk_treated", d(st.nu1)},
                     {"risk_control", d(st.nu0)},
                     {"odds_ratio", d(st.odds_ratio)},
                     {"risk_ratio", d(st.risk_ratio)}});
  }
  return {{"table", table},
          {"marginal",
           {{"risk_treated", d(s.marginal_risk1)},
            {"risk_control", d(s.marginal_risk0)},
            {"odds_ratio", d(s.population_or)},
            {"risk_ratio", d(s.marginal_rr)},
            {"arithmetic_odds_ratio", d(s.arithmetic_or)},
            {"geometric_odds_ratio", d(s.geometric_or)},
            {"geometric_marginal_odds_treated", d(s.marginal_odds_geometric1)},
            {"geometric_marginal_odds_control", d(s.marginal_odds_geometric0)}}},
          {"residuals",
           {{"geometric", d(s.residuals.geometric_residual)},
            {"arithmetic", d(s.residuals.arithmetic_residual)},
            {"arithmetic_relative", d(s.residuals.arithmetic_relative)},
            {"risk_ratio", d(s.residuals.rr_residual)}}}};
}

struct StudyOptions {
  std::string config;
  std::optional<std::size_t> reps;
  std::optional<std::uint64_t> seed;
  std::string csv;
};

Json cmd_study(const std::string& which, const StudyOptions& o, Inputs& inputs, spdlog::logger& log) {
  Json config_json = Json::object();
  if (!o.config.empty()) {
    inputs.add(o.config);
    config_json = read_json_file(o.config);
  }
  if (o.reps) config_json["replications"] = *o.reps;
  if (o.seed) config_json["master_seed"] = *o.seed;
  if (which == "rate" && !config_json.contains("sample_sizes")) {
    config_json["sample_sizes"] = {2000, 8000, 32000};
  }
  if (which == "efficiency" && !config_json.contains("sample_sizes")) config_json["sample_sizes"] = {10000};
  if (which != "coverage" && !config_json.contains("nuisance")) config_json["nuisance"] = {{"kind", "oracle"}};
  ExperimentConfig config = experiment_config_from_json(config_json);
  if (config.dgp_file) {
    if (config.dgp_file->is_relative() && !o.config.empty()) {
      config.dgp_file = std::filesystem::path(o.config).parent_path() / *config.dgp_file;
    }
    inputs.add(config.dgp_file->string());
  }
  log.info("{} study: {} replications, {} threads", which, config.replications, worker_threads());
  StudyReport report = which == "coverage" ? run_coverage(config)
                       : which == "rate"   ? run_rate(config)
                                           : run_efficiency(config);
  if (!o.csv.empty()) {
    std::ofstream out(o.csv);
    if (!out) throw DataError("cannot open " + o.csv + " for writing");
    out << report.to_csv();
  }
  for (const StudyCheck& c : report.checks) {
    (c.passed ? log.info("check {} = {} in [{}, {}]: pass", c.name, c.value, c.lo, c.hi)
              : log.error("check {} = {} outside [{}, {}]", c.name, c.value, c.lo, c.hi));
  }
  Json doc = report.to_json();
  if (!report.passed()) throw BandViolated{std::move(doc)};
  return doc;
}

Json cmd_simulate(const std::string& dgp_file, const std::string& scenario, std::size_t n,
                  std::optional<double> omega, std::uint64_t seed, const std::string& out_path, Inputs& inputs) {
  std::unique_ptr<Scenario> source;
  if (!dgp_file.empty()) {
    inputs.add(dgp_file);
    source = make_discrete_scenario(std::filesystem::path(dgp_file).stem().string(), load_dgp(dgp_file));
  } else {
    source = make_builtin_scenario(scenario);
  }
  const Dataset data = omega ? source->draw_ods(n, *omega, seed) : source->draw_random(n, seed);
  write_dataset_csv(std::filesystem::path(out_path), data);
  std::size_t cases = 0, treated = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    cases += static_cast<std::size_t>(data.y(i));
    treated += static_cast<std::size_t>(data.a(i));
  }
  Json doc{{"out", out_path},
           {"scenario", source->name()},
           {"scheme", to_string(data.scheme())},
           {"rows", data.size()},
           {"features", data.dim()},
           {"seed", seed},
           {"cases", cases},
           {"treated", treated},
           {"rho_population", source->rho()},
           {"out_sha256", sha256_file(out_path)}};
  doc["omega_design"] = omega ? Json(*omega) : Json(nullptr);
  return doc;
}

}  // namespace

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw Error("sha256 init failed");
  char buf[1 << 15];
  while (in) {
    in.read(buf, sizeof buf);
    if (in.gcount() > 0 && EVP_DigestUpdate(ctx.get(), buf, static_cast<std::size_t>(in.gcount())) != 1) {
      throw Error("sha256 update failed");
    }
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1) throw Error("sha256 final failed");
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return hex.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
  spdlog::logger log("godds", sink);
  log.set_pattern("[%H:%M:%S.%e] [%l] %v");

  CLI::App app{"Geometric odds ratio estimation under outcome-dependent sampling", "godds"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", kVersion);
  std::string log_level = "info";
  app.add_option("--log-level", log_level, "trace, debug, info, warn, error or off")
      ->check(CLI::IsMember({"trace", "debug", "info", "warn", "error", "off"}));

  std::string dgp_file, scenario = "het3", out_path;
  std::size_t n = 1000;
  std::optional<double> omega;
  std::uint64_t seed = 1;
  auto* simulate = app.add_subcommand("simulate", "draw a dataset and write it as CSV");
  simulate->add_option("--dgp", dgp_file, "DGP config file")->check(CLI::ExistingFile);
  simulate->add_option("--scenario", scenario, "builtin scenario")->capture_default_str();
  simulate->add_option("--n", n, "rows")->check(CLI::PositiveNumber)->capture_default_str();
  simulate->add_option("--omega", omega, "design outcome rate; omit for random sampling");
  simulate->add_option("--seed", seed, "dataset seed")->capture_default_str();
  simulate->add_option("--out", out_path, "CSV output path")->required();

  EstimateOptions est_opts, bound_opts;
  auto* estimate = app.add_subcommand("estimate", "estimate the geometric odds ratio curve over rho");
  add_estimate_options(estimate, est_opts, false);
  auto* bound = app.add_subcommand("bound", "confidence interval for the identified set over a rho range");
  add_estimate_options(bound, bound_opts, true);

  std::string oracle_dgp, oracle_scenario = "het3";
  double oracle_omega = 0.5, oracle_lo = 0.05, oracle_hi = 0.95;
  std::size_t oracle_points = 19;
  auto* oracle_cmd = app.add_subcommand("oracle", "closed-form estimands, partial-ID curve and bounds");
  oracle_cmd->add_option("--dgp", oracle_dgp, "DGP config file")->check(CLI::ExistingFile);
  oracle_cmd->add_option("--scenario", oracle_scenario, "builtin discrete scenario")->capture_default_str();
  oracle_cmd->add_option("--omega", oracle_omega, "design outcome rate")->capture_default_str();
  oracle_cmd->add_option("--rho-min", oracle_lo, "curve start")->capture_default_str();
  oracle_cmd->add_option("--rho-max", oracle_hi, "curve end")->capture_default_str();
  oracle_cmd->add_option("--rho-points", oracle_points, "curve points")->capture_default_str();

  auto* example = app.add_subcommand("example", "two-stratum collapsibility example");

  StudyOptions study_opts;
  std::vector<CLI::App*> studies;
  for (const char* name : {"coverage", "rate", "efficiency"}) {
    auto* s = app.add_subcommand(name, std::string("Monte Carlo ") + name + " study");
    s->add_option("--config", study_opts.config, "experiment config (JSON)")->check(CLI::ExistingFile);
    s->add_option("--reps", study_opts.reps, "override the replication count");
    s->add_option("--seed", study_opts.seed, "override the master seed");
    s->add_option("--csv", study_opts.csv, "also write the records as CSV");
    studies.push_back(s);
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, err, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  log.set_level(spdlog::level::from_str(log_level));

  CLI::App* sub = app.get_subcommands().front();
  const auto start = std::chrono::steady_clock::now();
  const std::string started_at = utc_now();
  Inputs inputs;
  Json body;
  int code = kExitOk;
  try {
    if (sub == simulate) {
      body = cmd_simulate(dgp_file, scenario, n, omega, seed, out_path, inputs);
    } else if (sub == estimate) {
      body = cmd_estimate(est_opts, inputs, log);
    } else if (sub == bound) {
      body = cmd_bound(bound_opts, inputs, log);
    } else if (sub == oracle_cmd) {
      body = cmd_oracle(oracle_dgp, oracle_scenario, oracle_omega, oracle_lo, oracle_hi, oracle_points, inputs);
    } else if (sub == example) {
      body = cmd_example();
    } else {
      try {
        body = cmd_study(sub->get_name(), study_opts, inputs, log);
      } catch (BandViolated& v) {
        body = std::move(v.document);
        code = kExitBandViolated;
      }
    }
  } catch (const InvalidArgument& e) {
    log.error("{}", e.what());
    err << sub->help();
    return kExitUsage;
  } catch (const std::exception& e) {
    log.error("{}", e.what());
    return kExitFailure;
  }

  Json digests = Json::array();
  for (const auto& p : inputs.paths) digests.push_back({{"path", p}, {"sha256", sha256_file(p)}});
  Json manifest{{"subcommand", sub->get_name()},
                {"flags", resolved_flags(*sub)},
                {"inputs", digests},
                {"version", kVersion},
                {"started_at", started_at},
                {"wall_clock_seconds",
                 std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()}};
  if (sub == simulate) manifest["master_seed"] = seed;
  if (sub == estimate || sub == bound) manifest["master_seed"] = (sub == estimate ? est_opts : bound_opts).seed;
  if (body.contains("notes") && body["notes"].contains("config")) {
    manifest["master_seed"] = body["notes"]["config"]["master_seed"];
  }
  Json doc{{"manifest", manifest}};
  for (auto it = body.begin(); it != body.end(); ++it) doc[it.key()] = it.value();
  out << dump_json(doc) << '\n';
  return code;
}

}  // namespace godds::cli
