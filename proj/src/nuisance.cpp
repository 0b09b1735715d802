#include "godds/nuisance.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "godds/error.hpp"
#include "godds/numeric.hpp"
#include "godds/rng.hpp"

namespace godds {
namespace {

std::size_t target_index(NuisanceTarget t) { return static_cast<std::size_t>(t); }

class QTruth final : public NuisanceModel {
 public:
  explicit QTruth(QLaw q) : q_(std::move(q)) {}
  double mu(int a, std::span<const double> x) const override {
    return static_cast<double>(q_.mu(a, locate(x)));
  }
  double pi1(std::span<const double> x) const override {
    return static_cast<double>(q_.pi(1, locate(x)));
  }
  std::optional<double> eta(std::span<const double> x) const override {
    return static_cast<double>(q_.eta(locate(x)));
  }

 private:
  std::size_t locate(std::span<const double> x) const {
    const auto s = q_.find(x);
    if (!s) throw DataError("row features match no stratum of the truth law");
    return *s;
  }
  QLaw q_;
};

class PTruth final : public NuisanceModel {
 public:
  explicit PTruth(DiscreteDgp dgp) : dgp_(std::move(dgp)) {}
  double mu(int a, std::span<const double> x) const override {
    return static_cast<double>(dgp_.nu(a, locate(x)));
  }
  double pi1(std::span<const double> x) const override {
    return static_cast<double>(dgp_.pi(1, locate(x)));
  }
  std::optional<double> eta(std::span<const double> x) const override {
    const std::size_t s = locate(x);
    return static_cast<double>(dgp_.pi(1, s) * dgp_.nu(1, s) + dgp_.pi(0, s) * dgp_.nu(0, s));
  }

 private:
  std::size_t locate(std::span<const double> x) const {
    const auto s = dgp_.find(x);
    if (!s) throw DataError("row features match no stratum of the truth law");
    return *s;
  }
  DiscreteDgp dgp_;
};

class FunctionTruth final : public NuisanceModel {
 public:
  FunctionTruth(FeatureFunction mu1, FeatureFunction mu0, FeatureFunction pi1, FeatureFunction eta)
      : mu1_(std::move(mu1)), mu0_(std::move(mu0)), pi1_(std::move(pi1)), eta_(std::move(eta)) {}
  double mu(int a, std::span<const double> x) const override { return a == 1 ? mu1_(x) : mu0_(x); }
  double pi1(std::span<const double> x) const override { return pi1_(x); }
  std::optional<double> eta(std::span<const double> x) const override {
    if (!eta_) return std::nullopt;
    return eta_(x);
  }

 private:
  FeatureFunction mu1_, mu0_, pi1_, eta_;
};

class LogisticNuisance final : public NuisanceModel {
 public:
  LogisticNuisance(LogisticModel mu1, LogisticModel mu0, LogisticModel pi1, std::optional<LogisticModel> eta)
      : mu1_(std::move(mu1)), mu0_(std::move(mu0)), pi1_(std::move(pi1)), eta_(std::move(eta)) {}
  double mu(int a, std::span<const double> x) const override {
    return a == 1 ? mu1_.predict(x) : mu0_.predict(x);
  }
  double pi1(std::span<const double> x) const override { return pi1_.predict(x); }
  std::optional<double> eta(std::span<const double> x) const override {
    if (!eta_) return std::nullopt;
    return eta_->predict(x);
  }

 private:
  LogisticModel mu1_, mu0_, pi1_;
  std::optional<LogisticModel> eta_;
};

}  // namespace

std::shared_ptr<const NuisanceModel> truth_from_q(const QLaw& q) { return std::make_shared<QTruth>(q); }

std::shared_ptr<const NuisanceModel> truth_from_p(const DiscreteDgp& dgp) {
  return std::make_shared<PTruth>(dgp);
}

std::shared_ptr<const NuisanceModel> truth_from_functions(FeatureFunction mu1, FeatureFunction mu0,
                                                         FeatureFunction pi1, FeatureFunction eta) {
  if (!mu1 || !mu0 || !pi1) throw InvalidArgument("truth functions for mu1, mu0 and pi1 are required");
  return std::make_shared<FunctionTruth>(std::move(mu1), std::move(mu0), std::move(pi1), std::move(eta));
}

NuisanceKind parse_nuisance_kind(const std::string& name) {
  if (name == "logistic") return NuisanceKind::LogisticParametric;
  if (name == "oracle") return NuisanceKind::OracleTruth;
  if (name == "perturbed") return NuisanceKind::PerturbedOracle;
  throw InvalidArgument("unknown nuisance kind '" + name + "' (expected logistic, oracle or perturbed)");
}

EtaMode parse_eta_mode(const std::string& name) {
  if (name == "composed") return EtaMode::Composed;
  if (name == "direct") return EtaMode::Direct;
  throw InvalidArgument("unknown eta mode '" + name + "' (expected composed or direct)");
}

NuisanceTarget parse_nuisance_target(const std::string& name) {
  if (name == "mu1") return NuisanceTarget::Mu1;
  if (name == "mu0") return NuisanceTarget::Mu0;
  if (name == "pi") return NuisanceTarget::Pi;
  if (name == "eta") return NuisanceTarget::Eta;
  throw InvalidArgument("unknown perturbation target '" + name + "' (expected mu1, mu0, pi or eta)");
}

std::string to_string(NuisanceKind kind) {
  switch (kind) {
    case NuisanceKind::LogisticParametric: return "logistic";
    case NuisanceKind::OracleTruth: return "oracle";
    case NuisanceKind::PerturbedOracle: return "perturbed";
  }
  return "?";
}

std::string to_string(EtaMode mode) { return mode == EtaMode::Composed ? "composed" : "direct"; }

std::string to_string(NuisanceTarget target) {
  switch (target) {
    case NuisanceTarget::Mu1: return "mu1";
    case NuisanceTarget::Mu0: return "mu0";
    case NuisanceTarget::Pi: return "pi";
    case NuisanceTarget::Eta: return "eta";
  }
  return "?";
}

void NuisanceSpec::validate() const {
  if (!(clip_eps > 0 && clip_eps < 0.5)) throw InvalidArgument("clip_eps must lie in (0, 0.5)");
  if (ridge && !(*ridge >= 0)) throw InvalidArgument("ridge must be nonnegative");
  if (!(newton_tol > 0)) throw InvalidArgument("newton_tol must be positive");
  if (max_newton_iters < 1) throw InvalidArgument("max_newton_iters must be at least 1");
}

NuisanceFit::NuisanceFit(std::shared_ptr<const NuisanceModel> model, double clip_eps, EtaMode eta_mode,
                         int fold)
    : model_(std::move(model)), clip_eps_(clip_eps), eta_mode_(eta_mode), fold_(fold) {
  if (!model_) throw InvalidArgument("nuisance fit needs a model");
  if (!(clip_eps > 0 && clip_eps < 0.5)) throw InvalidArgument("clip_eps must lie in (0, 0.5)");
}

double NuisanceFit::clip(double p) const {
  if (!std::isfinite(p)) throw NumericalError("non-finite nuisance prediction");
  return std::clamp(p, clip_eps_, 1 - clip_eps_);
}

double NuisanceFit::shifted(NuisanceTarget target, double p, std::span<const double> x) const {
  const std::size_t i = target_index(target);
  if (amplitude_[i] == 0) return p;
  const double direction = shape_[i] ? shape_[i](x) : 1.0;
  return expit(logit(p) + amplitude_[i] * direction);
}

double NuisanceFit::raw_mu(int a, std::span<const double> x) const {
  if (a != 0 && a != 1) throw InvalidArgument("treatment arm must be 0 or 1");
  return clip(model_->mu(a, x));
}

double NuisanceFit::raw_pi1(std::span<const double> x) const { return clip(model_->pi1(x)); }

double NuisanceFit::mu(int a, std::span<const double> x) const {
  const double base = raw_mu(a, x);
  return clip(shifted(a == 1 ? NuisanceTarget::Mu1 : NuisanceTarget::Mu0, base, x));
}

double NuisanceFit::pi(int a, std::span<const double> x) const {
  if (a != 0 && a != 1) throw InvalidArgument("treatment arm must be 0 or 1");
  const double p1 = shifted(NuisanceTarget::Pi, raw_pi1(x), x);
  return clip(a == 1 ? p1 : 1 - p1);
}

double NuisanceFit::eta(std::span<const double> x) const {
  double base;
  if (eta_mode_ == EtaMode::Direct) {
    const auto direct = model_->eta(x);
    if (!direct) throw InvalidArgument("nuisance model has no direct outcome regression");
    base = clip(*direct);
  } else {
    const double p1 = raw_pi1(x);
    base = p1 * raw_mu(1, x) + (1 - p1) * raw_mu(0, x);
  }
  return clip(shifted(NuisanceTarget::Eta, base, x));
}

NuisanceFit perturb(const NuisanceFit& fit, NuisanceTarget target, double amplitude, FeatureFunction shape,
                    const Dataset* probe) {
  if (!std::isfinite(amplitude)) throw InvalidArgument("perturbation amplitude must be finite");
  NuisanceFit out = fit;
  const std::size_t i = target_index(target);
  out.amplitude_[i] = amplitude;
  out.shape_[i] = std::move(shape);
  if (probe && amplitude != 0 && probe->size() > 0) {
    const double lo = out.clip_eps_;
    const double hi = 1 - out.clip_eps_;
    bool all_at_boundary = true;
    for (std::size_t r = 0; r < probe->size() && all_at_boundary; ++r) {
      const auto x = probe->x(r);
      double v = 0;
      switch (target) {
        case NuisanceTarget::Mu1: v = out.mu(1, x); break;
        case NuisanceTarget::Mu0: v = out.mu(0, x); break;
        case NuisanceTarget::Pi: v = out.pi(1, x); break;
        case NuisanceTarget::Eta: v = out.eta(x); break;
      }
      all_at_boundary = v <= lo || v >= hi;
    }
    out.boundary_warning_ = out.boundary_warning_ || all_at_boundary;
  }
  return out;
}

CrossFitPlan CrossFitPlan::make(std::size_t n, int k, std::uint64_t seed) {
  if (k < 2) throw InvalidArgument("cross-fitting needs at least 2 folds");
  if (n < static_cast<std::size_t>(k)) throw InvalidArgument("fewer rows than folds");
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  CounterRng rng(derive_seed(seed, 0xf01d));
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(order[i - 1], order[j]);
  }
  CrossFitPlan plan;
  plan.k_ = k;
  plan.seed_ = seed;
  plan.fold_.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) plan.fold_[order[i]] = static_cast<int>(i % static_cast<std::size_t>(k));
  return plan;
}

namespace {

LogisticModel fit_subset(const Dataset& data, const std::vector<std::size_t>& rows, bool label_is_a,
                         const NuisanceSpec& spec) {
  Eigen::MatrixXd design(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(data.dim()));
  std::vector<int> labels(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto x = data.x(rows[r]);
    for (std::size_t j = 0; j < x.size(); ++j) {
      design(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = x[j];
    }
    labels[r] = label_is_a ? data.a(rows[r]) : data.y(rows[r]);
  }
  LogisticOptions options;
  options.ridge = spec.ridge ? *spec.ridge : 1e-4 * static_cast<double>(rows.size());
  options.max_iters = spec.max_newton_iters;
  options.tol = spec.newton_tol;
  return fit_logistic(design, labels, options);
}

}  // namespace

std::vector<NuisanceFit> fit_nuisances(const Dataset& data, const CrossFitPlan& plan, const NuisanceSpec& spec,
                                       std::shared_ptr<const NuisanceModel> truth) {
  spec.validate();
  if (plan.size() != data.size()) throw InvalidArgument("cross-fit plan does not match the dataset");
  std::vector<NuisanceFit> fits;
  fits.reserve(static_cast<std::size_t>(plan.k()));

  if (spec.kind != NuisanceKind::LogisticParametric) {
    if (!truth) throw InvalidArgument("oracle nuisances need the truth law");
    for (int f = 0; f < plan.k(); ++f) {
      NuisanceFit fit(truth, spec.clip_eps, spec.eta_mode, f);
      if (spec.kind == NuisanceKind::PerturbedOracle) {
        for (const Perturbation& p : spec.perturbations) fit = perturb(fit, p.target, p.amplitude, p.shape);
      }
      fits.push_back(std::move(fit));
    }
    return fits;
  }

  for (int f = 0; f < plan.k(); ++f) {
    std::vector<std::size_t> train, treated, control;
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (plan.fold(i) == f) continue;
      train.push_back(i);
      (data.a(i) == 1 ? treated : control).push_back(i);
    }
    if (treated.empty() || control.empty()) {
      throw DataError("training data for fold " + std::to_string(f) + " has no rows with a=" +
                      (treated.empty() ? "1" : "0"));
    }
    auto mu1 = fit_subset(data, treated, false, spec);
    auto mu0 = fit_subset(data, control, false, spec);
    auto pi1 = fit_subset(data, train, true, spec);
    std::optional<LogisticModel> eta;
    if (spec.eta_mode == EtaMode::Direct) eta = fit_subset(data, train, false, spec);
    auto model = std::make_shared<LogisticNuisance>(std::move(mu1), std::move(mu0), std::move(pi1), std::move(eta));
    fits.emplace_back(std::move(model), spec.clip_eps, spec.eta_mode, f);
  }
  return fits;
}

OmegaEstimate estimate_omega(const Dataset& data, double clip_eps) {
  if (data.size() == 0) throw DataError("cannot estimate the outcome rate of an empty dataset");
  if (!(clip_eps > 0 && clip_eps < 0.5)) throw InvalidArgument("clip_eps must lie in (0, 0.5)");
  std::size_t cases = 0;
  for (int y : data.outcomes()) cases += static_cast<std::size_t>(y);
  const double raw = static_cast<double>(cases) / static_cast<double>(data.size());
  const double value = std::clamp(raw, clip_eps, 1 - clip_eps);
  return {value, value != raw};
}

std::vector<RowNuisance> predict_rows(const Dataset& data, const CrossFitPlan& plan,
                                      std::span<const NuisanceFit> fits) {
  if (plan.size() != data.size()) throw InvalidArgument("cross-fit plan does not match the dataset");
  if (static_cast<int>(fits.size()) != plan.k()) throw InvalidArgument("one fit per fold is required");
  for (int f = 0; f < plan.k(); ++f) {
    if (fits[static_cast<std::size_t>(f)].fold() != f) throw InvalidArgument("fits are not ordered by fold");
  }
  std::vector<RowNuisance> out(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const NuisanceFit& fit = fits[static_cast<std::size_t>(plan.fold(i))];
    const auto x = data.x(i);
    RowNuisance& r = out[i];
    r.mu1 = fit.mu(1, x);
    r.mu0 = fit.mu(0, x);
    r.pi1 = fit.pi(1, x);
    r.pi0 = fit.pi(0, x);
    r.eta = fit.eta(x);
  }
  return out;
}

}  // namespace godds
