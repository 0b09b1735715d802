#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "godds/dgp.hpp"
#include "godds/logistic.hpp"

namespace godds {

inline constexpr double kDefaultClipEps = 0.01;

// Raw (unclipped) nuisance predictions on the sampled law.
class NuisanceModel {
 public:
  virtual ~NuisanceModel() = default;
  virtual double mu(int a, std::span<const double> x) const = 0;  // P(Y=1 | x, a)
  virtual double pi1(std::span<const double> x) const = 0;        // P(A=1 | x)
  // Direct outcome regression P(Y=1 | x), when the model has one.
  virtual std::optional<double> eta(std::span<const double> /*x*/) const { return std::nullopt; }
};

// Conditionals of an exact tilted law, looked up by stratum features.
std::shared_ptr<const NuisanceModel> truth_from_q(const QLaw& q);
// Conditionals of P itself, for random-sampling data.
std::shared_ptr<const NuisanceModel> truth_from_p(const DiscreteDgp& dgp);

using FeatureFunction = std::function<double(std::span<const double>)>;

// Truth given as functions of the features (continuous covariates).
std::shared_ptr<const NuisanceModel> truth_from_functions(FeatureFunction mu1, FeatureFunction mu0,
                                                         FeatureFunction pi1, FeatureFunction eta);

enum class NuisanceKind { LogisticParametric, OracleTruth, PerturbedOracle };
enum class EtaMode { Composed, Direct };
enum class NuisanceTarget { Mu1, Mu0, Pi, Eta };

// Names used in configs and on the command line: logistic, oracle, perturbed;
// composed, direct; mu1, mu0, pi, eta.
NuisanceKind parse_nuisance_kind(const std::string& name);
EtaMode parse_eta_mode(const std::string& name);
NuisanceTarget parse_nuisance_target(const std::string& name);
std::string to_string(NuisanceKind kind);
std::string to_string(EtaMode mode);
std::string to_string(NuisanceTarget target);

struct Perturbation {
  NuisanceTarget target = NuisanceTarget::Mu1;
  double amplitude = 0.0;
  FeatureFunction shape;  // empty means the constant 1
};

struct NuisanceSpec {
  NuisanceKind kind = NuisanceKind::LogisticParametric;
  double clip_eps = kDefaultClipEps;
  std::optional<double> ridge;  // unset: 1e-4 times the rows in each regression
  int max_newton_iters = 100;
  double newton_tol = 1e-10;
  EtaMode eta_mode = EtaMode::Composed;
  std::vector<Perturbation> perturbations;  // applied for PerturbedOracle

  void validate() const;
};

// Clipped nuisance predictions for one fold. Cheap to copy; the underlying
// model is shared and immutable.
class NuisanceFit {
 public:
  NuisanceFit(std::shared_ptr<const NuisanceModel> model, double clip_eps, EtaMode eta_mode, int fold);

  double mu(int a, std::span<const double> x) const;
  double pi(int a, std::span<const double> x) const;
  double eta(std::span<const double> x) const;

  int fold() const { return fold_; }
  double clip_eps() const { return clip_eps_; }
  EtaMode eta_mode() const { return eta_mode_; }
  bool boundary_warning() const { return boundary_warning_; }
  const NuisanceModel& model() const { return *model_; }

 private:
  friend NuisanceFit perturb(const NuisanceFit&, NuisanceTarget, double, FeatureFunction,
                             const Dataset*);

  double clip(double p) const;
  double shifted(NuisanceTarget target, double p, std::span<const double> x) const;
  double raw_mu(int a, std::span<const double> x) const;
  double raw_pi1(std::span<const double> x) const;

  std::shared_ptr<const NuisanceModel> model_;
  double clip_eps_;
  EtaMode eta_mode_;
  int fold_;
  std::array<double, 4> amplitude_{};
  std::array<FeatureFunction, 4> shape_{};
  bool boundary_warning_ = false;
};

// Logit-shifts one target by amplitude * shape(x). With a probe dataset, the
// result is flagged when every probed value of the target sits on a clip boundary.
NuisanceFit perturb(const NuisanceFit& fit, NuisanceTarget target, double amplitude,
                    FeatureFunction shape = {}, const Dataset* probe = nullptr);

class CrossFitPlan {
 public:
  // Balanced random partition of n rows into k folds.
  static CrossFitPlan make(std::size_t n, int k, std::uint64_t seed);

  int k() const { return k_; }
  std::uint64_t seed() const { return seed_; }
  std::size_t size() const { return fold_.size(); }
  int fold(std::size_t row) const { return fold_[row]; }
  std::span<const int> assignment() const { return fold_; }

 private:
  int k_ = 0;
  std::uint64_t seed_ = 0;
  std::vector<int> fold_;
};

// One fit per fold; fit f sees only rows outside fold f. `truth` is required
// for the oracle kinds and ignored otherwise.
std::vector<NuisanceFit> fit_nuisances(const Dataset& data, const CrossFitPlan& plan,
                                       const NuisanceSpec& spec,
                                       std::shared_ptr<const NuisanceModel> truth = nullptr);

struct OmegaEstimate {
  double value = 0;
  bool clipped = false;
};

OmegaEstimate estimate_omega(const Dataset& data, double clip_eps = kDefaultClipEps);

// Out-of-fold predictions evaluated once per row.
struct RowNuisance {
  double mu1 = 0;
  double mu0 = 0;
  double pi1 = 0;
  double pi0 = 0;
  double eta = 0;

  double mu(int a) const { return a == 1 ? mu1 : mu0; }
  double pi(int a) const { return a == 1 ? pi1 : pi0; }
};

std::vector<RowNuisance> predict_rows(const Dataset& data, const CrossFitPlan& plan,
                                      std::span<const NuisanceFit> fits);

}  // namespace godds
