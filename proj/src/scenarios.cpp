#include <cmath>
#include <numbers>

#include "godds/error.hpp"
#include "godds/harness.hpp"
#include "godds/numeric.hpp"
#include "godds/oracle.hpp"
#include "godds/rng.hpp"

namespace godds {
namespace {

class DiscreteScenario final : public Scenario {
 public:
  DiscreteScenario(std::string name, DiscreteDgp dgp)
      : name_(std::move(name)), dgp_(std::move(dgp)), reference_(derive_q(dgp_, 0.5L)) {}

  std::string name() const override { return name_; }
  double rho() const override { return static_cast<double>(dgp_.outcome_rate()); }
  double gamma_at(double rho_prime) const override {
    return static_cast<double>(oracle::geometric_or_partial(reference_, rho_prime));
  }
  Dataset draw_ods(std::size_t n, double omega, std::uint64_t seed) const override {
    return draw_outcome_dependent(dgp_, n, omega, seed);
  }
  Dataset draw_random(std::size_t n, std::uint64_t seed) const override {
    return godds::draw_random(dgp_, n, seed);
  }
  std::shared_ptr<const NuisanceModel> truth_q(double omega) const override {
    return truth_from_q(derive_q(dgp_, omega));
  }
  std::shared_ptr<const NuisanceModel> truth_p() const override { return truth_from_p(dgp_); }
  const DiscreteDgp* discrete() const override { return &dgp_; }

 private:
  std::string name_;
  DiscreteDgp dgp_;
  QLaw reference_;
};

// X ~ N(0, 1), P(A=1|x) = expit(0.2 + 0.5x), P(Y=1|x,a) = expit(-1 + 0.8a + 0.6x + 0.4ax).
class LogisticScenario final : public Scenario {
 public:
  LogisticScenario() {
    // Simpson's rule on [-12, 12]; the integrands are smooth and decay like the normal density.
    constexpr int kIntervals = 24000;
    constexpr double lo = -12.0;
    constexpr double hi = 12.0;
    const double h = (hi - lo) / kIntervals;
    Real mass1 = 0, log_or1 = 0, log_or0 = 0;
    for (int i = 0; i <= kIntervals; ++i) {
      const double x = lo + h * i;
      const Real w = (i == 0 || i == kIntervals) ? 1 : (i % 2 == 1 ? 4 : 2);
      const Real density = std::exp(-0.5 * x * x) / std::sqrt(2 * std::numbers::pi);
      const Real eta = p_eta(x);
      mass1 += w * density * eta;
      log_or1 += w * density * eta * log_or(x);
      log_or0 += w * density * (1 - eta) * log_or(x);
    }
    mass1 *= h / 3;
    log_or1 *= h / 3;
    log_or0 *= h / 3;
    rho_ = static_cast<double>(mass1);
    mean_log_or1_ = static_cast<double>(log_or1 / mass1);
    mean_log_or0_ = static_cast<double>(log_or0 / (1 - mass1));
  }

  std::string name() const override { return "logistic_cont"; }
  double rho() const override { return rho_; }
  double gamma_at(double r) const override { return std::exp(r * mean_log_or1_ + (1 - r) * mean_log_or0_); }

  Dataset draw_ods(std::size_t n, double omega, std::uint64_t seed) const override {
    if (!(omega > 0 && omega < 1)) throw InvalidArgument("omega must lie in (0, 1)");
    std::vector<double> xs(n);
    std::vector<int> as(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
      CounterRng rng = row_stream(seed, i);
      const int y = rng.bernoulli(omega) ? 1 : 0;
      // Rejection from P(x, a) until the simulated outcome matches y.
      for (;;) {
        const double x = rng.normal();
        const int a = rng.bernoulli(pi1(x)) ? 1 : 0;
        if ((rng.bernoulli(nu(a, x)) ? 1 : 0) == y) {
          xs[i] = x;
          as[i] = a;
          break;
        }
      }
      ys[i] = y;
    }
    return Dataset(1, std::move(xs), std::move(as), std::move(ys), SamplingScheme::OutcomeDependent, omega, seed);
  }

  Dataset draw_random(std::size_t n, std::uint64_t seed) const override {
    std::vector<double> xs(n);
    std::vector<int> as(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
      CounterRng rng = row_stream(seed, i);
      xs[i] = rng.normal();
      as[i] = rng.bernoulli(pi1(xs[i])) ? 1 : 0;
      ys[i] = rng.bernoulli(nu(as[i], xs[i])) ? 1 : 0;
    }
    return Dataset(1, std::move(xs), std::move(as), std::move(ys), SamplingScheme::RandomSampling, std::nullopt,
                   seed);
  }

  std::shared_ptr<const NuisanceModel> truth_q(double omega) const override {
    const double r = rho_;
    const double up = omega / r;
    const double down = (1 - omega) / (1 - r);
    const double shift = std::log(up / down);
    auto mu1 = [shift](std::span<const double> x) { return expit(logit(nu(1, x[0])) + shift); };
    auto mu0 = [shift](std::span<const double> x) { return expit(logit(nu(0, x[0])) + shift); };
    auto tilt = [up, down](int a, double x) { return nu(a, x) * up + (1 - nu(a, x)) * down; };
    auto pi = [tilt](std::span<const double> x) {
      const double t1 = pi1(x[0]) * tilt(1, x[0]);
      const double t0 = (1 - pi1(x[0])) * tilt(0, x[0]);
      return t1 / (t1 + t0);
    };
    auto eta = [tilt, up](std::span<const double> x) {
      const double t1 = pi1(x[0]) * tilt(1, x[0]);
      const double t0 = (1 - pi1(x[0])) * tilt(0, x[0]);
      const double cases = (pi1(x[0]) * nu(1, x[0]) + (1 - pi1(x[0])) * nu(0, x[0])) * up;
      return cases / (t1 + t0);
    };
    return truth_from_functions(mu1, mu0, pi, eta);
  }

  std::shared_ptr<const NuisanceModel> truth_p() const override {
    return truth_from_functions([](std::span<const double> x) { return nu(1, x[0]); },
                                [](std::span<const double> x) { return nu(0, x[0]); },
                                [](std::span<const double> x) { return pi1(x[0]); },
                                [](std::span<const double> x) { return p_eta(x[0]); });
  }

 private:
  static double pi1(double x) { return expit(0.2 + 0.5 * x); }
  static double nu(int a, double x) { return expit(-1.0 + 0.8 * a + 0.6 * x + 0.4 * a * x); }
  static double p_eta(double x) { return pi1(x) * nu(1, x) + (1 - pi1(x)) * nu(0, x); }
  static double log_or(double x) { return 0.8 + 0.4 * x; }

  double rho_ = 0;
  double mean_log_or1_ = 0;
  double mean_log_or0_ = 0;
};

}  // namespace

std::unique_ptr<Scenario> make_discrete_scenario(std::string name, DiscreteDgp dgp) {
  return std::make_unique<DiscreteScenario>(std::move(name), std::move(dgp));
}

std::unique_ptr<Scenario> make_builtin_scenario(const std::string& name) {
  if (name == "worked_example_ods") return make_discrete_scenario(name, worked_example());
  if (name == "het3") return make_discrete_scenario(name, het3());
  if (name == "logistic_cont") return std::make_unique<LogisticScenario>();
  throw InvalidArgument("unknown scenario '" + name + "' (expected worked_example_ods, het3 or logistic_cont)");
}

}  // namespace godds
