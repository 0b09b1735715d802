#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "godds/numeric.hpp"

namespace godds {

inline constexpr Real kDefaultOverlapEps = 1e-6L;
inline constexpr Real kMinStratumMass = 1e-12L;

// One covariate stratum of a finite-support population law P.
struct Stratum {
  std::string label;
  std::vector<double> features;  // left empty: DiscreteDgp assigns one-hot
  Real p_x = 0;                  // P(X = x)
  Real pi1 = 0;                  // P(A = 1 | X = x)
  Real nu1 = 0;                  // P(Y = 1 | X = x, A = 1)
  Real nu0 = 0;                  // P(Y = 1 | X = x, A = 0)
};

// Finite-support joint law of (X, A, Y) under the target population P.
// Immutable once constructed; validation happens in the constructor.
class DiscreteDgp {
 public:
  explicit DiscreteDgp(std::vector<Stratum> strata, Real eps = kDefaultOverlapEps);

  std::size_t size() const { return strata_.size(); }
  std::size_t feature_dim() const { return strata_.front().features.size(); }
  const std::vector<Stratum>& strata() const { return strata_; }
  const Stratum& stratum(std::size_t x) const { return strata_.at(x); }
  Real eps() const { return eps_; }

  Real p_x(std::size_t x) const { return strata_.at(x).p_x; }
  Real pi(int a, std::size_t x) const;
  Real nu(int a, std::size_t x) const;
  Real joint(std::size_t x, int a, int y) const;  // P(x, a, y)
  Real outcome_rate() const;                      // rho = P(Y = 1)

  std::optional<std::size_t> find(std::span<const double> features) const;

 private:
  std::vector<Stratum> strata_;
  Real eps_;
};

// Outcome-dependent (Bernoulli-sampled) law Q derived from P by the tilt
// Q(x,a,y) = P(x,a,y) * omega/rho for y = 1 and * (1-omega)/(1-rho) for y = 0.
class QLaw {
 public:
  std::size_t size() const { return strata_.size(); }
  const std::vector<Stratum>& strata() const { return strata_; }
  const Stratum& stratum(std::size_t x) const { return strata_.at(x); }
  Real omega() const { return omega_; }
  Real rho() const { return rho_; }
  Real eps() const { return eps_; }

  Real mass(std::size_t x, int a, int y) const;  // Q(x, a, y)
  Real q_x(std::size_t x) const;                 // Q(X = x)
  Real q_y(int y) const;                         // omega_y, summed from the cells
  Real mu(int a, std::size_t x) const;           // Q(Y = 1 | x, a)
  Real pi(int a, std::size_t x) const;           // Q(A = a | x)
  Real eta(std::size_t x) const;                 // Q(Y = 1 | x)
  Real eta_y(int y, std::size_t x) const;        // Q(Y = y | x)
  Real x_given_y(std::size_t x, int y) const;    // Q(X = x | Y = y)
  Real xa_given_y(std::size_t x, int a, int y) const;

  std::optional<std::size_t> find(std::span<const double> features) const;

 private:
  friend QLaw derive_q(const DiscreteDgp& dgp, Real omega, std::optional<Real> rho);
  QLaw() = default;

  std::vector<Stratum> strata_;
  std::vector<std::array<Real, 4>> mass_;  // index a * 2 + y
  Real omega_ = 0;
  Real rho_ = 0;
  Real eps_ = 0;
};

// Exact tilted law. `rho`, when given, must agree with P(Y=1) of `dgp`.
QLaw derive_q(const DiscreteDgp& dgp, Real omega, std::optional<Real> rho = std::nullopt);

enum class SamplingScheme { RandomSampling, OutcomeDependent };

std::string to_string(SamplingScheme scheme);

struct Observation {
  std::span<const double> x;
  int a;
  int y;
};

// Immutable table of (x, a, y) rows plus sampling metadata.
class Dataset {
 public:
  Dataset(std::size_t dim, std::vector<double> features, std::vector<int> a, std::vector<int> y,
          SamplingScheme scheme, std::optional<double> omega_design, std::uint64_t seed);

  std::size_t size() const { return a_.size(); }
  std::size_t dim() const { return dim_; }
  SamplingScheme scheme() const { return scheme_; }
  std::optional<double> omega_design() const { return omega_design_; }
  std::uint64_t seed() const { return seed_; }

  std::span<const double> x(std::size_t i) const {
    return {features_.data() + i * dim_, dim_};
  }
  int a(std::size_t i) const { return a_[i]; }
  int y(std::size_t i) const { return y_[i]; }
  Observation row(std::size_t i) const { return {x(i), a_[i], y_[i]}; }

  std::span<const double> features() const { return features_; }
  std::span<const int> treatments() const { return a_; }
  std::span<const int> outcomes() const { return y_; }

  // Row contents only; metadata is not compared.
  bool same_rows(const Dataset& other) const;

 private:
  std::size_t dim_;
  std::vector<double> features_;
  std::vector<int> a_;
  std::vector<int> y_;
  SamplingScheme scheme_;
  std::optional<double> omega_design_;
  std::uint64_t seed_;
};

// n iid rows from P.
Dataset draw_random(const DiscreteDgp& dgp, std::size_t n, std::uint64_t seed);

// n rows drawn as Y ~ Bernoulli(omega), then (X, A) ~ P(X, A | Y).
Dataset draw_outcome_dependent(const DiscreteDgp& dgp, std::size_t n, double omega,
                               std::uint64_t seed);

// Two-stratum collapsibility example (Female / Male) with constant OR(x) = 1/45.
// Propensity is 0.5 in both strata.
DiscreteDgp worked_example();

// Three strata with heterogeneous OR(x) in {0.5, 1, 3}.
DiscreteDgp het3();

// Random law for property tests: strata count uniform in [min_strata, max_strata],
// pi1 / nu1 / nu0 uniform in [lo, hi], masses bounded away from zero.
DiscreteDgp random_dgp(std::uint64_t seed, std::size_t min_strata, std::size_t max_strata,
                       Real lo = 0.05L, Real hi = 0.95L);

}  // namespace godds
