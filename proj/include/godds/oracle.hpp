#pragma once

// Closed-form estimands and efficiency bounds on finite-support laws, computed
// in extended precision. Everything here is ground truth for the estimators.

#include <array>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "godds/dgp.hpp"
#include "godds/numeric.hpp"

namespace godds::oracle {

// psi_{a,y} = E_Q[logit(mu_a(X)) | Y = y], stored at index a * 2 + y.
struct PsiTable {
  std::array<Real, 4> cells{};
  Real at(int a, int y) const { return cells.at(static_cast<std::size_t>(a * 2 + y)); }
  // Coefficients of the affine map rho -> log gamma(rho).
  Real log_intercept() const { return at(1, 0) - at(0, 0); }
  Real log_slope() const { return (at(1, 1) - at(0, 1)) - log_intercept(); }
};

struct EstimandReport {
  std::vector<std::pair<std::string, Real>> or_conditional;
  Real or_population = 0;
  Real risk_ratio = 0;  // marginal E[Y^1] / E[Y^0]
  Real alpha = 0;       // arithmetic aggregation E[OR(X)]
  Real gamma = 0;       // geometric aggregation exp(E[log OR(X)])
  Real rho = 0;
  Real omega = 0;
  PsiTable psi;  // under the law tilted to `omega`
};

struct PartialIdCurve {
  std::vector<Real> rho_grid;
  std::vector<Real> gamma_of_rho;
  std::vector<Real> alpha_of_rho;
  std::vector<Real> or_pop_of_rho;
};

// nu_a(x; rho). At rho in {0, 1} the algebraic limit is returned and flagged.
struct PartialRisk {
  Real value = 0;
  bool at_boundary = false;
};

Real conditional_or(const DiscreteDgp& dgp, std::size_t x);
// From Q alone through the symmetry of the odds ratio.
Real conditional_or(const QLaw& q, std::size_t x);

Real marginal_risk(const DiscreteDgp& dgp, int arm);  // E[Y^arm]
Real population_or(const DiscreteDgp& dgp);
Real marginal_risk_ratio(const DiscreteDgp& dgp);

Real arithmetic_or(const DiscreteDgp& dgp);
// rho in [0, 1].
Real arithmetic_or_partial(const QLaw& q, Real rho);

Real geometric_or(const DiscreteDgp& dgp);
// rho in [0, 1].
Real geometric_or_partial(const QLaw& q, Real rho);

PartialRisk nu_from_q(const QLaw& q, Real rho, std::size_t x, int a);
Real population_or_partial(const QLaw& q, Real rho);

Real psi_exact(const QLaw& q, int a, int y);
PsiTable psi_table(const QLaw& q);

// (rho - omega) eta(x) / (omega (1 - omega)) + (1 - rho) / (1 - omega).
Real sampling_correction(const QLaw& q, Real rho, std::size_t x);

// Pieces of the outcome-dependent efficiency bound at a given rho.
struct OdsBoundTerms {
  Real var_psi = 0;          // var(Psi(X, Y))
  Real var_psi_star = 0;     // var(Psi*(Y))
  Real cov_psi_psi_star = 0;
  Real sampling_term = 0;    // E[(sum_a 1/(pi_a mu_a (1 - mu_a))) * correction^2]
  Real var_if_log_gamma = 0;
  Real gamma = 0;
  Real bound = 0;            // gamma^2 * var_if_log_gamma
};

OdsBoundTerms efficiency_bound_ods_terms(const QLaw& q, Real rho);
Real efficiency_bound_ods(const QLaw& q, Real rho);

// Centered efficient influence function of log gamma(rho) at cell (x, a, y).
Real influence_log_gamma(const QLaw& q, Real rho, std::size_t x, int a, int y);

// E_Q[IF^2] by enumeration of every (x, a, y) cell.
Real influence_second_moment(const QLaw& q, Real rho);

Real efficiency_bound_rs(const DiscreteDgp& dgp);
Real ard_bound(const DiscreteDgp& dgp);

EstimandReport estimand_report(const DiscreteDgp& dgp, Real omega);
PartialIdCurve partial_id_curve(const QLaw& q, std::span<const Real> rho_grid);

}  // namespace godds::oracle
