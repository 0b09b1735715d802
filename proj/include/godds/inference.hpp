#pragma once

#include <span>
#include <vector>

#include "godds/estimator.hpp"
#include "godds/nuisance.hpp"

namespace godds {

double centered_phi(const Observation& row, const NuisanceFit& fit, int a, int y, double omega_hat,
                    double psi_hat_ay);

// Per-row centered contrasts d1 = phi_11 - phi_01 and d0 = phi_10 - phi_00,
// so that the pseudo-outcome at any rho is gamma * (rho d1 + (1 - rho) d0).
struct CenteredContrasts {
  std::vector<double> d1;
  std::vector<double> d0;
};

CenteredContrasts centered_contrasts(const Dataset& data, std::span<const RowNuisance> rows,
                                     const PsiCells& cells, double clip_eps);

struct PseudoOutcomes {
  std::vector<double> zeta;
  double rho_used = 0;
  double gamma_used = 0;
};

PseudoOutcomes pseudo_outcomes(const CenteredContrasts& contrasts, double rho, double gamma_hat_at_rho);
PseudoOutcomes pseudo_outcomes(const Dataset& data, std::span<const NuisanceFit> fits, const CrossFitPlan& plan,
                               const PsiCells& cells, double rho, double gamma_hat_at_rho);

struct ConfidenceInterval {
  double estimate = 0;
  double lo = 0;
  double hi = 0;
  double alpha = 0;
  std::size_t n = 0;
  double variance_hat = 0;  // 1/(n-1) sample variance of the pseudo-outcomes
};

ConfidenceInterval ci_endpoint(const PseudoOutcomes& pseudo, double gamma_hat_at_rho, double alpha);

struct BoundInterval {
  double l_alpha = 0;
  double u_alpha = 0;
  double rho_low = 0;
  double rho_high = 0;
  double gamma_min = 0;
  double gamma_max = 0;
  ConfidenceInterval low_endpoint;   // at rho_low
  ConfidenceInterval high_endpoint;  // at rho_high
};

// Pseudo-outcomes must be evaluated at the first and last grid points of `est`.
BoundInterval ci_bound(const GammaEstimate& est, const PseudoOutcomes& pseudo_low,
                       const PseudoOutcomes& pseudo_high, double alpha);

}  // namespace godds
