#pragma once

#include <array>
#include <span>
#include <vector>

#include "godds/dgp.hpp"
#include "godds/nuisance.hpp"

namespace godds {

inline constexpr std::size_t kDefaultRhoPoints = 101;

struct PsiCells {
  std::array<double, 4> psi_hat{};  // index a * 2 + y
  double omega_hat = 0;

  double at(int a, int y) const { return psi_hat.at(static_cast<std::size_t>(a * 2 + y)); }
};

struct GammaEstimate {
  std::vector<double> rho_grid;
  std::vector<double> gamma_hat;
  double log_slope = 0;
  double log_intercept = 0;
  PsiCells cells;

  // exp(log_intercept + rho * log_slope) at any rho, on or off the grid.
  double at(double rho) const;
};

// Uncentered score for cell (a, y) given nuisance values at the row's x.
double phi_from_nuisance(const RowNuisance& nu, int a_obs, int y_obs, int a, int y, double omega_hat,
                         double clip_eps);

double phi_uncentered(const Observation& row, const NuisanceFit& fit, int a, int y, double omega_hat);

PsiCells estimate_psi_cells(const Dataset& data, std::span<const NuisanceFit> fits, const CrossFitPlan& plan,
                            double omega_hat);
PsiCells estimate_psi_cells(const Dataset& data, std::span<const RowNuisance> rows, double omega_hat,
                            double clip_eps);

// `points` evenly spaced values over [lo, hi]; a single point when lo == hi.
std::vector<double> make_rho_grid(double lo, double hi, std::size_t points = kDefaultRhoPoints);

GammaEstimate estimate_gamma(const PsiCells& cells, std::span<const double> rho_grid);

// Per-row uncentered scores of log gamma under random sampling.
std::vector<double> random_sampling_scores(const Dataset& data, std::span<const NuisanceFit> fits,
                                           const CrossFitPlan& plan);
double estimate_log_gamma_random_sampling(const Dataset& data, std::span<const NuisanceFit> fits,
                                          const CrossFitPlan& plan);

}  // namespace godds
