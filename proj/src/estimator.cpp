#include "godds/estimator.hpp"

#include <cmath>

#include "godds/error.hpp"
#include "godds/numeric.hpp"

namespace godds {
namespace {

void check_omega(double omega_hat) {
  if (!(omega_hat > 0 && omega_hat < 1)) throw InvalidArgument("omega_hat must lie in (0, 1)");
}

void check_binary(int a, int y) {
  if ((a != 0 && a != 1) || (y != 0 && y != 1)) throw InvalidArgument("cell indices must be 0 or 1");
}

}  // namespace

double GammaEstimate::at(double rho) const { return std::exp(log_intercept + rho * log_slope); }

double phi_from_nuisance(const RowNuisance& nu, int a_obs, int y_obs, int a, int y, double omega_hat,
                         double clip_eps) {
  check_binary(a, y);
  const double mu = nu.mu(a);
  const double rate = y == 1 ? omega_hat : 1 - omega_hat;
  double value = y_obs == y ? logit(mu) / rate : 0.0;
  if (a_obs == a) {
    const double denom = nu.pi(a) * mu * (1 - mu);
    if (!(denom >= clip_eps * clip_eps * clip_eps)) {
      throw NumericalError("score denominator below clip_eps^3; nuisances were not clipped");
    }
    const double weight = y == 1 ? nu.eta / omega_hat : (1 - nu.eta) / (1 - omega_hat);
    value += weight * (y_obs - mu) / denom;
  }
  return value;
}

double phi_uncentered(const Observation& row, const NuisanceFit& fit, int a, int y, double omega_hat) {
  check_omega(omega_hat);
  check_binary(row.a, row.y);
  RowNuisance nu;
  nu.mu1 = fit.mu(1, row.x);
  nu.mu0 = fit.mu(0, row.x);
  nu.pi1 = fit.pi(1, row.x);
  nu.pi0 = fit.pi(0, row.x);
  nu.eta = fit.eta(row.x);
  return phi_from_nuisance(nu, row.a, row.y, a, y, omega_hat, fit.clip_eps());
}

PsiCells estimate_psi_cells(const Dataset& data, std::span<const RowNuisance> rows, double omega_hat,
                            double clip_eps) {
  check_omega(omega_hat);
  if (data.size() == 0) throw DataError("cannot estimate from an empty dataset");
  if (rows.size() != data.size()) throw InvalidArgument("fold coverage gap: rows lack out-of-fold predictions");
  std::array<CompensatedSum, 4> sums;
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (int a = 0; a < 2; ++a) {
      for (int y = 0; y < 2; ++y) {
        sums[static_cast<std::size_t>(a * 2 + y)].add(
            phi_from_nuisance(rows[i], data.a(i), data.y(i), a, y, omega_hat, clip_eps));
      }
    }
  }
  PsiCells cells;
  cells.omega_hat = omega_hat;
  for (std::size_t c = 0; c < 4; ++c) {
    cells.psi_hat[c] = sums[c].value() / static_cast<double>(data.size());
    if (!std::isfinite(cells.psi_hat[c])) throw NumericalError("non-finite psi estimate");
  }
  return cells;
}

PsiCells estimate_psi_cells(const Dataset& data, std::span<const NuisanceFit> fits, const CrossFitPlan& plan,
                            double omega_hat) {
  const auto rows = predict_rows(data, plan, fits);
  return estimate_psi_cells(data, rows, omega_hat, fits.front().clip_eps());
}

std::vector<double> make_rho_grid(double lo, double hi, std::size_t points) {
  if (!(lo > 0 && hi < 1 && lo <= hi)) throw InvalidArgument("rho range must satisfy 0 < lo <= hi < 1");
  if (lo == hi) return {lo};
  if (points < 2) throw InvalidArgument("a rho range needs at least 2 grid points");
  std::vector<double> grid(points);
  for (std::size_t i = 0; i < points; ++i) {
    grid[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
  }
  grid.back() = hi;
  return grid;
}

GammaEstimate estimate_gamma(const PsiCells& cells, std::span<const double> rho_grid) {
  if (rho_grid.empty()) throw InvalidArgument("rho grid is empty");
  for (std::size_t i = 0; i < rho_grid.size(); ++i) {
    if (!(rho_grid[i] > 0 && rho_grid[i] < 1)) throw InvalidArgument("rho grid must lie in (0, 1)");
    if (i > 0 && rho_grid[i] < rho_grid[i - 1]) throw InvalidArgument("rho grid must be sorted");
  }
  GammaEstimate est;
  est.cells = cells;
  est.log_intercept = cells.at(1, 0) - cells.at(0, 0);
  est.log_slope = (cells.at(1, 1) - cells.at(0, 1)) - est.log_intercept;
  est.rho_grid.assign(rho_grid.begin(), rho_grid.end());
  for (double rho : rho_grid) est.gamma_hat.push_back(est.at(rho));
  return est;
}

std::vector<double> random_sampling_scores(const Dataset& data, std::span<const NuisanceFit> fits,
                                           const CrossFitPlan& plan) {
  if (data.scheme() != SamplingScheme::RandomSampling) {
    throw InvalidArgument("random-sampling estimator refuses outcome-dependent data; use the ODS estimator");
  }
  if (data.size() == 0) throw DataError("cannot estimate from an empty dataset");
  const auto rows = predict_rows(data, plan, fits);
  std::vector<double> scores(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const RowNuisance& r = rows[i];
    const int a = data.a(i);
    const int y = data.y(i);
    double s = logit(r.mu1) - logit(r.mu0);
    if (a == 1) {
      s += (y - r.mu1) / (r.mu1 * (1 - r.mu1) * r.pi1);
    } else {
      s -= (y - r.mu0) / (r.mu0 * (1 - r.mu0) * r.pi0);
    }
    scores[i] = s;
  }
  return scores;
}

double estimate_log_gamma_random_sampling(const Dataset& data, std::span<const NuisanceFit> fits,
                                          const CrossFitPlan& plan) {
  return mean(random_sampling_scores(data, fits, plan));
}

}  // namespace godds
