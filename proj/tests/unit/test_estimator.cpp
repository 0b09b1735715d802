#include <doctest.h>

#include <cmath>

#include "godds/error.hpp"
#include "godds/estimator.hpp"
#include "godds/numeric.hpp"
#include "godds/oracle.hpp"

using namespace godds;

namespace {

NuisanceFit oracle_fit(const QLaw& q, int fold = 0, double eps = 1e-6) {
  return NuisanceFit(truth_from_q(q), eps, EtaMode::Composed, fold);
}

std::vector<NuisanceFit> oracle_fits(const QLaw& q, int k) {
  std::vector<NuisanceFit> fits;
  for (int f = 0; f < k; ++f) fits.push_back(oracle_fit(q, f, 0.01));
  return fits;
}

// Score written out from its definition, independent of the library.
double reference_phi(double mu, double pi, double eta, int a_obs, int y_obs, int a, int y, double w) {
  const double rate = y == 1 ? w : 1 - w;
  double v = y_obs == y ? std::log(mu / (1 - mu)) / rate : 0.0;
  if (a_obs == a) v += (y == 1 ? eta / w : (1 - eta) / (1 - w)) * (y_obs - mu) / (pi * mu * (1 - mu));
  return v;
}

}  // namespace

TEST_CASE("score on single rows") {
  RowNuisance nu{0.3, 0.6, 0.4, 0.6, 0.0};
  nu.eta = nu.pi1 * nu.mu1 + nu.pi0 * nu.mu0;
  CHECK(phi_from_nuisance(nu, 0, 0, 1, 1, 0.5, 0.01) == 0.0);
  CHECK(phi_from_nuisance(nu, 1, 1, 0, 0, 0.5, 0.01) == 0.0);
  for (int ao = 0; ao < 2; ++ao) {
    for (int yo = 0; yo < 2; ++yo) {
      for (int a = 0; a < 2; ++a) {
        for (int y = 0; y < 2; ++y) {
          const double expect = reference_phi(nu.mu(a), nu.pi(a), nu.eta, ao, yo, a, y, 0.3);
          CHECK(phi_from_nuisance(nu, ao, yo, a, y, 0.3, 0.01) == doctest::Approx(expect).epsilon(1e-14));
        }
      }
    }
  }
  RowNuisance bad = nu;
  bad.pi1 = 1e-9;
  CHECK_THROWS_AS(phi_from_nuisance(bad, 1, 1, 1, 1, 0.5, 0.01), NumericalError);
}

TEST_CASE("only the logit term survives off the scored arm") {
  RowNuisance nu{0.25, 0.5, 0.5, 0.5, 0.375};
  const double w = 0.4;
  CHECK(phi_from_nuisance(nu, 0, 1, 1, 1, w, 0.01) == doctest::Approx(std::log(0.25 / 0.75) / w).epsilon(1e-14));
  // mu_0 = 1/2: logit vanishes and only the augmentation remains.
  CHECK(phi_from_nuisance(nu, 0, 1, 0, 1, w, 0.01) == doctest::Approx(0.375 / w * 0.5 / (0.5 * 0.25)).epsilon(1e-14));
}

TEST_CASE("exact nuisances reproduce psi by enumeration") {
  for (const auto& dgp : {worked_example(), het3(), random_dgp(3, 4, 4, 0.1L, 0.9L)}) {
    for (Real omega : {0.3L, 0.5L}) {
      const QLaw q = derive_q(dgp, omega);
      const NuisanceFit fit = oracle_fit(q);
      for (int a = 0; a < 2; ++a) {
        for (int y = 0; y < 2; ++y) {
          Real total = 0;
          for (std::size_t x = 0; x < q.size(); ++x) {
            for (int ao = 0; ao < 2; ++ao) {
              for (int yo = 0; yo < 2; ++yo) {
                const Observation row{q.stratum(x).features, ao, yo};
                total += q.mass(x, ao, yo) * phi_uncentered(row, fit, a, y, static_cast<double>(omega));
              }
            }
          }
          CHECK(std::fabs(static_cast<double>(total - oracle::psi_exact(q, a, y))) < 1e-12);
        }
      }
    }
  }
}

TEST_CASE("oracle cross-fit psi cells match the exact values at large n") {
  const DiscreteDgp dgp = worked_example();
  const QLaw q = derive_q(dgp, 0.5L);
  const std::size_t n = 100000;
  const Dataset data = draw_outcome_dependent(dgp, n, 0.5, 314);
  const auto plan = CrossFitPlan::make(n, 2, 15);
  const auto fits = oracle_fits(q, 2);
  const PsiCells cells = estimate_psi_cells(data, fits, plan, 0.5);
  for (int a = 0; a < 2; ++a) {
    for (int y = 0; y < 2; ++y) {
      std::vector<double> scores(n);
      for (std::size_t i = 0; i < n; ++i) {
        const auto x = data.x(i);
        const double mu = static_cast<double>(q.mu(a, *q.find(x)));
        const double pi = static_cast<double>(q.pi(a, *q.find(x)));
        const double eta = static_cast<double>(q.eta(*q.find(x)));
        scores[i] = reference_phi(mu, pi, eta, data.a(i), data.y(i), a, y, 0.5);
      }
      const double se = std::sqrt(sample_variance(scores) / static_cast<double>(n));
      CHECK(std::fabs(cells.at(a, y) - static_cast<double>(oracle::psi_exact(q, a, y))) < 3 * se);
      CHECK(std::fabs(cells.at(a, y) - mean(scores)) < 1e-12);
    }
  }
}

TEST_CASE("flat outcome regressions give psi near zero") {
  const DiscreteDgp flat({{"a", {}, 0.5L, 0.3L, 0.5L, 0.5L}, {"b", {}, 0.5L, 0.7L, 0.5L, 0.5L}});
  const QLaw q = derive_q(flat, 0.5L);
  const std::size_t n = 20000;
  const Dataset data = draw_outcome_dependent(flat, n, 0.5, 1);
  const auto plan = CrossFitPlan::make(n, 2, 2);
  const PsiCells cells = estimate_psi_cells(data, oracle_fits(q, 2), plan, estimate_omega(data).value);
  // Only the mean-zero augmentation remains; its sd is about 2 / sqrt(0.3 * 0.25).
  for (double v : cells.psi_hat) CHECK(std::fabs(v) < 5 * 8.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("duplicating every row leaves the estimate unchanged") {
  const DiscreteDgp dgp = het3();
  const QLaw q = derive_q(dgp, 0.5L);
  const Dataset data = draw_outcome_dependent(dgp, 500, 0.5, 6);
  const auto plan = CrossFitPlan::make(data.size(), 2, 7);
  std::vector<double> x2;
  std::vector<int> a2, y2, folds2;
  for (int copy = 0; copy < 2; ++copy) {
    x2.insert(x2.end(), data.features().begin(), data.features().end());
    a2.insert(a2.end(), data.treatments().begin(), data.treatments().end());
    y2.insert(y2.end(), data.outcomes().begin(), data.outcomes().end());
  }
  const Dataset doubled(data.dim(), x2, a2, y2, data.scheme(), data.omega_design(), 0);
  const auto fits = oracle_fits(q, 2);
  const auto rows = predict_rows(data, plan, fits);
  std::vector<RowNuisance> rows2(rows.begin(), rows.end());
  rows2.insert(rows2.end(), rows.begin(), rows.end());
  const PsiCells one = estimate_psi_cells(data, rows, 0.5, 0.01);
  const PsiCells two = estimate_psi_cells(doubled, rows2, 0.5, 0.01);
  for (std::size_t c = 0; c < 4; ++c) CHECK(std::fabs(one.psi_hat[c] - two.psi_hat[c]) < 1e-12);
  CHECK_THROWS_AS(estimate_psi_cells(doubled, rows, 0.5, 0.01), InvalidArgument);
}

TEST_CASE("row order does not change the estimate") {
  const DiscreteDgp dgp = het3();
  const QLaw q = derive_q(dgp, 0.5L);
  const Dataset data = draw_outcome_dependent(dgp, 1000, 0.5, 60);
  const auto plan = CrossFitPlan::make(data.size(), 2, 61);
  const auto rows = predict_rows(data, plan, oracle_fits(q, 2));
  std::vector<double> xr;
  std::vector<int> ar, yr;
  std::vector<RowNuisance> rr;
  for (std::size_t k = data.size(); k-- > 0;) {
    const auto x = data.x(k);
    xr.insert(xr.end(), x.begin(), x.end());
    ar.push_back(data.a(k));
    yr.push_back(data.y(k));
    rr.push_back(rows[k]);
  }
  const Dataset reversed(data.dim(), xr, ar, yr, data.scheme(), data.omega_design(), 0);
  const PsiCells one = estimate_psi_cells(data, rows, 0.5, 0.01);
  const PsiCells two = estimate_psi_cells(reversed, rr, 0.5, 0.01);
  for (std::size_t c = 0; c < 4; ++c) CHECK(std::fabs(one.psi_hat[c] - two.psi_hat[c]) < 1e-12);
}

TEST_CASE("cross-fit logistic estimates are deterministic") {
  const Dataset data = draw_outcome_dependent(het3(), 3000, 0.5, 31);
  const auto plan = CrossFitPlan::make(data.size(), 2, 32);
  const double w = estimate_omega(data).value;
  const PsiCells one = estimate_psi_cells(data, fit_nuisances(data, plan, NuisanceSpec{}), plan, w);
  const PsiCells two = estimate_psi_cells(data, fit_nuisances(data, plan, NuisanceSpec{}), plan, w);
  CHECK(one.psi_hat == two.psi_hat);
}

TEST_CASE("gamma curve from psi cells") {
  PsiCells null_cells;
  null_cells.psi_hat = {0.2, -0.4, 0.2, -0.4};
  const auto grid = make_rho_grid(0.1, 0.9, 9);
  const auto null_est = estimate_gamma(null_cells, grid);
  for (double g : null_est.gamma_hat) CHECK(std::fabs(g - 1) < 1e-15);

  const DiscreteDgp dgp = worked_example();
  const QLaw q = derive_q(dgp, 0.5L);
  PsiCells exact_cells;
  for (int a = 0; a < 2; ++a) {
    for (int y = 0; y < 2; ++y) exact_cells.psi_hat[static_cast<std::size_t>(a * 2 + y)] = static_cast<double>(oracle::psi_exact(q, a, y));
  }
  const double rho = static_cast<double>(dgp.outcome_rate());
  const std::vector<double> at_truth{rho};
  CHECK(std::fabs(estimate_gamma(exact_cells, at_truth).gamma_hat[0] - 1.0 / 45) < 1e-12);

  PsiCells cells;
  cells.psi_hat = {-0.3, 0.7, 0.4, 0.1};
  const auto est = estimate_gamma(cells, grid);
  CHECK(std::fabs(est.log_slope - ((0.1 - 0.7) - (0.4 + 0.3))) < 1e-15);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(std::fabs(std::log(est.gamma_hat[i]) - (est.log_intercept + grid[i] * est.log_slope)) < 1e-12);
    CHECK(est.gamma_hat[i] > 0);
  }

  CHECK_THROWS_AS(estimate_gamma(cells, std::vector<double>{}), InvalidArgument);
  CHECK_THROWS_AS(estimate_gamma(cells, std::vector<double>{0.5, 0.2}), InvalidArgument);
  CHECK_THROWS_AS(estimate_gamma(cells, std::vector<double>{0.0, 0.2}), InvalidArgument);
  CHECK(make_rho_grid(0.3, 0.3).size() == 1);
  CHECK(make_rho_grid(0.1, 0.9).size() == kDefaultRhoPoints);
  CHECK_THROWS_AS(make_rho_grid(0.5, 0.2), InvalidArgument);
}

TEST_CASE("random-sampling estimator") {
  const DiscreteDgp dgp = worked_example();
  const std::size_t n = 100000;
  const Dataset data = draw_random(dgp, n, 404);
  const auto plan = CrossFitPlan::make(n, 2, 405);
  std::vector<NuisanceFit> fits;
  for (int f = 0; f < 2; ++f) fits.emplace_back(truth_from_p(dgp), 0.01, EtaMode::Composed, f);
  const auto scores = random_sampling_scores(data, fits, plan);
  const double se = std::sqrt(sample_variance(scores) / static_cast<double>(n));
  const double log_gamma = estimate_log_gamma_random_sampling(data, fits, plan);
  CHECK(std::fabs(log_gamma - std::log(1.0 / 45)) < 3 * se);

  const Dataset ods = draw_outcome_dependent(dgp, 100, 0.5, 1);
  CHECK_THROWS_AS(estimate_log_gamma_random_sampling(ods, fits, CrossFitPlan::make(100, 2, 1)), InvalidArgument);
}

TEST_CASE("random-sampling estimator under a null law with equal outcome regressions") {
  const DiscreteDgp null_law({{"a", {}, 0.4L, 0.3L, 0.2L, 0.2L}, {"b", {}, 0.6L, 0.6L, 0.7L, 0.7L}});
  const std::size_t n = 100000;
  const Dataset data = draw_random(null_law, n, 808);
  const auto plan = CrossFitPlan::make(n, 2, 809);
  std::vector<NuisanceFit> fits;
  for (int f = 0; f < 2; ++f) fits.emplace_back(truth_from_p(null_law), 0.01, EtaMode::Composed, f);
  const auto scores = random_sampling_scores(data, fits, plan);
  const double se = std::sqrt(sample_variance(scores) / static_cast<double>(n));
  CHECK(std::fabs(mean(scores)) < 4 * se);
}
