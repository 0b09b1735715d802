#include <doctest.h>

#include <cmath>

#include "godds/error.hpp"
#include "godds/oracle.hpp"
#include "support/exact.hpp"

using namespace godds;
using exact::frac;
using exact::to_real;

namespace {

bool close(Real a, Real b, Real tol = 1e-12L) { return std::fabs(a - b) <= tol; }

DiscreteDgp single(Real pi, Real nu1, Real nu0) { return DiscreteDgp({{"only", {}, 1.0L, pi, nu1, nu0}}); }

// Heterogeneous law with a constant odds ratio c in every stratum.
DiscreteDgp constant_or(std::uint64_t seed, Real c) {
  const DiscreteDgp base = random_dgp(seed, 3, 6, 0.2L, 0.8L);
  std::vector<Stratum> s = base.strata();
  for (auto& st : s) {
    const Real o = c * st.nu0 / (1 - st.nu0);
    st.nu1 = o / (1 + o);
    st.features.clear();
  }
  return DiscreteDgp(s);
}

}  // namespace

TEST_CASE("worked example conditional odds ratios and marginal effects") {
  const DiscreteDgp dgp = worked_example();
  const auto law = exact::Law::worked_example();
  CHECK(law.conditional_or(0) == frac(1, 45));
  CHECK(law.conditional_or(1) == frac(1, 45));
  CHECK(law.risk(1) == frac(4, 39));
  CHECK(law.risk(0) == frac(27, 35));
  CHECK(law.population_or() == frac(32, 945));
  CHECK(law.risk(1) / law.risk(0) == frac(140, 1053));

  CHECK(close(oracle::conditional_or(dgp, 0), 1.0L / 45));
  CHECK(close(oracle::conditional_or(dgp, 1), 1.0L / 45));
  CHECK(close(oracle::marginal_risk(dgp, 1), 4.0L / 39));
  CHECK(close(oracle::marginal_risk(dgp, 0), 27.0L / 35));
  CHECK(close(oracle::population_or(dgp), 32.0L / 945));
  CHECK(close(oracle::marginal_risk_ratio(dgp), 140.0L / 1053));
  CHECK(close(oracle::arithmetic_or(dgp), 1.0L / 45));
  CHECK(close(oracle::geometric_or(dgp), 1.0L / 45));
}

TEST_CASE("conditional odds ratios survive outcome-dependent tilting") {
  const DiscreteDgp dgp = worked_example();
  const QLaw q = derive_q(dgp, 0.5L);
  const exact::Tilted t(exact::Law::worked_example(), frac(1, 2));
  CHECK(t.odds_ratio(0) == frac(1, 45));
  CHECK(t.odds_ratio(1) == frac(1, 45));
  CHECK(close(oracle::conditional_or(q, 0), 1.0L / 45));
  CHECK(close(oracle::conditional_or(q, 1), 1.0L / 45));
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const DiscreteDgp r = random_dgp(seed, 2, 5);
    const QLaw rq = derive_q(r, 0.3L);
    for (std::size_t x = 0; x < r.size(); ++x) {
      CHECK(close(oracle::conditional_or(rq, x), oracle::conditional_or(r, x), 1e-12L * oracle::conditional_or(r, x)));
    }
  }
  CHECK_THROWS(oracle::conditional_or(dgp, 5));
}

TEST_CASE("population odds ratio edge cases") {
  const DiscreteDgp flat({{"a", {}, 0.5L, 0.3L, 0.4L, 0.2L}, {"b", {}, 0.5L, 0.6L, 0.4L, 0.2L}});
  CHECK(close(oracle::population_or(flat), oracle::conditional_or(flat, 0)));
}

TEST_CASE("arithmetic and geometric aggregation, full and partial") {
  const DiscreteDgp sym({{"a", {}, 0.5L, 0.5L, 2.0L / 3, 0.5L}, {"b", {}, 0.5L, 0.5L, 1.0L / 3, 0.5L}});
  CHECK(close(oracle::conditional_or(sym, 0), 2.0L));
  CHECK(close(oracle::conditional_or(sym, 1), 0.5L));
  CHECK(close(oracle::geometric_or(sym), 1.0L));
  CHECK(close(oracle::arithmetic_or(sym), 1.25L));

  const QLaw q = derive_q(het3(), 0.5L);
  const exact::Tilted t(exact::Law::from(het3()), frac(1, 2));
  Real m1 = 0;
  for (std::size_t x = 0; x < q.size(); ++x) m1 += q.x_given_y(x, 1) * oracle::conditional_or(q, x);
  CHECK(close(oracle::arithmetic_or_partial(q, 1.0L), m1));
  CHECK(close(oracle::arithmetic_or_partial(q, 0.25L), to_real(t.arithmetic_or(frac(1, 4)))));
  CHECK_THROWS_AS(oracle::arithmetic_or_partial(q, 1.5L), InvalidArgument);
}

TEST_CASE("partial identification reproduces the untilted estimands at the true rho") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const DiscreteDgp dgp = random_dgp(seed, 3, 3);
    const auto law = exact::Law::from(dgp);
    for (Real omega : {0.3L, 0.5L, 0.7L}) {
      const QLaw q = derive_q(dgp, omega);
      const Real rho = dgp.outcome_rate();
      const exact::Tilted t(law, exact::from_real(omega));
      const Real alpha = to_real(law.arithmetic_or());
      const Real pop = to_real(law.population_or());
      CHECK(close(oracle::arithmetic_or_partial(q, rho), alpha, 1e-12L * alpha));
      CHECK(close(oracle::population_or_partial(q, rho), pop, 1e-12L * pop));
      CHECK(close(std::log(oracle::geometric_or_partial(q, rho)), law.log_geometric_or()));
      // The exact tilted law agrees with the exact untilted estimand.
      CHECK(t.arithmetic_or(law.rho()) == law.arithmetic_or());
      CHECK(t.population_or(law.rho()) == law.population_or());
    }
  }
}

TEST_CASE("nu from Q inverts the tilt") {
  const DiscreteDgp dgp = worked_example();
  const QLaw q = derive_q(dgp, 0.5L);
  const Real rho = dgp.outcome_rate();
  CHECK(close(oracle::nu_from_q(q, rho, 0, 1).value, 1.0L / 6));
  CHECK(close(oracle::nu_from_q(q, rho, 1, 0).value, 9.0L / 14));
  CHECK_FALSE(oracle::nu_from_q(q, rho, 0, 1).at_boundary);
  // At rho = omega there is no tilt to undo.
  for (std::size_t x = 0; x < q.size(); ++x) {
    for (int a = 0; a < 2; ++a) CHECK(close(oracle::nu_from_q(q, 0.5L, x, a).value, q.mu(a, x)));
  }
  const auto edge = oracle::nu_from_q(q, 1.0L, 0, 1);
  CHECK(edge.value == 1.0L);
  CHECK(edge.at_boundary);
  CHECK_THROWS_AS(oracle::nu_from_q(q, -0.1L, 0, 1), InvalidArgument);
}

TEST_CASE("population odds ratio from Q") {
  const DiscreteDgp dgp = worked_example();
  const QLaw q = derive_q(dgp, 0.5L);
  CHECK(close(oracle::population_or_partial(q, dgp.outcome_rate()), 32.0L / 945));
  const QLaw untilted = derive_q(het3(), het3().outcome_rate());
  CHECK(close(oracle::population_or_partial(untilted, untilted.omega()), oracle::population_or(het3())));
  const DiscreteDgp null_law({{"a", {}, 0.5L, 0.3L, 0.4L, 0.4L}, {"b", {}, 0.5L, 0.6L, 0.4L, 0.4L}});
  const QLaw nq = derive_q(null_law, 0.5L);
  CHECK(close(oracle::population_or_partial(nq, 0.3L), 1.0L));
  CHECK_THROWS_AS(oracle::population_or_partial(q, 0.0L), InvalidArgument);
}

TEST_CASE("psi cells") {
  const DiscreteDgp half({{"a", {}, 0.5L, 0.3L, 0.5L, 0.5L}, {"b", {}, 0.5L, 0.6L, 0.5L, 0.5L}});
  const QLaw hq = derive_q(half, 0.5L);
  for (int a = 0; a < 2; ++a) {
    for (int y = 0; y < 2; ++y) CHECK(close(oracle::psi_exact(hq, a, y), 0.0L));
  }
  const DiscreteDgp dgp = worked_example();
  const QLaw q = derive_q(dgp, 0.5L);
  const exact::Tilted t(exact::Law::worked_example(), frac(1, 2));
  for (int a = 0; a < 2; ++a) {
    for (int y = 0; y < 2; ++y) CHECK(close(oracle::psi_exact(q, a, y), t.psi(a, y)));
  }
  const auto psi = oracle::psi_table(q);
  const Real rho = dgp.outcome_rate();
  CHECK(close(std::exp(rho * (psi.at(1, 1) - psi.at(0, 1)) + (1 - rho) * (psi.at(1, 0) - psi.at(0, 0))), 1.0L / 45));

  const QLaw h = derive_q(het3(), 0.5L);
  CHECK(std::fabs(oracle::psi_exact(h, 1, 1) - oracle::psi_exact(h, 1, 0)) > 0.05L);
}

TEST_CASE("log gamma is affine in rho with the psi slope") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const QLaw q = derive_q(random_dgp(seed, 2, 6), 0.4L);
    const auto psi = oracle::psi_table(q);
    std::vector<Real> grid;
    for (int i = 1; i < 20; ++i) grid.push_back(i / 20.0L);
    const auto curve = oracle::partial_id_curve(q, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const Real line = psi.log_intercept() + grid[i] * psi.log_slope();
      CHECK(close(std::log(curve.gamma_of_rho[i]), line, 1e-10L));
    }
  }
  CHECK(close(oracle::geometric_or_partial(derive_q(worked_example(), 0.3L), 0.9L), 1.0L / 45));
}

TEST_CASE("ODS efficiency bound") {
  const DiscreteDgp dgp = het3();
  const QLaw at_rho = derive_q(dgp, dgp.outcome_rate());
  for (std::size_t x = 0; x < dgp.size(); ++x) {
    CHECK(close(oracle::sampling_correction(at_rho, at_rho.rho(), x), 1.0L));
  }
  // Constant conditional OR and rho = omega: Psi - Psi* vanishes identically.
  const DiscreteDgp flat = constant_or(4, 0.25L);
  const QLaw fq = derive_q(flat, flat.outcome_rate());
  const auto terms = oracle::efficiency_bound_ods_terms(fq, fq.rho());
  CHECK(close(terms.var_psi + terms.var_psi_star - 2 * terms.cov_psi_psi_star, 0.0L));

  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const DiscreteDgp r = random_dgp(seed, 2, 5);
    for (Real omega : {0.3L, 0.5L}) {
      const QLaw q = derive_q(r, omega);
      for (Real rho : {0.1L, 0.5L, 0.8L}) {
        const Real bound = oracle::efficiency_bound_ods(q, rho);
        CHECK(bound > 0);
        CHECK(close(bound, oracle::influence_second_moment(q, rho), 1e-12L * bound));
      }
    }
  }
  CHECK_THROWS_AS(oracle::efficiency_bound_ods(derive_q(dgp, 0.5L), 1.0L), InvalidArgument);
}

TEST_CASE("the centered influence function has mean zero under Q") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const QLaw q = derive_q(random_dgp(seed, 2, 6), 0.6L);
    for (Real rho : {0.2L, 0.7L}) {
      Real total = 0;
      for (std::size_t x = 0; x < q.size(); ++x) {
        for (int a = 0; a < 2; ++a) {
          for (int y = 0; y < 2; ++y) total += q.mass(x, a, y) * oracle::influence_log_gamma(q, rho, x, a, y);
        }
      }
      CHECK(close(total, 0.0L));
    }
  }
}

TEST_CASE("random-sampling and risk-difference bounds") {
  const DiscreteDgp flat = single(0.5L, 0.5L, 0.5L);
  CHECK(close(oracle::efficiency_bound_rs(flat), 16.0L));
  CHECK(close(oracle::ard_bound(flat), 1.0L));

  // Constant OR: the heterogeneity term drops out.
  const DiscreteDgp c = constant_or(9, 2.0L);
  Real base = 0;
  for (std::size_t x = 0; x < c.size(); ++x) {
    const Real pi = c.pi(1, x), n1 = c.nu(1, x), n0 = c.nu(0, x);
    base += c.p_x(x) * (1 / (pi * n1 * (1 - n1)) + 1 / ((1 - pi) * n0 * (1 - n0)));
  }
  CHECK(close(oracle::efficiency_bound_rs(c), 4.0L * base, 1e-12L * base));

  // Outcomes approaching determinism: ARD bound falls while the OR bound grows.
  auto extreme = [](Real e) { return DiscreteDgp({{"only", {}, 1.0L, 0.5L, 1 - e, e}}, 1e-9L); };
  CHECK(oracle::ard_bound(extreme(0.01L)) < oracle::ard_bound(extreme(0.1L)));
  CHECK(oracle::efficiency_bound_rs(extreme(0.01L)) > oracle::efficiency_bound_rs(extreme(0.1L)));

  // Homogeneous risk differences: the ARD heterogeneity term vanishes.
  const DiscreteDgp same_rd({{"a", {}, 0.5L, 0.4L, 0.5L, 0.3L}, {"b", {}, 0.5L, 0.6L, 0.6L, 0.4L}});
  Real ard = 0;
  for (std::size_t x = 0; x < 2; ++x) {
    const Real pi = same_rd.pi(1, x), n1 = same_rd.nu(1, x), n0 = same_rd.nu(0, x);
    ard += 0.5L * (n1 * (1 - n1) / pi + n0 * (1 - n0) / (1 - pi));
  }
  CHECK(close(oracle::ard_bound(same_rd), ard));
}

TEST_CASE("estimand report") {
  const auto r = oracle::estimand_report(worked_example(), 0.5L);
  REQUIRE(r.or_conditional.size() == 2);
  CHECK(r.or_conditional[0].first == "Female");
  CHECK(r.gamma > 0);
  Real log_sum = 0;
  const DiscreteDgp dgp = worked_example();
  for (std::size_t x = 0; x < 2; ++x) log_sum += dgp.p_x(x) * std::log(r.or_conditional[x].second);
  CHECK(close(std::exp(log_sum), r.gamma));
  CHECK(close(r.or_population, 32.0L / 945));
  CHECK(close(r.risk_ratio, 140.0L / 1053));
}
