#include "godds/oracle.hpp"

#include <cmath>

#include "godds/error.hpp"

namespace godds::oracle {
namespace {

void require_open_rho(Real rho) {
  if (!(rho > 0 && rho < 1)) throw InvalidArgument("rho must lie strictly in (0, 1)");
}

void require_closed_rho(Real rho) {
  if (!(rho >= 0 && rho <= 1)) throw InvalidArgument("rho must lie in [0, 1]");
}

void require_risk(Real p) {
  if (!(p > 0 && p < 1)) throw InvalidArgument("risk must lie strictly in (0, 1)");
}

// Non-degeneracy required by the bound: overlap and outcome variance.
void require_bound_conditions(const QLaw& q) {
  for (std::size_t x = 0; x < q.size(); ++x) {
    for (int a = 0; a < 2; ++a) {
      const Real pi = q.pi(a, x);
      const Real mu = q.mu(a, x);
      if (!(pi > 0 && pi < 1) || !(mu > 0 && mu < 1)) {
        throw InvalidArgument("law violates overlap or outcome-variance conditions");
      }
    }
  }
}

// E_Q[f(X) | Y = 1] and E_Q[f(X) | Y = 0] combined with weights rho and 1 - rho.
template <class F>
Real mix_over_outcome(const QLaw& q, Real rho, F&& f) {
  Real m1 = 0;
  Real m0 = 0;
  for (std::size_t x = 0; x < q.size(); ++x) {
    const Real v = f(x);
    m1 += q.x_given_y(x, 1) * v;
    m0 += q.x_given_y(x, 0) * v;
  }
  return rho * m1 + (1 - rho) * m0;
}

}  // namespace

Real conditional_or(const DiscreteDgp& dgp, std::size_t x) {
  const Real nu1 = dgp.nu(1, x);
  const Real nu0 = dgp.nu(0, x);
  require_risk(nu1);
  require_risk(nu0);
  return odds(nu1) / odds(nu0);
}

Real conditional_or(const QLaw& q, std::size_t x) {
  // odds(A=1 | Y=1, x) / odds(A=1 | Y=0, x)
  const Real q11 = q.mass(x, 1, 1);
  const Real q01 = q.mass(x, 0, 1);
  const Real q10 = q.mass(x, 1, 0);
  const Real q00 = q.mass(x, 0, 0);
  if (!(q11 > 0 && q01 > 0 && q10 > 0 && q00 > 0)) {
    throw InvalidArgument("conditional odds ratio undefined: empty cell");
  }
  return (q11 / q01) / (q10 / q00);
}

Real marginal_risk(const DiscreteDgp& dgp, int arm) {
  Real risk = 0;
  for (std::size_t x = 0; x < dgp.size(); ++x) risk += dgp.p_x(x) * dgp.nu(arm, x);
  return risk;
}

Real population_or(const DiscreteDgp& dgp) {
  const Real r1 = marginal_risk(dgp, 1);
  const Real r0 = marginal_risk(dgp, 0);
  require_risk(r1);
  require_risk(r0);
  return odds(r1) / odds(r0);
}

Real marginal_risk_ratio(const DiscreteDgp& dgp) {
  return marginal_risk(dgp, 1) / marginal_risk(dgp, 0);
}

Real arithmetic_or(const DiscreteDgp& dgp) {
  Real total = 0;
  for (std::size_t x = 0; x < dgp.size(); ++x) total += dgp.p_x(x) * conditional_or(dgp, x);
  return total;
}

Real arithmetic_or_partial(const QLaw& q, Real rho) {
  require_closed_rho(rho);
  return mix_over_outcome(q, rho, [&](std::size_t x) { return conditional_or(q, x); });
}

Real geometric_or(const DiscreteDgp& dgp) {
  Real total = 0;
  for (std::size_t x = 0; x < dgp.size(); ++x) {
    total += dgp.p_x(x) * std::log(conditional_or(dgp, x));
  }
  return std::exp(total);
}

Real geometric_or_partial(const QLaw& q, Real rho) {
  require_closed_rho(rho);
  const PsiTable psi = psi_table(q);
  return std::exp(rho * (psi.at(1, 1) - psi.at(0, 1)) + (1 - rho) * (psi.at(1, 0) - psi.at(0, 0)));
}

PartialRisk nu_from_q(const QLaw& q, Real rho, std::size_t x, int a) {
  require_closed_rho(rho);
  const Real given1 = q.xa_given_y(x, a, 1);
  const Real given0 = q.xa_given_y(x, a, 0);
  const Real denom = given1 * rho + given0 * (1 - rho);
  if (!(denom > 0)) throw InvalidArgument("nu_from_q: cell unreachable at this rho");
  return {given1 * rho / denom, rho == 0 || rho == 1};
}

Real population_or_partial(const QLaw& q, Real rho) {
  require_open_rho(rho);
  auto odds_arm = [&](int a) {
    const Real risk = mix_over_outcome(q, rho, [&](std::size_t x) { return nu_from_q(q, rho, x, a).value; });
    const Real non = mix_over_outcome(q, rho, [&](std::size_t x) { return 1 - nu_from_q(q, rho, x, a).value; });
    if (!(risk > 0 && non > 0)) throw InvalidArgument("degenerate marginal risk");
    return risk / non;
  };
  return odds_arm(1) / odds_arm(0);
}

Real psi_exact(const QLaw& q, int a, int y) {
  Real total = 0;
  for (std::size_t x = 0; x < q.size(); ++x) {
    const Real mu = q.mu(a, x);
    require_risk(mu);
    total += q.x_given_y(x, y) * logit(mu);
  }
  return total;
}

PsiTable psi_table(const QLaw& q) {
  PsiTable t;
  for (int a = 0; a < 2; ++a) {
    for (int y = 0; y < 2; ++y) t.cells[static_cast<std::size_t>(a * 2 + y)] = psi_exact(q, a, y);
  }
  return t;
}

Real sampling_correction(const QLaw& q, Real rho, std::size_t x) {
  const Real w = q.omega();
  return (rho - w) * q.eta(x) / (w * (1 - w)) + (1 - rho) / (1 - w);
}

OdsBoundTerms efficiency_bound_ods_terms(const QLaw& q, Real rho) {
  require_open_rho(rho);
  require_bound_conditions(q);
  const PsiTable psi = psi_table(q);
  const Real w = q.omega();
  const Real weight1 = rho / w;
  const Real weight0 = (1 - rho) / (1 - w);
  const Real star1 = weight1 * (psi.at(1, 1) - psi.at(0, 1));
  const Real star0 = weight0 * (psi.at(1, 0) - psi.at(0, 0));

  Real e_psi = 0, e_psi2 = 0, e_star = 0, e_star2 = 0, e_cross = 0, sampling = 0;
  for (std::size_t x = 0; x < q.size(); ++x) {
    const Real log_or = logit(q.mu(1, x)) - logit(q.mu(0, x));
    for (int y = 0; y < 2; ++y) {
      const Real m = q.mass(x, 0, y) + q.mass(x, 1, y);
      const Real big_psi = (y == 1 ? weight1 : weight0) * log_or;
      const Real big_star = y == 1 ? star1 : star0;
      e_psi += m * big_psi;
      e_psi2 += m * big_psi * big_psi;
      e_star += m * big_star;
      e_star2 += m * big_star * big_star;
      e_cross += m * big_psi * big_star;
    }
    Real inverse_variance = 0;
    for (int a = 0; a < 2; ++a) {
      const Real mu = q.mu(a, x);
      inverse_variance += 1 / (q.pi(a, x) * mu * (1 - mu));
    }
    const Real c = sampling_correction(q, rho, x);
    sampling += q.q_x(x) * inverse_variance * c * c;
  }

  OdsBoundTerms t;
  t.var_psi = e_psi2 - e_psi * e_psi;
  t.var_psi_star = e_star2 - e_star * e_star;
  t.cov_psi_psi_star = e_cross - e_psi * e_star;
  t.sampling_term = sampling;
  t.var_if_log_gamma = t.var_psi + t.var_psi_star - 2 * t.cov_psi_psi_star + t.sampling_term;
  t.gamma = geometric_or_partial(q, rho);
  t.bound = t.gamma * t.gamma * t.var_if_log_gamma;
  return t;
}

Real efficiency_bound_ods(const QLaw& q, Real rho) { return efficiency_bound_ods_terms(q, rho).bound; }

Real influence_log_gamma(const QLaw& q, Real rho, std::size_t x, int a_obs, int y_obs) {
  const PsiTable psi = psi_table(q);
  const Real w = q.omega();
  auto phi = [&](int a, int y) {
    const Real omega_y = y == 1 ? w : 1 - w;
    const Real mu = q.mu(a, x);
    const Real indicator_y = y_obs == y ? 1 : 0;
    const Real indicator_a = a_obs == a ? 1 : 0;
    return logit(mu) * indicator_y / omega_y +
           q.eta_y(y, x) / omega_y * indicator_a * (y_obs - mu) / (q.pi(a, x) * mu * (1 - mu)) -
           psi.at(a, y) * indicator_y / omega_y;
  };
  return rho * (phi(1, 1) - phi(0, 1)) + (1 - rho) * (phi(1, 0) - phi(0, 0));
}

Real influence_second_moment(const QLaw& q, Real rho) {
  require_open_rho(rho);
  Real total = 0;
  for (std::size_t x = 0; x < q.size(); ++x) {
    for (int a = 0; a < 2; ++a) {
      for (int y = 0; y < 2; ++y) {
        const Real v = influence_log_gamma(q, rho, x, a, y);
        total += q.mass(x, a, y) * v * v;
      }
    }
  }
  const Real gamma = geometric_or_partial(q, rho);
  return gamma * gamma * total;
}

Real efficiency_bound_rs(const DiscreteDgp& dgp) {
  const Real log_gamma = std::log(geometric_or(dgp));
  Real total = 0;
  for (std::size_t x = 0; x < dgp.size(); ++x) {
    const Real pi = dgp.pi(1, x);
    const Real nu1 = dgp.nu(1, x);
    const Real nu0 = dgp.nu(0, x);
    if (!(pi > 0 && pi < 1)) throw InvalidArgument("efficiency_bound_rs: overlap violated");
    require_risk(nu1);
    require_risk(nu0);
    const Real het = std::log(conditional_or(dgp, x)) - log_gamma;
    total += dgp.p_x(x) * (1 / (pi * nu1 * (1 - nu1)) + 1 / ((1 - pi) * nu0 * (1 - nu0)) + het * het);
  }
  const Real gamma = std::exp(log_gamma);
  return gamma * gamma * total;
}

Real ard_bound(const DiscreteDgp& dgp) {
  Real ate = 0;
  for (std::size_t x = 0; x < dgp.size(); ++x) ate += dgp.p_x(x) * (dgp.nu(1, x) - dgp.nu(0, x));
  Real total = 0;
  for (std::size_t x = 0; x < dgp.size(); ++x) {
    const Real pi = dgp.pi(1, x);
    if (!(pi > 0 && pi < 1)) throw InvalidArgument("ard_bound: overlap violated");
    const Real nu1 = dgp.nu(1, x);
    const Real nu0 = dgp.nu(0, x);
    const Real het = nu1 - nu0 - ate;
    total += dgp.p_x(x) * (nu1 * (1 - nu1) / pi + nu0 * (1 - nu0) / (1 - pi) + het * het);
  }
  return total;
}

EstimandReport estimand_report(const DiscreteDgp& dgp, Real omega) {
  const QLaw q = derive_q(dgp, omega);
  EstimandReport r;
  for (std::size_t x = 0; x < dgp.size(); ++x) {
    r.or_conditional.emplace_back(dgp.stratum(x).label, conditional_or(dgp, x));
  }
  r.or_population = population_or(dgp);
  r.risk_ratio = marginal_risk_ratio(dgp);
  r.alpha = arithmetic_or(dgp);
  r.gamma = geometric_or(dgp);
  r.rho = dgp.outcome_rate();
  r.omega = omega;
  r.psi = psi_table(q);
  return r;
}

PartialIdCurve partial_id_curve(const QLaw& q, std::span<const Real> rho_grid) {
  PartialIdCurve c;
  for (Real rho : rho_grid) {
    require_open_rho(rho);
    c.rho_grid.push_back(rho);
    c.gamma_of_rho.push_back(geometric_or_partial(q, rho));
    c.alpha_of_rho.push_back(arithmetic_or_partial(q, rho));
    c.or_pop_of_rho.push_back(population_or_partial(q, rho));
  }
  return c;
}

}  // namespace godds::oracle
