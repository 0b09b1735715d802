#include "godds/aggregation.hpp"

#include <cmath>

#include "godds/error.hpp"
#include "godds/oracle.hpp"

namespace godds {
namespace {

void check_weights(std::span<const Real> weights, std::size_t expected) {
  if (weights.size() != expected) throw InvalidArgument("aggregation weights do not match the values");
  RealSum total;
  for (Real w : weights) {
    if (!(w >= 0) || !std::isfinite(static_cast<double>(w))) {
      throw InvalidArgument("aggregation weights must be nonnegative");
    }
    total.add(w);
  }
  if (std::fabs(total.value() - 1) > kExactTolerance) {
    throw InvalidArgument("aggregation weights must sum to 1");
  }
}

}  // namespace

Real aggregate(std::span<const Real> values, const AggregationSpec& spec) {
  if (values.empty()) throw InvalidArgument("nothing to aggregate");
  check_weights(spec.weights, values.size());
  RealSum total;
  if (spec.kind == AggregationKind::Arithmetic) {
    for (std::size_t i = 0; i < values.size(); ++i) total.add(spec.weights[i] * values[i]);
    return total.value();
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] > 0)) throw InvalidArgument("geometric aggregation needs positive values");
    if (spec.weights[i] == 0) continue;
    total.add(spec.weights[i] * std::log(values[i]));
  }
  return std::exp(total.value());
}

Real marginal_odds_geometric(const DiscreteDgp& dgp, int arm) {
  RealSum total;
  for (std::size_t x = 0; x < dgp.size(); ++x) {
    const Real nu = dgp.nu(arm, x);
    if (!(nu > 0 && nu < 1)) throw InvalidArgument("degenerate outcome risk");
    total.add(dgp.p_x(x) * logit(nu));
  }
  return std::exp(total.value());
}

std::vector<Real> rr_weights(const DiscreteDgp& dgp) {
  const Real baseline = oracle::marginal_risk(dgp, 0);
  if (!(baseline > 0)) throw InvalidArgument("baseline risk is zero");
  std::vector<Real> w;
  w.reserve(dgp.size());
  for (std::size_t x = 0; x < dgp.size(); ++x) w.push_back(dgp.p_x(x) * dgp.nu(0, x) / baseline);
  return w;
}

CollapsibilityResiduals collapsibility_residuals(const DiscreteDgp& dgp) {
  CollapsibilityResiduals r;
  const Real log_marginal = std::log(marginal_odds_geometric(dgp, 1)) -
                            std::log(marginal_odds_geometric(dgp, 0));
  r.geometric_residual = std::fabs(log_marginal - std::log(oracle::geometric_or(dgp)));

  const Real alpha = oracle::arithmetic_or(dgp);
  r.arithmetic_residual = std::fabs(oracle::population_or(dgp) - alpha);
  r.arithmetic_relative = r.arithmetic_residual / alpha;

  std::vector<Real> rr;
  for (std::size_t x = 0; x < dgp.size(); ++x) rr.push_back(dgp.nu(1, x) / dgp.nu(0, x));
  const Real weighted = aggregate(rr, {AggregationKind::Arithmetic, rr_weights(dgp)});
  r.rr_residual = std::fabs(oracle::marginal_risk_ratio(dgp) - weighted);
  return r;
}

EffectSummary summarize_effects(const DiscreteDgp& dgp) {
  EffectSummary s;
  for (std::size_t x = 0; x < dgp.size(); ++x) {
    const Stratum& st = dgp.stratum(x);
    s.strata.push_back({st.label, st.p_x, st.nu1, st.nu0, oracle::conditional_or(dgp, x), st.nu1 / st.nu0});
  }
  s.marginal_risk1 = oracle::marginal_risk(dgp, 1);
  s.marginal_risk0 = oracle::marginal_risk(dgp, 0);
  s.population_or = oracle::population_or(dgp);
  s.marginal_rr = oracle::marginal_risk_ratio(dgp);
  s.arithmetic_or = oracle::arithmetic_or(dgp);
  s.geometric_or = oracle::geometric_or(dgp);
  s.marginal_odds_geometric1 = marginal_odds_geometric(dgp, 1);
  s.marginal_odds_geometric0 = marginal_odds_geometric(dgp, 0);
  s.residuals = collapsibility_residuals(dgp);
  return s;
}

}  // namespace godds
