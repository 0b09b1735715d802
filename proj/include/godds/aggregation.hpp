#pragma once

#include <span>
#include <string>
#include <vector>

#include "godds/dgp.hpp"
#include "godds/numeric.hpp"

namespace godds {

enum class AggregationKind { Arithmetic, Geometric };

// Weights are aligned to strata and must lie on the probability simplex.
struct AggregationSpec {
  AggregationKind kind = AggregationKind::Arithmetic;
  std::vector<Real> weights;
};

Real aggregate(std::span<const Real> values, const AggregationSpec& spec);

// prod_x P(Y=1|x,arm)^p(x) / prod_x P(Y=0|x,arm)^p(x), taken in log space.
Real marginal_odds_geometric(const DiscreteDgp& dgp, int arm);

// w(x) = p(x) E[Y^0 | x] / E[Y^0], the weights that make the risk ratio collapse.
std::vector<Real> rr_weights(const DiscreteDgp& dgp);

struct CollapsibilityResiduals {
  Real geometric_residual = 0;
  Real arithmetic_residual = 0;
  Real arithmetic_relative = 0;  // arithmetic_residual / arithmetic_or
  Real rr_residual = 0;
};

CollapsibilityResiduals collapsibility_residuals(const DiscreteDgp& dgp);

struct StratumEffects {
  std::string label;
  Real p_x = 0;
  Real nu1 = 0;
  Real nu0 = 0;
  Real odds_ratio = 0;
  Real risk_ratio = 0;
};

// Per-stratum table plus the marginal effect measures.
struct EffectSummary {
  std::vector<StratumEffects> strata;
  Real marginal_risk1 = 0;
  Real marginal_risk0 = 0;
  Real population_or = 0;
  Real marginal_rr = 0;
  Real arithmetic_or = 0;
  Real geometric_or = 0;
  Real marginal_odds_geometric1 = 0;
  Real marginal_odds_geometric0 = 0;
  CollapsibilityResiduals residuals;
};

EffectSummary summarize_effects(const DiscreteDgp& dgp);

}  // namespace godds
