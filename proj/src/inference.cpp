#include "godds/inference.hpp"

#include <cmath>

#include "godds/error.hpp"
#include "godds/numeric.hpp"

namespace godds {
namespace {

double rate(int y, double omega_hat) { return y == 1 ? omega_hat : 1 - omega_hat; }

bool matches(double a, double b) { return std::fabs(a - b) <= 1e-12 * std::max(1.0, std::fabs(b)); }

}  // namespace

double centered_phi(const Observation& row, const NuisanceFit& fit, int a, int y, double omega_hat,
                    double psi_hat_ay) {
  const double phi = phi_uncentered(row, fit, a, y, omega_hat);
  return row.y == y ? phi - psi_hat_ay / rate(y, omega_hat) : phi;
}

CenteredContrasts centered_contrasts(const Dataset& data, std::span<const RowNuisance> rows,
                                     const PsiCells& cells, double clip_eps) {
  if (rows.size() != data.size()) throw InvalidArgument("rows lack out-of-fold predictions");
  const double w = cells.omega_hat;
  CenteredContrasts c;
  c.d1.resize(data.size());
  c.d0.resize(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const int ai = data.a(i);
    const int yi = data.y(i);
    auto cell = [&](int a, int y) {
      const double phi = phi_from_nuisance(rows[i], ai, yi, a, y, w, clip_eps);
      return yi == y ? phi - cells.at(a, y) / rate(y, w) : phi;
    };
    c.d1[i] = cell(1, 1) - cell(0, 1);
    c.d0[i] = cell(1, 0) - cell(0, 0);
  }
  return c;
}

PseudoOutcomes pseudo_outcomes(const CenteredContrasts& contrasts, double rho, double gamma_hat_at_rho) {
  if (!(gamma_hat_at_rho > 0) || !std::isfinite(gamma_hat_at_rho)) {
    throw InvalidArgument("gamma must be positive and finite");
  }
  if (!(rho > 0 && rho < 1)) throw InvalidArgument("rho must lie in (0, 1)");
  if (contrasts.d1.size() != contrasts.d0.size()) throw InvalidArgument("contrast vectors differ in length");
  PseudoOutcomes p;
  p.rho_used = rho;
  p.gamma_used = gamma_hat_at_rho;
  p.zeta.resize(contrasts.d1.size());
  for (std::size_t i = 0; i < p.zeta.size(); ++i) {
    p.zeta[i] = gamma_hat_at_rho * (rho * contrasts.d1[i] + (1 - rho) * contrasts.d0[i]);
  }
  return p;
}

PseudoOutcomes pseudo_outcomes(const Dataset& data, std::span<const NuisanceFit> fits, const CrossFitPlan& plan,
                               const PsiCells& cells, double rho, double gamma_hat_at_rho) {
  const auto rows = predict_rows(data, plan, fits);
  return pseudo_outcomes(centered_contrasts(data, rows, cells, fits.front().clip_eps()), rho, gamma_hat_at_rho);
}

ConfidenceInterval ci_endpoint(const PseudoOutcomes& pseudo, double gamma_hat_at_rho, double alpha) {
  if (!(alpha > 0 && alpha <= 1)) throw InvalidArgument("alpha must lie in (0, 1]");
  const std::size_t n = pseudo.zeta.size();
  if (n < 2) throw DataError("a confidence interval needs at least 2 pseudo-outcomes");
  ConfidenceInterval ci;
  ci.estimate = gamma_hat_at_rho;
  ci.alpha = alpha;
  ci.n = n;
  ci.variance_hat = sample_variance(pseudo.zeta);
  const double margin = normal_quantile(1 - alpha / 2) * std::sqrt(ci.variance_hat / static_cast<double>(n));
  ci.lo = gamma_hat_at_rho - margin;
  ci.hi = gamma_hat_at_rho + margin;
  return ci;
}

BoundInterval ci_bound(const GammaEstimate& est, const PseudoOutcomes& pseudo_low,
                       const PseudoOutcomes& pseudo_high, double alpha) {
  if (est.rho_grid.empty()) throw InvalidArgument("estimate has an empty rho grid");
  const double rho_low = est.rho_grid.front();
  const double rho_high = est.rho_grid.back();
  if (!(rho_low <= rho_high)) throw InvalidArgument("rho_low must not exceed rho_high");
  if (pseudo_low.rho_used != rho_low || pseudo_high.rho_used != rho_high ||
      !matches(pseudo_low.gamma_used, est.gamma_hat.front()) ||
      !matches(pseudo_high.gamma_used, est.gamma_hat.back()) ||
      pseudo_low.zeta.size() != pseudo_high.zeta.size()) {
    throw InvalidArgument("endpoint pseudo-outcomes come from inconsistent fits");
  }
  BoundInterval b;
  b.rho_low = rho_low;
  b.rho_high = rho_high;
  b.low_endpoint = ci_endpoint(pseudo_low, est.gamma_hat.front(), alpha);
  b.high_endpoint = ci_endpoint(pseudo_high, est.gamma_hat.back(), alpha);
  const ConfidenceInterval& lo_ci = b.low_endpoint;
  const ConfidenceInterval& hi_ci = b.high_endpoint;
  if (lo_ci.estimate < hi_ci.estimate) {
    b.gamma_min = lo_ci.estimate;
    b.gamma_max = hi_ci.estimate;
    b.l_alpha = lo_ci.lo;
    b.u_alpha = hi_ci.hi;
  } else if (lo_ci.estimate > hi_ci.estimate) {
    b.gamma_min = hi_ci.estimate;
    b.gamma_max = lo_ci.estimate;
    b.l_alpha = hi_ci.lo;
    b.u_alpha = lo_ci.hi;
  } else {
    // Flat curve: both endpoints are the minimum and the maximum.
    const ConfidenceInterval& wide = lo_ci.hi - lo_ci.lo >= hi_ci.hi - hi_ci.lo ? lo_ci : hi_ci;
    b.gamma_min = b.gamma_max = lo_ci.estimate;
    b.l_alpha = wide.lo;
    b.u_alpha = wide.hi;
  }
  return b;
}

}  // namespace godds
