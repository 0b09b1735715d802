#include "godds/logistic.hpp"

#include <cmath>
#include <string>

#include "godds/error.hpp"
#include "godds/numeric.hpp"

namespace godds {
namespace {

double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double penalized_loglik(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const Eigen::VectorXd& beta,
                        double ridge) {
  const Eigen::VectorXd eta = x * beta;
  double total = 0;
  for (Eigen::Index i = 0; i < eta.size(); ++i) total += y[i] * eta[i] - softplus(eta[i]);
  return total - 0.5 * ridge * beta.squaredNorm();
}

constexpr double kSeparationMargin = 1e-8;

}  // namespace

double LogisticModel::linear(std::span<const double> x) const {
  if (static_cast<Eigen::Index>(x.size()) + 1 != coef.size()) {
    throw InvalidArgument("feature dimension does not match the fitted model");
  }
  double z = coef[0];
  for (std::size_t j = 0; j < x.size(); ++j) z += coef[static_cast<Eigen::Index>(j) + 1] * x[j];
  return z;
}

double LogisticModel::predict(std::span<const double> x) const { return expit(linear(x)); }

LogisticModel fit_logistic(const Eigen::MatrixXd& design, std::span<const int> labels,
                           const LogisticOptions& options) {
  const Eigen::Index n = design.rows();
  if (n < 1) throw InvalidArgument("logistic fit needs at least one row");
  if (static_cast<Eigen::Index>(labels.size()) != n) throw InvalidArgument("labels and design differ in length");
  if (!(options.ridge >= 0)) throw InvalidArgument("ridge must be nonnegative");
  if (!(options.tol > 0) || options.max_iters < 1) throw InvalidArgument("bad Newton settings");
  if (!design.allFinite()) throw InvalidArgument("features must be finite");

  const Eigen::Index p = design.cols() + 1;
  Eigen::MatrixXd x(n, p);
  x.col(0).setOnes();
  x.rightCols(design.cols()) = design;
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int v = labels[static_cast<std::size_t>(i)];
    if (v != 0 && v != 1) throw InvalidArgument("labels must be 0 or 1");
    y[i] = v;
  }

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  double objective = penalized_loglik(x, y, beta, options.ridge);
  for (int iter = 1; iter <= options.max_iters; ++iter) {
    const Eigen::VectorXd prob = (x * beta).unaryExpr([](double z) { return expit(z); });
    const Eigen::VectorXd grad = x.transpose() * (y - prob) - options.ridge * beta;
    if (grad.lpNorm<Eigen::Infinity>() / static_cast<double>(n) < options.tol) {
      if (options.ridge == 0) {
        for (Eigen::Index i = 0; i < n; ++i) {
          if (prob[i] < kSeparationMargin || prob[i] > 1 - kSeparationMargin) {
            throw SeparationError("logistic fit is separable; use a positive ridge");
          }
        }
      }
      return {beta, iter - 1};
    }
    const Eigen::VectorXd w = prob.array() * (1 - prob.array());
    Eigen::MatrixXd hessian = x.transpose() * w.asDiagonal() * x;
    hessian.diagonal().array() += options.ridge;
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(hessian);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive() ||
        ldlt.vectorD().minCoeff() <= 1e-14 * std::max(1.0, ldlt.vectorD().maxCoeff())) {
      if (options.ridge == 0) throw SeparationError("logistic Hessian is singular; use a positive ridge");
      throw NumericalError("logistic Hessian is singular");
    }
    const Eigen::VectorXd step = ldlt.solve(grad);

    // Close to the optimum the objective change is below rounding, so the line
    // search can no longer tell steps apart; the pure Newton step is safe there.
    const double decrement = grad.dot(step);
    Eigen::VectorXd next = beta + step;
    double next_objective = penalized_loglik(x, y, next, options.ridge);
    if (decrement > 1e-8) {
      double scale = 1.0;
      while (!(next_objective >= objective) && scale > 1e-10) {
        scale *= 0.5;
        next = beta + scale * step;
        next_objective = penalized_loglik(x, y, next, options.ridge);
      }
      if (!(next_objective >= objective)) throw NumericalError("logistic line search failed");
    }
    beta = next;
    objective = next_objective;
    if (options.ridge == 0) {
      const double top = (x * beta).cwiseAbs().maxCoeff();
      if (top > -std::log(kSeparationMargin) + 5) {
        throw SeparationError("logistic fit is separable; use a positive ridge");
      }
    }
  }
  throw NumericalError("logistic fit did not converge in " + std::to_string(options.max_iters) +
                       " Newton iterations");
}

}  // namespace godds
