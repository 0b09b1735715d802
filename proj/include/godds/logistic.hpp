#pragma once

#include <span>

#include <Eigen/Dense>

namespace godds {

struct LogisticOptions {
  double ridge = 0.0;  // L2 penalty on every coefficient, intercept included
  int max_iters = 100;
  double tol = 1e-10;  // on the per-row gradient infinity norm
};

struct LogisticModel {
  Eigen::VectorXd coef;  // intercept first
  int iterations = 0;

  double linear(std::span<const double> x) const;
  double predict(std::span<const double> x) const;
};

// Ridge-penalized logistic regression by damped Newton. `design` holds one row
// per observation without an intercept column; one is prepended internally.
// Throws NumericalError on non-convergence and SeparationError when ridge is 0
// and the data are (quasi-)separable.
LogisticModel fit_logistic(const Eigen::MatrixXd& design, std::span<const int> labels,
                           const LogisticOptions& options);

}  // namespace godds
