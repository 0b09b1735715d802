#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace godds {

// Extended precision used by the closed-form oracle (80-bit on x86-64).
using Real = long double;

// Tolerance for identities that hold exactly in real arithmetic.
inline constexpr double kExactTolerance = 1e-12;

template <class T>
T logit(T p) {
  using std::log;
  using std::log1p;
  return log(p) - log1p(-p);
}

template <class T>
T expit(T z) {
  using std::exp;
  if (z >= T(0)) {
    return T(1) / (T(1) + exp(-z));
  }
  const T e = exp(z);
  return e / (T(1) + e);
}

template <class T>
T odds(T p) {
  return p / (T(1) - p);
}

// Neumaier-compensated accumulator. Summation order is fixed by the caller, so
// results are reproducible bit-for-bit.
template <class T>
class BasicCompensatedSum {
 public:
  void add(T v) {
    const T t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  T value() const { return sum_ + comp_; }

 private:
  T sum_ = 0;
  T comp_ = 0;
};

using CompensatedSum = BasicCompensatedSum<double>;
using RealSum = BasicCompensatedSum<Real>;

double compensated_sum(std::span<const double> values);
double mean(std::span<const double> values);

// Unbiased (1/(n-1)) sample variance; requires n >= 2.
double sample_variance(std::span<const double> values);

double normal_cdf(double x);

// Inverse standard normal CDF for p in (0, 1): Acklam's rational approximation
// followed by one Halley step against erfc, giving ~1e-15 absolute accuracy.
double normal_quantile(double p);

// Ordinary least-squares slope of y on x.
double ols_slope(std::span<const double> x, std::span<const double> y);

}  // namespace godds
