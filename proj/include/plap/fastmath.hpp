#pragma once

#include <cmath>

namespace plap {
namespace detail {

/// |x|^p with cheap paths for the exponents the solvers hit in hot loops.
inline double pow_abs(double x, double p) {
  double a = std::abs(x);
  if (p == 2.0) return a * a;
  if (p == 1.0) return a;
  if (p == 1.5) return a * std::sqrt(a);
  if (p == 3.0) return a * a * a;
  if (p == 0.5) return std::sqrt(a);
  if (p == 4.0) {
    double s = a * a;
    return s * s;
  }
  if (p == 2.5) return a * a * std::sqrt(a);
  return std::pow(a, p);
}

/// r^{-1/p} for r > 0, the level-time integrand kernel.
inline double pow_neg_inv(double r, double p) {
  if (p == 2.0) return 1.0 / std::sqrt(r);
  if (p == 3.0) return 1.0 / std::cbrt(r);
  if (p == 1.5) {
    double c = std::cbrt(r);
    return 1.0 / (c * c);
  }
  if (p == 4.0) return 1.0 / std::sqrt(std::sqrt(r));
  return std::pow(r, -1.0 / p);
}

/// x^n for small nonnegative integer n (radial weights s^{N-1}).
inline double ipow(double x, int n) {
  double acc = 1.0;
  for (int k = 0; k < n; ++k) acc *= x;
  return acc;
}

}  // namespace detail
}  // namespace plap
