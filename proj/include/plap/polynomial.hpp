#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "plap/errors.hpp"

namespace plap {

// Dense univariate polynomials with double coefficients in ascending degree.
// These are small (degree <= ~8 in practice); everything is value-based.
namespace poly {

inline double eval(const std::vector<double>& c, double x) {
  double acc = 0.0;
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
  return acc;
}

/// Horner on |c_i| at |x|; used for evaluation error bounds.
inline double eval_abs(const std::vector<double>& c, double x) {
  double ax = std::abs(x);
  double acc = 0.0;
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * ax + std::abs(c[i]);
  return acc;
}

/// Bound on the rounding error of eval(c, x).
inline double eval_err_bound(const std::vector<double>& c, double x) {
  const double eps = std::numeric_limits<double>::epsilon();
  return 2.0 * static_cast<double>(c.size() + 1) * eps * eval_abs(c, x) +
         std::numeric_limits<double>::denorm_min();
}

inline bool value_is_zero(const std::vector<double>& c, double x) {
  return std::abs(eval(c, x)) <= 16.0 * eval_err_bound(c, x);
}

inline std::vector<double> derivative(const std::vector<double>& c) {
  if (c.size() <= 1) return {};
  std::vector<double> d(c.size() - 1);
  for (std::size_t i = 1; i < c.size(); ++i) d[i - 1] = c[i] * static_cast<double>(i);
  return d;
}

/// Antiderivative with constant term c0.
inline std::vector<double> antiderivative(const std::vector<double>& c, double c0 = 0.0) {
  std::vector<double> a(c.size() + 1);
  a[0] = c0;
  for (std::size_t i = 0; i < c.size(); ++i) a[i + 1] = c[i] / static_cast<double>(i + 1);
  return a;
}

/// Coefficients of q(x) = p(x + shift) via repeated synthetic division.
inline std::vector<double> taylor_shift(std::vector<double> c, double shift) {
  if (c.empty()) return c;
  const std::size_t n = c.size();
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = n - 1; j-- > i;) c[j] += shift * c[j + 1];
  return c;
}

inline bool identically_zero(const std::vector<double>& c) {
  return std::all_of(c.begin(), c.end(), [](double v) { return v == 0.0; });
}

inline int degree(const std::vector<double>& c) {
  for (std::size_t i = c.size(); i-- > 0;)
    if (c[i] != 0.0) return static_cast<int>(i);
  return -1;
}

namespace detail {

inline double bisect_root(const std::vector<double>& c, double a, double b) {
  double fa = eval(c, a);
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (a + b);
    if (mid <= a || mid >= b) break;  // interval at floating-point resolution
    double fm = eval(c, mid);
    if (fm == 0.0) return mid;
    if ((fa < 0.0) == (fm < 0.0)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
    }
    if (b - a <= 1e-14 * std::max(1.0, std::abs(a) + std::abs(b))) break;
  }
  // Newton polish: bisection alone leaves ~1e-14 enclosures, which would put
  // exactly representable roots (and everything derived from them) off by a
  // few ulps
  double x = 0.5 * (a + b);
  std::vector<double> d = derivative(c);
  for (int it = 0; it < 4; ++it) {
    double fx = eval(c, x);
    if (fx == 0.0) return x;
    double dx = eval(d, x);
    if (dx == 0.0) break;
    double xn = x - fx / dx;
    if (!(xn >= a) || !(xn <= b)) break;
    if (xn == x) break;
    x = xn;
  }
  return x;
}

inline void push_unique(std::vector<double>& roots, double r) {
  for (double s : roots)
    if (std::abs(s - r) <= 1e-11 * std::max(1.0, std::abs(r))) return;
  roots.push_back(r);
}

}  // namespace detail

/// All real roots of c in [lo, hi], ascending, each reported once.
/// The polynomial must not be identically zero.  Roots are found by
/// recursively isolating monotone intervals between critical points and
/// bisecting sign changes; roots of even multiplicity are picked up as
/// critical points where the value vanishes to rounding accuracy.
inline std::vector<double> real_roots_in(const std::vector<double>& c, double lo, double hi) {
  std::vector<double> roots;
  int deg = degree(c);
  if (deg <= 0) return roots;
  if (deg == 1) {
    double r = -c[0] / c[1];
    double tol = 1e-12 * std::max(1.0, std::max(std::abs(lo), std::abs(hi)));
    if (r >= lo - tol && r <= hi + tol) roots.push_back(std::clamp(r, lo, hi));
    return roots;
  }

  std::vector<double> nodes{lo, hi};
  for (double r : real_roots_in(derivative(c), lo, hi)) nodes.push_back(r);
  std::sort(nodes.begin(), nodes.end());

  for (double x : nodes)
    if (value_is_zero(c, x)) detail::push_unique(roots, x);

  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    double a = nodes[i], b = nodes[i + 1];
    if (b - a <= 0.0) continue;
    if (value_is_zero(c, a) || value_is_zero(c, b)) continue;
    double fa = eval(c, a), fb = eval(c, b);
    if ((fa < 0.0) != (fb < 0.0)) detail::push_unique(roots, detail::bisect_root(c, a, b));
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

}  // namespace poly
}  // namespace plap
