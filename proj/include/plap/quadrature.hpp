#pragma once

#include <cmath>
#include <queue>
#include <utility>
#include <vector>

#include "plap/errors.hpp"

namespace plap {
namespace quad {

// 15-point Kronrod rule with embedded 7-point Gauss rule (QUADPACK dqk15).
namespace detail {

inline constexpr double xgk[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691,
    0.7415311855993944, 0.5860872354676911, 0.4058451513773972,
    0.2077849550078985, 0.0};
inline constexpr double wgk[8] = {
    0.02293532201052922, 0.06309209262997855, 0.1047900103222502,
    0.1406532597155259,  0.1690047266392679,  0.1903505780647854,
    0.2044329400752989,  0.2094821410847278};
inline constexpr double wg[4] = {0.1294849661688697, 0.2797053914892767,
                                 0.3818300505051189, 0.4179591836734694};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& other) const {
    if (error != other.error) return error < other.error;
    return a > other.a;  // deterministic tie-break
  }
};

template <class F>
Panel gk15(F&& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double fv[15];
  for (int i = 0; i < 7; ++i) {
    fv[i] = f(c - h * xgk[i]);
    fv[14 - i] = f(c + h * xgk[i]);
  }
  fv[7] = f(c);
  double kron = wgk[7] * fv[7];
  double gauss = wg[3] * fv[7];
  for (int i = 0; i < 7; ++i) {
    kron += wgk[i] * (fv[i] + fv[14 - i]);
    if (i % 2 == 1) gauss += wg[i / 2] * (fv[i] + fv[14 - i]);
  }
  Panel p;
  p.a = a;
  p.b = b;
  p.value = kron * h;
  p.error = std::abs((kron - gauss) * h);
  return p;
}

}  // namespace detail

struct Result {
  double value = 0.0;
  double error = 0.0;
  bool converged = true;
};

/// Globally adaptive integration of f over [a, b] to absolute tolerance.
/// f is only evaluated at interior points, so integrands with (integrable)
/// endpoint blow-ups are tolerated, though slowly; callers with a known
/// endpoint order should substitute it away first.
template <class F>
Result integrate(F&& f, double a, double b, double abs_tol, int max_panels = 4000) {
  Result res;
  if (!(b > a)) return res;
  std::priority_queue<detail::Panel> panels;
  panels.push(detail::gk15(f, a, b));
  res.value = panels.top().value;
  res.error = panels.top().error;
  int n = 1;
  while (res.error > abs_tol && n < max_panels) {
    detail::Panel worst = panels.top();
    panels.pop();
    double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {  // cannot split further
      panels.push(worst);
      break;
    }
    detail::Panel left = detail::gk15(f, worst.a, mid);
    detail::Panel right = detail::gk15(f, mid, worst.b);
    res.value += left.value + right.value - worst.value;
    res.error += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
    ++n;
  }
  res.converged = res.error <= abs_tol;
  return res;
}

}  // namespace quad
}  // namespace plap
