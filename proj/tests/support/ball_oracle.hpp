#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "plap/ball.hpp"
#include "plap/nonlinearity.hpp"

namespace ball_oracle {

/// Independent coarse solver for the radial problem: damped fixed-point
/// (lagged diffusivity) iteration on a finite-volume discretization of the
/// Euler-Lagrange equation
///     -(s^{N-1} |u'|^{p-2} u' )' = s^{N-1} f~(u),  u'(0) = 0, u(r) = 0,
/// with a tridiagonal solve per sweep.  Shares no code path with the energy
/// descent in plap::minimize_radial beyond the truncated evaluators.
inline std::vector<double> el_fixed_point_from(const plap::NonlinearitySpec& f,
                                               double p, int N, double rho, double r,
                                               int J, std::vector<double> u,
                                               int max_sweeps = 40000) {
  plap::TruncatedNonlinearity tf = plap::truncate(f, rho);
  const double h = r / J;
  u[J] = 0.0;

  std::vector<double> a(J), low(J), diag(J), up(J), rhs(J), sol(J);
  const double omega = 0.5;
  const double mass_shift = 2.0;  // semi-implicit shift, keeps sweeps stable

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    for (int j = 0; j < J; ++j) {
      double e = (u[j + 1] - u[j]) / h;
      a[j] = std::pow(std::max(std::abs(e), 1e-9), p - 2.0);
    }
    // node 0: finite volume over [0, h/2]
    {
      double sigma = std::pow(0.5 * h, N - 1) * a[0];
      double vol = h * std::pow(0.5 * h, N) / N;
      diag[0] = sigma + vol * mass_shift;
      up[0] = -sigma;
      rhs[0] = h * std::pow(0.5 * h, N) / N * tf.f_tilde(u[0]) + vol * mass_shift * u[0];
    }
    for (int j = 1; j < J; ++j) {
      double sp = std::pow((j + 0.5) * h, N - 1) * a[j];
      double sm = std::pow((j - 0.5) * h, N - 1) * a[j - 1];
      double vol = h * h * std::pow(j * h, N - 1);
      low[j] = -sm;
      diag[j] = sm + sp + vol * mass_shift;
      up[j] = -sp;
      rhs[j] = vol * tf.f_tilde(u[j]) + vol * mass_shift * u[j];
    }
    // Thomas solve
    std::vector<double> cp(J), dp(J);
    cp[0] = up[0] / diag[0];
    dp[0] = rhs[0] / diag[0];
    for (int j = 1; j < J; ++j) {
      double m = diag[j] - low[j] * cp[j - 1];
      cp[j] = up[j] / m;
      dp[j] = (rhs[j] - low[j] * dp[j - 1]) / m;
    }
    sol[J - 1] = dp[J - 1];
    for (int j = J - 2; j >= 0; --j) sol[j] = dp[j] - cp[j] * sol[j + 1];

    double diff = 0.0;
    for (int j = 0; j < J; ++j) {
      double un = std::clamp((1.0 - omega) * u[j] + omega * sol[j], 0.0, rho);
      diff = std::max(diff, std::abs(un - u[j]));
      u[j] = un;
    }
    if (diff < 1e-12 * (1.0 + rho)) break;
  }
  return u;
}

/// Midpoint-rule radial energy on the oracle's own grid, used only to pick
/// the minimizing branch among the fixed points it finds.
inline double midpoint_energy(const plap::NonlinearitySpec& f, double p, int N,
                              double rho, double r, const std::vector<double>& u) {
  plap::TruncatedNonlinearity tf = plap::truncate(f, rho);
  const int J = static_cast<int>(u.size()) - 1;
  const double h = r / J;
  double E = 0.0;
  for (int j = 0; j < J; ++j) {
    double s_mid = (j + 0.5) * h;
    double e = (u[j + 1] - u[j]) / h;
    double umid = 0.5 * (u[j] + u[j + 1]);
    E += (std::pow(std::abs(e), p) / p + tf.F_tilde(umid)) * std::pow(s_mid, N - 1) * h;
  }
  return E;
}

/// The fixed point of lower (oracle-side) energy among the two deterministic
/// starts; the plateau start can converge to a non-minimizing branch on
/// small balls.
inline std::vector<double> el_fixed_point(const plap::NonlinearitySpec& f, double p,
                                          int N, double rho, double r, int J) {
  const double h = r / J;
  std::vector<double> plateau(J + 1);
  for (int j = 0; j <= J; ++j) {
    double s = j * h;
    plateau[j] = (s <= r - 1.0) ? rho : std::max(0.0, rho * (r - s));
  }
  auto a = el_fixed_point_from(f, p, N, rho, r, J, std::move(plateau));
  auto b = el_fixed_point_from(f, p, N, rho, r, J, std::vector<double>(J + 1, 0.0));
  return midpoint_energy(f, p, N, rho, r, a) <= midpoint_energy(f, p, N, rho, r, b)
             ? a
             : b;
}

inline double el_fixed_point_sup(const plap::NonlinearitySpec& f, double p, int N,
                                 double rho, double r, int J) {
  auto u = el_fixed_point(f, p, N, rho, r, J);
  return *std::max_element(u.begin(), u.end());
}

}  // namespace ball_oracle
