#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "plap/classification.hpp"
#include "plap/errors.hpp"
#include "plap/nonlinearity.hpp"
#include "plap/time_map.hpp"

namespace plap {

/// A sampled realization of a catalog entry on a uniform time grid,
/// with its self-check metrics.
struct Profile {
  ProfileEntry entry;
  std::vector<double> t, u, du;
  double max_first_integral_residual = 0.0;
  double max_ode_residual = 0.0;
};

namespace detail {

/// Level reached one local time increment dt after level a; returns rho when
/// the remaining time to rho is finite and below dt (finite-time saturation,
/// which occurs only outside the classification hypotheses).
inline double invert_step(const LevelMap& lm, double a, double dt, double hint) {
  const double pref = time_prefactor(lm.p());
  const double rho = lm.rho();
  if (!(dt > 0.0)) return a;
  if (a >= rho) return rho;
  if (lm.upper_integrable()) {
    double total = pref * lm.segment(a, rho, 1e-13);
    if (total <= dt) return rho;
  }
  auto timeto = [&](double x) { return pref * lm.segment(a, x, 1e-13); };
  double gap = rho - a;
  double w = (hint > 0.0) ? std::min(2.0 * hint, 0.5 * gap) : 0.5 * gap;
  double lo = a, Tlo = 0.0, hi = a + w, Thi = timeto(hi);
  int guard = 0;
  while (Thi < dt) {
    lo = hi;
    Tlo = Thi;
    hi = rho - 0.5 * (rho - hi);
    Thi = timeto(hi);
    if (++guard > 100) return hi;  // level indistinguishable from rho
  }
  // safeguarded Newton inside the bracket, seeded by a secant estimate
  double x = lo + (hi - lo) * std::clamp((dt - Tlo) / (Thi - Tlo), 0.05, 0.95);
  double Tx = timeto(x);
  for (int it = 0; it < 80; ++it) {
    if (Tx < dt)
      lo = x;
    else
      hi = x;
    if (hi - lo <= 1e-15 * std::max(1.0, rho)) break;
    if (std::abs(Tx - dt) <= 1e-14 * std::max(1.0, dt) && it > 0) break;
    double d = pref * lm.derivative_at(x);
    double xn = (d > 0.0 && std::isfinite(d)) ? x - (Tx - dt) / d : 0.5 * (lo + hi);
    if (!(xn > lo) || !(xn < hi)) xn = 0.5 * (lo + hi);
    x = xn;
    Tx = timeto(x);
  }
  return x;
}

inline double slope_from_integral(const LevelMap& lm, double u) {
  if (u >= lm.rho()) return 0.0;
  double cp = lm.p() / (lm.p() - 1.0);
  return std::pow(cp * lm.radicand(u), 1.0 / lm.p());
}

/// Two-term local model of the radicand near an endpoint: R(x) ~ A x^k + B x^{k+1}
/// with x the distance into the domain.  Valid for k < p (integrable side).
struct EndpointSeries {
  double k = 1.0, A = 1.0, B = 0.0, p = 2.0;

  // time to travel from the endpoint to distance x
  double time_from(double x) const {
    double pref = time_prefactor(p);
    double e1 = 1.0 - k / p;
    double e2 = 2.0 - k / p;
    return pref * std::pow(A, -1.0 / p) *
           (std::pow(x, e1) / e1 - (B / (p * A)) * std::pow(x, e2) / e2);
  }

  // inverse of time_from by Newton from the leading-order guess
  double dist_at(double tau) const {
    if (!(tau > 0.0)) return 0.0;
    double pref = time_prefactor(p);
    double e1 = 1.0 - k / p;
    double x = std::pow(tau * e1 * std::pow(A, 1.0 / p) / pref, 1.0 / e1);
    for (int it = 0; it < 4; ++it) {
      double g = time_from(x) - tau;
      double d = pref * std::pow(A * std::pow(x, k) + B * std::pow(x, k + 1.0), -1.0 / p);
      if (!std::isfinite(d) || !(d > 0.0)) break;
      double xn = x - g / d;
      if (!(xn > 0.0)) xn = 0.5 * x;
      x = xn;
    }
    return x;
  }
};

inline EndpointSeries lower_series(const NonlinearitySpec& f, double p, double Frho_hint) {
  (void)Frho_hint;
  EndpointSeries s;
  s.p = p;
  std::vector<double> prim = poly::antiderivative(f.pieces().front());
  std::vector<double> local(prim.size(), 0.0);
  for (std::size_t i = 1; i < prim.size(); ++i) local[i] = -prim[i];
  auto [k, A] = leading_term(local);
  s.k = static_cast<double>(k);
  s.A = A;
  if (static_cast<std::size_t>(k + 1) < local.size()) s.B = local[k + 1];
  return s;
}

inline EndpointSeries upper_series(const NonlinearitySpec& f, double p, double rho) {
  EndpointSeries s;
  s.p = p;
  const auto& bp = f.breakpoints();
  std::size_t kr = f.piece_index(rho);
  if (kr > 0 && rho == bp[kr]) kr = kr - 1;
  std::vector<double> prim = poly::antiderivative(f.pieces()[kr]);
  std::vector<double> shifted = poly::taylor_shift(prim, rho - bp[kr]);
  std::vector<double> local(shifted.size(), 0.0);
  for (std::size_t i = 1; i < shifted.size(); ++i)
    local[i] = ((i % 2 == 0) ? -1.0 : 1.0) * shifted[i];
  auto [k, A] = leading_term(local);
  s.k = static_cast<double>(k);
  s.A = A;
  if (static_cast<std::size_t>(k + 1) < local.size()) s.B = local[k + 1];
  return s;
}

}  // namespace detail

/// sup over samples of |(p-1)/p |u'|^p + F(u) - F(rho)|, the conserved
/// quantity along profiles.
inline double first_integral_residual(const Profile& prof, const NonlinearitySpec& f,
                                      double p) {
  double Frho = prof.entry.kind == ProfileKind::Trivial ? 0.0
                                                        : f.primitive(prof.entry.rho);
  double worst = 0.0;
  for (std::size_t i = 0; i < prof.u.size(); ++i) {
    double e = (p - 1.0) / p * std::pow(std::abs(prof.du[i]), p) +
               f.primitive(prof.u[i]) - Frho;
    worst = std::max(worst, std::abs(e));
  }
  return worst;
}

/// sup over interior samples with |u'| > 1e-6 of the residual of
/// (p-1)|u'|^{p-2} u'' = -f(u), with u'' by centered differences.  Degenerate
/// samples are excluded; the equation only holds where u' does not vanish.
inline double ode_residual(const Profile& prof, const NonlinearitySpec& f, double p) {
  if (prof.t.size() < 3) return 0.0;
  double h = prof.t[1] - prof.t[0];
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < prof.t.size(); ++i) {
    if (std::abs(prof.du[i]) <= 1e-6) continue;
    double upp = (prof.u[i + 1] - 2.0 * prof.u[i] + prof.u[i - 1]) / (h * h);
    double r = (p - 1.0) * std::pow(std::abs(prof.du[i]), p - 2.0) * upp +
               f.eval(prof.u[i]);
    worst = std::max(worst, std::abs(r));
  }
  return worst;
}

/// Realize a catalog entry on n uniform samples of [0, t_max].  Levels are
/// found by inverting the time-of-level map with bracketed bisection plus a
/// Newton polish; derivatives come from the first integral.  Periodic
/// entries are built on [0, t*] and extended by reflection and 2t*
/// translation.
inline Profile build_profile(const NonlinearitySpec& f, double p,
                             const ProfileEntry& entry, double t_max, int n) {
  if (n < 257) throw argument_error("need at least 257 samples");
  if (!(t_max > 0.0)) throw argument_error("t_max must be positive");
  Profile prof;
  prof.entry = entry;
  prof.t.resize(n);
  prof.u.assign(n, 0.0);
  prof.du.assign(n, 0.0);
  for (int i = 0; i < n; ++i)
    prof.t[i] = t_max * static_cast<double>(i) / static_cast<double>(n - 1);

  if (entry.kind == ProfileKind::Trivial) return prof;

  LevelMap lm(f, p, entry.rho);

  if (entry.kind == ProfileKind::Increasing) {
    const bool finite_top = lm.upper_integrable();
    detail::EndpointSeries top;
    if (finite_top) top = detail::upper_series(f, p, entry.rho);
    const double cap_dist = 1e-5 * std::max(1.0, entry.rho);
    double hint = 0.0;
    for (int i = 1; i < n; ++i) {
      double prev = prof.u[i - 1];
      if (finite_top && entry.rho - prev <= cap_dist) {
        // the remaining rise is governed by the exact local expansion at rho;
        // bracketing the level there would fight floating-point resolution
        double t_left = time_prefactor(p) * lm.segment(prev, entry.rho, 1e-13);
        for (int j = i; j < n; ++j) {
          double dt = prof.t[j] - prof.t[i - 1];
          prof.u[j] = dt >= t_left ? entry.rho : entry.rho - top.dist_at(t_left - dt);
        }
        break;
      }
      if (prev >= entry.rho) {
        prof.u[i] = entry.rho;
        continue;
      }
      double x = detail::invert_step(lm, prev, prof.t[i] - prof.t[i - 1], hint);
      hint = x - prev;
      prof.u[i] = x;
    }
    for (int i = 0; i < n; ++i) prof.du[i] = detail::slope_from_integral(lm, prof.u[i]);
  } else {
    if (!entry.half_period) throw argument_error("periodic entry lacks its half-period");
    double tstar = *entry.half_period;
    double period = 2.0 * tstar;

    std::vector<double> tau(n);
    std::vector<double> sign(n);
    for (int i = 0; i < n; ++i) {
      double r = std::fmod(prof.t[i], period);
      if (r < 0.0) r += period;
      if (r <= tstar) {
        tau[i] = r;
        sign[i] = 1.0;
      } else {
        tau[i] = period - r;
        sign[i] = -1.0;
      }
    }
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return tau[a] < tau[b]; });

    double prev_tau = 0.0, prev_u = 0.0, hint = 0.0;
    for (int idx : order) {
      double dt = tau[idx] - prev_tau;
      double x;
      if (dt <= 1e-14 * std::max(1.0, tstar)) {
        x = prev_u;
      } else if (tau[idx] >= tstar * (1.0 - 1e-14)) {
        x = entry.rho;
      } else {
        x = detail::invert_step(lm, prev_u, dt, hint);
        hint = x - prev_u;
      }
      prof.u[idx] = x;
      prof.du[idx] = sign[idx] * detail::slope_from_integral(lm, x);
      prev_tau = tau[idx];
      prev_u = x;
    }
  }

  prof.max_first_integral_residual = first_integral_residual(prof, f, p);
  prof.max_ode_residual = ode_residual(prof, f, p);
  return prof;
}

/// Single-point inversion: the level of the increasing profile at time t
/// (rho when the profile saturates in finite time).
inline double level_at_time(const NonlinearitySpec& f, double p, double rho, double t) {
  if (!(t >= 0.0)) throw argument_error("time must be nonnegative");
  if (t == 0.0) return 0.0;
  LevelMap lm(f, p, rho);
  return detail::invert_step(lm, 0.0, t, 0.0);
}

// ---------------------------------------------------------------------------
// Independent oracle: classical RK4 on the autonomous first-order equation
// u' = ((p/(p-1)) [F(rho)-F(u)])^{1/p}, with adaptive step halving and exact
// local series at the degenerate endpoints.  This shares no code with the
// quadrature inversion above except the radicand evaluation.
// ---------------------------------------------------------------------------

namespace detail {

template <class G>
double rk4_step(G&& g, double u, double h) {
  double k1 = g(u);
  double k2 = g(u + 0.5 * h * k1);
  double k3 = g(u + 0.5 * h * k2);
  double k4 = g(u + h * k3);
  return u + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// Integrate u' = g(u) from (t0, u0) with adaptive step halving, recording
/// the state at each requested time (ascending) and marking it filled.
/// Returns early with the stop state as soon as keep_going(u) fails between
/// targets; targets already reached stay recorded.
template <class G, class Stop>
std::pair<double, double> rk4_to_targets(G&& g, double t0, double u0,
                                         const std::vector<double>& times,
                                         std::vector<double>& out,
                                         std::vector<char>& filled, std::size_t begin,
                                         std::size_t end, Stop&& keep_going) {
  double t = t0, u = u0;
  double h = 1e-3;
  long steps = 0;
  for (std::size_t i = begin; i < end; ++i) {
    double tg = times[i];
    while (t < tg) {
      if (!keep_going(u)) return {t, u};
      double htry = std::min(h, tg - t);
      double one = rk4_step(g, u, htry);
      double half = rk4_step(g, rk4_step(g, u, 0.5 * htry), 0.5 * htry);
      double err = std::abs(half - one);
      double tol = 1e-13 * std::max(1.0, std::abs(u)) + 1e-14 * htry;
      if (err <= tol || htry <= 1e-12) {
        u = half + (half - one) / 15.0;
        t += htry;
        double grow = (err > 0.0) ? 0.9 * std::pow(tol / err, 0.2) : 2.0;
        h = htry * std::clamp(grow, 0.3, 2.0);
      } else {
        h = 0.5 * htry;
      }
      if (++steps > 50'000'000)
        throw convergence_error("oracle integration exceeded its step budget");
    }
    out[i] = u;
    filled[i] = 1;
  }
  return {t, u};
}

}  // namespace detail

/// Build a profile for (kind, rho) by direct ODE integration.  For degenerate
/// starts (u'(0) = 0) the first stretch comes from the exact local series of
/// the phase-plane relation; periodic paths are integrated over one ascending
/// half and extended by their own reflection structure, so the realized
/// half-period is the oracle's, not the catalog's.
inline Profile oracle_integrate(const NonlinearitySpec& f, double p, double rho,
                                ProfileKind kind, double t_max, int n) {
  if (n < 257) throw argument_error("need at least 257 samples");
  if (!(t_max > 0.0)) throw argument_error("t_max must be positive");
  Profile prof;
  prof.entry.kind = kind;
  prof.entry.rho = rho;
  prof.t.resize(n);
  prof.u.assign(n, 0.0);
  prof.du.assign(n, 0.0);
  for (int i = 0; i < n; ++i)
    prof.t[i] = t_max * static_cast<double>(i) / static_cast<double>(n - 1);
  if (kind == ProfileKind::Trivial) return prof;

  LevelMap lm(f, p, rho);
  const double cp = p / (p - 1.0);
  auto g = [&](double u) {
    if (u >= rho) return 0.0;
    if (u < 0.0) u = 0.0;
    return std::pow(cp * lm.radicand(u), 1.0 / p);
  };
  const bool degenerate_start = lm.lower_singular();
  const bool finite_top = lm.upper_integrable();
  const double boot_dist = 1e-5 * std::max(1.0, rho);
  const double cap_dist = 1e-5 * std::max(1.0, rho);

  detail::EndpointSeries lower, upper;
  if (degenerate_start) lower = detail::lower_series(f, p, 0.0);
  if (finite_top) upper = detail::upper_series(f, p, rho);

  if (kind == ProfileKind::Increasing) {
    std::vector<char> filled(prof.t.size(), 0);
    double t0 = 0.0, u0 = 0.0;
    std::size_t i0 = 0;
    if (degenerate_start) {
      t0 = lower.time_from(boot_dist);
      u0 = boot_dist;
      while (i0 < prof.t.size() && prof.t[i0] <= t0) {
        prof.u[i0] = lower.dist_at(prof.t[i0]);
        filled[i0] = 1;
        ++i0;
      }
    } else {
      prof.u[0] = 0.0;
      filled[0] = 1;
      i0 = 1;
    }
    if (finite_top) {
      auto [tc, uc] = detail::rk4_to_targets(
          g, t0, u0, prof.t, prof.u, filled, i0, prof.t.size(),
          [&](double u) { return rho - u > cap_dist; });
      if (rho - uc <= cap_dist) {
        double t_plateau = tc + upper.time_from(rho - uc);
        for (std::size_t i = i0; i < prof.t.size(); ++i) {
          if (filled[i]) continue;
          prof.u[i] = prof.t[i] >= t_plateau
                          ? rho
                          : rho - upper.dist_at(t_plateau - prof.t[i]);
        }
      }
    } else {
      detail::rk4_to_targets(g, t0, u0, prof.t, prof.u, filled, i0, prof.t.size(),
                             [](double) { return true; });
    }
    for (int i = 0; i < n; ++i) prof.du[i] = g(prof.u[i]);
  } else {
    // phase 1: ascend once to measure the oracle's own half-period
    double t0 = lower.time_from(boot_dist);
    std::vector<double> probe{1e300};
    std::vector<double> sink(1, 0.0);
    std::vector<char> sink_filled(1, 0);
    auto [tc, uc] =
        detail::rk4_to_targets(g, t0, boot_dist, probe, sink, sink_filled, 0, 1,
                               [&](double u) { return rho - u > cap_dist; });
    double tstar = tc + upper.time_from(rho - uc);

    // phase 2: fold the grid by the measured period and ascend recording
    double period = 2.0 * tstar;
    std::vector<double> tau(n), sgn(n);
    for (int i = 0; i < n; ++i) {
      double r = std::fmod(prof.t[i], period);
      if (r < 0.0) r += period;
      if (r <= tstar) {
        tau[i] = r;
        sgn[i] = 1.0;
      } else {
        tau[i] = period - r;
        sgn[i] = -1.0;
      }
    }
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return tau[a] < tau[b]; });
    std::vector<double> sorted_tau(n);
    for (int i = 0; i < n; ++i) sorted_tau[i] = tau[order[i]];
    std::vector<double> sorted_u(n, -1.0);

    std::vector<char> filled(n, 0);
    std::size_t i0 = 0;
    while (i0 < sorted_tau.size() && sorted_tau[i0] <= t0) {
      sorted_u[i0] = lower.dist_at(sorted_tau[i0]);
      filled[i0] = 1;
      ++i0;
    }
    std::size_t i1 = sorted_tau.size();
    while (i1 > i0 && sorted_tau[i1 - 1] >= tstar - upper.time_from(cap_dist)) --i1;
    for (std::size_t i = i1; i < sorted_tau.size(); ++i) {
      double rem = tstar - sorted_tau[i];
      sorted_u[i] = rem <= 0.0 ? rho : rho - upper.dist_at(rem);
      filled[i] = 1;
    }
    detail::rk4_to_targets(g, t0, boot_dist, sorted_tau, sorted_u, filled, i0, i1,
                           [](double) { return true; });

    for (int i = 0; i < n; ++i) {
      prof.u[order[i]] = std::clamp(sorted_u[i], 0.0, rho);
      prof.du[order[i]] = sgn[order[i]] * g(prof.u[order[i]]);
    }
  }

  prof.max_first_integral_residual = first_integral_residual(prof, f, p);
  prof.max_ode_residual = ode_residual(prof, f, p);
  return prof;
}

}  // namespace plap
