#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "plap/errors.hpp"

namespace plap {

struct DescentOptions {
  long max_iterations = 300000;
  double energy_tol = 1e-12;  // stop when the per-step decrease falls below
                              // energy_tol * (1 + |E|), two steps in a row
  double grad_tol = 0.0;      // optional: also require sup|g| below this
  double alpha0 = 1.0;
  // optional diagonal metric: steps take -alpha g/metric, which equalizes
  // step scales when the energy carries strongly nonuniform node measures
  const std::vector<double>* metric = nullptr;
  // optional early abandon: give up (converged = false) once this many
  // iterations have passed while the energy is still above abandon_above;
  // used to cut off a descent branch that another branch already beat
  long abandon_after = 0;
  double abandon_above = 0.0;
};

struct DescentReport {
  double energy = 0.0;
  long iterations = 0;
  bool converged = false;
};

/// Projected gradient descent with Barzilai-Borwein step lengths and a
/// monotone backtracking (Armijo) line search.  `eval(x, grad)` returns the
/// energy and fills the gradient when grad != nullptr; `project` restores
/// the feasible set in place after each trial step.  Deterministic given the
/// inputs.  Throws convergence_error (with the tail of the energy trace) at
/// the iteration cap.
template <class Eval, class Project>
DescentReport minimize(std::vector<double>& x, Eval&& eval, Project&& project,
                       const DescentOptions& opt = {}) {
  const std::size_t n = x.size();
  project(x);
  std::vector<double> g(n), gn(n), xn(n);
  double energy = eval(x, &g);
  double alpha = opt.alpha0;
  int small_steps = 0;
  int stalls = 0;
  std::vector<double> trace;

  DescentReport rep;
  for (long iter = 1; iter <= opt.max_iterations; ++iter) {
    rep.iterations = iter;
    double alpha_try = std::clamp(alpha, 1e-18, 1e18);
    double energy_new = energy;
    bool accepted = false;
    for (int bt = 0; bt < 80; ++bt) {
      if (opt.metric)
        for (std::size_t i = 0; i < n; ++i)
          xn[i] = x[i] - alpha_try * g[i] / (*opt.metric)[i];
      else
        for (std::size_t i = 0; i < n; ++i) xn[i] = x[i] - alpha_try * g[i];
      project(xn);
      energy_new = eval(xn, nullptr);
      __float128 model = 0;
      for (std::size_t i = 0; i < n; ++i)
        model += static_cast<__float128>(g[i]) * (x[i] - xn[i]);
      double decrease_model = static_cast<double>(model);
      if (energy_new <= energy - 1e-4 * std::max(decrease_model, 0.0) &&
          energy_new <= energy) {
        accepted = true;
        break;
      }
      alpha_try *= 0.5;
    }
    if (!accepted) {
      // no decrease at floating-point resolution: numerically stationary
      rep.converged = true;
      rep.energy = energy;
      return rep;
    }
    double en2 = eval(xn, &gn);
    (void)en2;

    __float128 ssq = 0, syq = 0;
    for (std::size_t i = 0; i < n; ++i) {
      double s = xn[i] - x[i];
      ssq += static_cast<__float128>(opt.metric ? (*opt.metric)[i] * s : s) * s;
      syq += static_cast<__float128>(s) * (gn[i] - g[i]);
    }
    double ss = static_cast<double>(ssq), sy = static_cast<double>(syq);
    alpha = (sy > 1e-300) ? ss / sy : alpha_try * 2.0;

    double decrease = energy - energy_new;
    x.swap(xn);
    g.swap(gn);
    energy = energy_new;
    trace.push_back(energy);
    if (trace.size() > 1000) trace.erase(trace.begin());

    bool grad_ok = true;
    if (opt.grad_tol > 0.0) {
      double gmax = 0.0;
      for (double v : g) gmax = std::max(gmax, std::abs(v));
      grad_ok = gmax <= opt.grad_tol;
    }
    if (decrease < opt.energy_tol * (1.0 + std::abs(energy))) {
      ++stalls;
      small_steps = grad_ok ? small_steps + 1 : 0;
    } else {
      small_steps = 0;
      stalls = 0;
    }
    if (small_steps >= 2 || stalls >= 500) {
      rep.converged = true;
      rep.energy = energy;
      return rep;
    }
    if (opt.abandon_after > 0 && iter >= opt.abandon_after &&
        energy > opt.abandon_above) {
      rep.converged = false;
      rep.energy = energy;
      return rep;
    }
  }
  throw convergence_error("descent hit its iteration cap before converging",
                          std::move(trace));
}

/// Least-squares projection onto nonincreasing sequences (pool adjacent
/// violators).
inline void project_nonincreasing(std::vector<double>& y) {
  const std::size_t n = y.size();
  std::vector<double> mean;
  std::vector<std::size_t> count;
  mean.reserve(n);
  count.reserve(n);
  for (double v : y) {
    mean.push_back(v);
    count.push_back(1);
    while (mean.size() >= 2 && mean[mean.size() - 2] < mean.back()) {
      double m = (mean[mean.size() - 2] * static_cast<double>(count[count.size() - 2]) +
                  mean.back() * static_cast<double>(count.back())) /
                 static_cast<double>(count[count.size() - 2] + count.back());
      count[count.size() - 2] += count.back();
      mean[mean.size() - 2] = m;
      mean.pop_back();
      count.pop_back();
    }
  }
  std::size_t idx = 0;
  for (std::size_t b = 0; b < mean.size(); ++b)
    for (std::size_t k = 0; k < count[b]; ++k) y[idx++] = mean[b];
}

}  // namespace plap
