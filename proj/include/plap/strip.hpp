#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "plap/classification.hpp"
#include "plap/descent.hpp"
#include "plap/errors.hpp"
#include "plap/nonlinearity.hpp"
#include "plap/profile.hpp"

namespace plap {

/// 2-D strip solution: x-periodic laterally, Dirichlet rows at the bottom
/// (zero) and top (profile value at height H).  Row-major storage, x fastest.
struct GridSolution {
  double W = 0.0, H = 0.0;
  int nx = 0, ny = 0;
  std::vector<double> u;  // size nx * ny, u[j*nx + i]
  double energy = 0.0;
  long iterations = 0;
  double symmetry_deviation = 0.0;
  double profile_mismatch = 0.0;

  double at(int i, int j) const { return u[static_cast<std::size_t>(j) * nx + i]; }
};

enum class StripInit { PerturbedProfile, Random, Zero };

/// max over rows of the lateral oscillation; zero for exactly 1-D fields.
inline double symmetry_deviation(const GridSolution& sol) {
  double worst = 0.0;
  for (int j = 0; j < sol.ny; ++j) {
    double lo = sol.at(0, j), hi = lo;
    for (int i = 1; i < sol.nx; ++i) {
      lo = std::min(lo, sol.at(i, j));
      hi = std::max(hi, sol.at(i, j));
    }
    worst = std::max(worst, hi - lo);
  }
  return worst;
}

/// sup over nodes of |u(i,j) - profile(y_j)|, the profile interpolated
/// linearly onto the row heights.
inline double compare_to_profile(const GridSolution& sol, const Profile& prof) {
  if (prof.t.empty() || prof.t.back() < sol.H * (1.0 - 1e-12))
    throw argument_error("profile does not cover the strip height");
  double hy = sol.H / static_cast<double>(sol.ny - 1);
  double worst = 0.0;
  for (int j = 0; j < sol.ny; ++j) {
    double y = hy * static_cast<double>(j);
    auto it = std::lower_bound(prof.t.begin(), prof.t.end(), y);
    double v;
    if (it == prof.t.begin()) {
      v = prof.u.front();
    } else if (it == prof.t.end()) {
      v = prof.u.back();
    } else {
      std::size_t k = static_cast<std::size_t>(it - prof.t.begin());
      double w = (y - prof.t[k - 1]) / (prof.t[k] - prof.t[k - 1]);
      v = (1.0 - w) * prof.u[k - 1] + w * prof.u[k];
    }
    for (int i = 0; i < sol.nx; ++i)
      worst = std::max(worst, std::abs(sol.at(i, j) - v));
  }
  return worst;
}

/// min over vertical node pairs of u(i,j+1) - u(i,j); nonnegative (within
/// rounding) for monotone fields.
inline double min_vertical_increment(const GridSolution& sol) {
  double worst = std::numeric_limits<double>::infinity();
  for (int j = 0; j + 1 < sol.ny; ++j)
    for (int i = 0; i < sol.nx; ++i)
      worst = std::min(worst, sol.at(i, j + 1) - sol.at(i, j));
  return worst;
}

namespace detail {

/// f and F extended linearly-constantly outside [0, M]; descent trials may
/// step outside the analysis window transiently.
struct ExtendedF {
  const NonlinearitySpec* f;
  double fM, FM, M;
  double value(double t) const {
    if (t < 0.0) return f->eval(0.0) * t;
    if (t > M) return FM + fM * (t - M);
    return f->primitive(t);
  }
  double slope(double t) const {
    if (t < 0.0) return f->eval(0.0);
    if (t > M) return fM;
    return f->eval(t);
  }
};

struct StripEnergy {
  ExtendedF ext;
  double p;
  int nx, ny;
  double hx, hy;

  // node gradient magnitude squared: mean of the squared adjacent edge
  // differences per direction, one-sided at the walls
  double q_at(const std::vector<double>& u, int i, int j) const {
    auto U = [&](int ii, int jj) {
      ii = (ii % nx + nx) % nx;
      return u[static_cast<std::size_t>(jj) * nx + ii];
    };
    double dxm = (U(i, j) - U(i - 1, j)) / hx;
    double dxp = (U(i + 1, j) - U(i, j)) / hx;
    double gx2 = 0.5 * (dxm * dxm + dxp * dxp);
    double gy2;
    if (j == 0) {
      double dyp = (U(i, j + 1) - U(i, j)) / hy;
      gy2 = dyp * dyp;
    } else if (j == ny - 1) {
      double dym = (U(i, j) - U(i, j - 1)) / hy;
      gy2 = dym * dym;
    } else {
      double dym = (U(i, j) - U(i, j - 1)) / hy;
      double dyp = (U(i, j + 1) - U(i, j)) / hy;
      gy2 = 0.5 * (dym * dym + dyp * dyp);
    }
    return gx2 + gy2;
  }

  /// Energy of the full field; gradient w.r.t. interior rows only.  Wall
  /// rows carry half a cell of area, which makes the wall treatment
  /// consistent with the interior stencil.  The energy accumulates in quad
  /// precision and the gradient is gathered per node in a fixed stencil
  /// order, so the evaluation commutes with lateral grid translations at
  /// floating-point level.
  double operator()(const std::vector<double>& u, std::vector<double>* grad) const {
    const double cell = hx * hy;
    __float128 E = 0;
    std::vector<double> w(u.size());  // area-weighted |grad u|^{p-2}, floored
    for (int j = 0; j < ny; ++j) {
      double wt = (j == 0 || j == ny - 1) ? 0.5 : 1.0;
      for (int i = 0; i < nx; ++i) {
        double q = q_at(u, i, j);
        double gmag = std::sqrt(q);
        E += static_cast<__float128>(
            wt * cell * (std::pow(gmag, p) / p - ext.value(u[idx(i, j)])));
        w[idx(i, j)] = wt * std::pow(std::max(gmag, 1e-12), p - 2.0);
      }
    }
    if (!grad) return static_cast<double>(E);

    grad->assign(u.size(), 0.0);
    for (int j = 1; j <= ny - 2; ++j)
      for (int i = 0; i < nx; ++i) {
        int im = (i + nx - 1) % nx, ip = (i + 1) % nx;
        double un = u[idx(i, j)];
        double wn = w[idx(i, j)];
        double acc = 0.0;
        {
          double d = (u[idx(im, j)] - un) / hx;
          acc -= cell * d * (0.5 * wn + 0.5 * w[idx(im, j)]) / hx;
        }
        {
          double d = (u[idx(ip, j)] - un) / hx;
          acc -= cell * d * (0.5 * wn + 0.5 * w[idx(ip, j)]) / hx;
        }
        {
          double eta = (j - 1 == 0) ? 1.0 : 0.5;
          double d = (u[idx(i, j - 1)] - un) / hy;
          acc -= cell * d * (0.5 * wn + eta * w[idx(i, j - 1)]) / hy;
        }
        {
          double eta = (j + 1 == ny - 1) ? 1.0 : 0.5;
          double d = (u[idx(i, j + 1)] - un) / hy;
          acc -= cell * d * (0.5 * wn + eta * w[idx(i, j + 1)]) / hy;
        }
        acc -= cell * ext.slope(un);
        (*grad)[idx(i, j)] = acc;
      }
    return static_cast<double>(E);
  }

  std::size_t idx(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }
};

}  // namespace detail

/// Solve the strip problem starting from an explicit initial field (size
/// nx*ny; its boundary rows are overwritten with the Dirichlet data).
inline GridSolution solve_strip_from(const NonlinearitySpec& f, double p, double rho,
                                     double W, double H, int nx, int ny,
                                     std::vector<double> init,
                                     const DescentOptions& opt = {}) {
  if (nx < 33 || ny < 33) throw argument_error("grid must be at least 33 x 33");
  if (!(W > 0.0) || !(H > 0.0)) throw argument_error("strip dimensions must be positive");
  if (!(p > 1.0)) throw argument_error("p must exceed 1");

  // the catalog must contain an increasing entry with this limit
  Catalog cat = catalog(f, p);
  const ProfileEntry* entry = nullptr;
  for (const auto& e : cat.entries)
    if (e.kind == ProfileKind::Increasing &&
        std::abs(e.rho - rho) <= 1e-9 * std::max(1.0, rho))
      entry = &e;
  if (!entry)
    throw hypothesis_error("no increasing profile with limit rho in the catalog");

  Profile prof = build_profile(f, p, *entry, H, 4097);
  double utop = prof.u.back();

  GridSolution sol;
  sol.W = W;
  sol.H = H;
  sol.nx = nx;
  sol.ny = ny;
  sol.u = std::move(init);
  if (sol.u.size() != static_cast<std::size_t>(nx) * ny)
    throw argument_error("initial field has the wrong size");
  for (int i = 0; i < nx; ++i) {
    sol.u[i] = 0.0;
    sol.u[static_cast<std::size_t>(ny - 1) * nx + i] = utop;
  }

  detail::ExtendedF ext{&f, f.eval(f.cap()), f.primitive(f.cap()), f.cap()};
  detail::StripEnergy energy{ext, p, nx, ny, W / nx, H / (ny - 1)};
  auto eval = [&](const std::vector<double>& u, std::vector<double>* g) {
    return energy(u, g);
  };
  auto project = [&](std::vector<double>&) {};
  DescentReport rep = minimize(sol.u, eval, project, opt);
  sol.energy = rep.energy;
  sol.iterations = rep.iterations;
  sol.symmetry_deviation = symmetry_deviation(sol);
  sol.profile_mismatch = compare_to_profile(sol, prof);
  return sol;
}

/// Solve the strip problem from one of the named deterministic starts.
inline GridSolution solve_strip(const NonlinearitySpec& f, double p, double rho,
                                double W, double H, int nx, int ny, StripInit init,
                                std::uint64_t seed = 0,
                                const DescentOptions& opt = {}) {
  std::vector<double> u0(static_cast<std::size_t>(nx) * ny, 0.0);
  double hy = H / (ny - 1);
  double hx = W / nx;
  if (init == StripInit::PerturbedProfile) {
    for (int j = 0; j < ny; ++j) {
      double y = hy * j;
      double base = level_at_time(f, p, rho, y);
      for (int i = 0; i < nx; ++i) {
        double x = hx * i;
        u0[static_cast<std::size_t>(j) * nx + i] =
            base + 0.1 * std::sin(2.0 * M_PI * x / W) * std::sin(M_PI * y / H);
      }
    }
  } else if (init == StripInit::Random) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(0.0, rho);
    for (int j = 1; j < ny - 1; ++j)
      for (int i = 0; i < nx; ++i)
        u0[static_cast<std::size_t>(j) * nx + i] = dist(rng);
  }
  return solve_strip_from(f, p, rho, W, H, nx, ny, std::move(u0), opt);
}

}  // namespace plap
