#include <doctest.h>

#include <cmath>
#include <functional>

#include "plap/strip.hpp"
#include "support/fixtures.hpp"

using namespace plap;

namespace {

GridSolution make_field(double W, double H, int nx, int ny,
                        const std::function<double(double, double)>& g) {
  GridSolution sol;
  sol.W = W;
  sol.H = H;
  sol.nx = nx;
  sol.ny = ny;
  sol.u.resize(static_cast<std::size_t>(nx) * ny);
  double hx = W / nx, hy = H / (ny - 1);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      sol.u[static_cast<std::size_t>(j) * nx + i] = g(hx * i, hy * j);
  return sol;
}

}  // namespace

TEST_CASE("symmetry deviation of synthetic fields") {
  auto flat = make_field(4.0, 6.0, 33, 49, [](double, double y) { return y; });
  CHECK(symmetry_deviation(flat) == 0.0);
  double delta = 0.25;
  auto striped = make_field(4.0, 6.0, 34, 49, [&](double x, double y) {
    int i = static_cast<int>(std::lround(x / (4.0 / 34)));
    return y + delta * (i % 2);
  });
  CHECK(symmetry_deviation(striped) == doctest::Approx(delta));
}

TEST_CASE("profile comparison: self-tabulation and zero field") {
  auto f = fixtures::cubic_well();
  auto entry = catalog(f, 2.0).entries[1];
  auto prof = build_profile(f, 2.0, entry, 12.0, 4097);

  auto tab = make_field(4.0, 12.0, 33, 65, [&](double, double y) {
    return level_at_time(f, 2.0, 1.0, y);
  });
  CHECK(compare_to_profile(tab, prof) <= 1e-6);

  auto zero = make_field(4.0, 12.0, 33, 65, [](double, double) { return 0.0; });
  CHECK(compare_to_profile(zero, prof) ==
        doctest::Approx(std::tanh(12.0 / std::sqrt(2.0))).epsilon(1e-6));

  auto shallow = make_field(4.0, 20.0, 33, 65, [](double, double) { return 0.0; });
  CHECK_THROWS_AS(compare_to_profile(shallow, prof), argument_error);
}

TEST_CASE("strip solve flattens a lateral perturbation") {
  auto f = fixtures::cubic_well();
  auto sol = solve_strip(f, 2.0, 1.0, 4.0, 6.0, 33, 49, StripInit::PerturbedProfile);
  CHECK(sol.symmetry_deviation <= 1e-4);
  CHECK(sol.profile_mismatch <= 2e-3);
  CHECK(min_vertical_increment(sol) >= -1e-10);
  for (double v : sol.u) {
    CHECK(v >= -1e-12);
    CHECK(v <= 1.0 + 1e-12);
  }
}

TEST_CASE("zero start lands in the same basin as the perturbed start") {
  auto f = fixtures::cubic_well();
  auto a = solve_strip(f, 2.0, 1.0, 4.0, 6.0, 33, 49, StripInit::PerturbedProfile);
  auto b = solve_strip(f, 2.0, 1.0, 4.0, 6.0, 33, 49, StripInit::Zero);
  double sup = 0.0;
  for (std::size_t k = 0; k < a.u.size(); ++k)
    sup = std::max(sup, std::abs(a.u[k] - b.u[k]));
  CHECK(sup <= 1e-3);
}

TEST_CASE("random start is reproducible for a fixed seed") {
  auto f = fixtures::cubic_well();
  auto a = solve_strip(f, 2.0, 1.0, 4.0, 6.0, 33, 49, StripInit::Random, 42);
  auto b = solve_strip(f, 2.0, 1.0, 4.0, 6.0, 33, 49, StripInit::Random, 42);
  CHECK(a.u == b.u);
  CHECK(a.energy == b.energy);
}

TEST_CASE("lateral translation equivariance of the converged field") {
  auto f = fixtures::cubic_well();
  int nx = 33, ny = 33;
  double W = 4.0, H = 6.0;
  double hx = W / nx, hy = H / (ny - 1);
  auto init_at = [&](double x, double y) {
    return level_at_time(f, 2.0, 1.0, y) +
           0.1 * std::sin(2.0 * M_PI * x / W) * std::sin(M_PI * y / H);
  };
  std::vector<double> init0(static_cast<std::size_t>(nx) * ny),
      init1(static_cast<std::size_t>(nx) * ny);
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      init0[static_cast<std::size_t>(j) * nx + i] = init_at(hx * i, hy * j);
      init1[static_cast<std::size_t>(j) * nx + i] = init_at(hx * (i + 1), hy * j);
    }
  DescentOptions tight;
  tight.energy_tol = 1e-15;
  tight.grad_tol = 1e-12;
  tight.max_iterations = 2000000;
  auto a = solve_strip_from(f, 2.0, 1.0, W, H, nx, ny, init0, tight);
  auto b = solve_strip_from(f, 2.0, 1.0, W, H, nx, ny, init1, tight);
  // a shifted by one cell should match b
  double sup = 0.0;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      sup = std::max(sup, std::abs(a.at((i + 1) % nx, j) - b.at(i, j)));
  CHECK(sup <= 1e-10);
}

TEST_CASE("near-stationarity of the exact profile on a fine grid") {
  auto f = fixtures::cubic_well();
  int nx = 65, ny = 257;
  double W = 8.0, H = 12.0;
  auto field = make_field(W, H, nx, ny, [&](double, double y) {
    return std::tanh(y / std::sqrt(2.0));
  });
  detail::ExtendedF ext{&f, f.eval(f.cap()), f.primitive(f.cap()), f.cap()};
  detail::StripEnergy energy{ext, 2.0, nx, ny, W / nx, H / (ny - 1)};
  std::vector<double> g;
  double e0 = energy(field.u, &g);
  // first backtracking step exactly as the solver takes it
  double alpha = 1.0;
  double first_decrease = 0.0;
  for (int bt = 0; bt < 60; ++bt) {
    std::vector<double> trial = field.u;
    for (std::size_t k = 0; k < trial.size(); ++k) trial[k] -= alpha * g[k];
    double e1 = energy(trial, nullptr);
    if (e1 <= e0) {
      first_decrease = e0 - e1;
      break;
    }
    alpha *= 0.5;
  }
  CHECK(first_decrease <= 1e-8);
}

TEST_CASE("doubling the height closes the gap to rho at the top") {
  auto f = fixtures::cubic_well();
  auto shallow = solve_strip(f, 2.0, 1.0, 4.0, 6.0, 33, 65, StripInit::PerturbedProfile);
  auto tall = solve_strip(f, 2.0, 1.0, 4.0, 12.0, 33, 65, StripInit::PerturbedProfile);
  auto top_interior_gap = [](const GridSolution& sol) {
    double mean = 0.0;
    for (int i = 0; i < sol.nx; ++i) mean += sol.at(i, sol.ny - 2);
    return 1.0 - mean / sol.nx;
  };
  CHECK(top_interior_gap(tall) < top_interior_gap(shallow));
}

TEST_CASE("strip refusal without an increasing catalog entry") {
  // f = t - 1 has only the periodic profile
  CHECK_THROWS_AS(
      solve_strip(fixtures::cosine_well(), 2.0, 2.0, 4.0, 6.0, 33, 49, StripInit::Zero),
      hypothesis_error);
}
