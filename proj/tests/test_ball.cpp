#include <doctest.h>

#include <cmath>

#include "plap/ball.hpp"
#include "support/ball_oracle.hpp"
#include "support/fixtures.hpp"

using namespace plap;

TEST_CASE("truncation hypotheses and evaluators") {
  auto f = fixtures::logistic_well();
  auto tf = truncate(f, 1.0);
  CHECK(tf.F_tilde(1.0) == doctest::Approx(0.0));
  CHECK(tf.F_tilde(0.0) == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
  CHECK(tf.f_tilde(2.0) == 0.0);
  CHECK(tf.F_tilde(2.0) == 0.0);
  CHECK(tf.F_tilde(-1.0) == doctest::Approx(tf.F_tilde(0.0)));  // f(0) = 0 here

  // with f(0) > 0 the left extension grows linearly
  auto ramp = NonlinearitySpec::create({0.0, 1.0}, {{1.0, -1.0}}, 1.0);
  auto tr = truncate(ramp, 1.0);
  CHECK(tr.F_tilde(-1.0) == doctest::Approx(tr.F_tilde(0.0) + 1.0));

  // refusals carry witnesses
  CHECK_THROWS_AS(truncate(fixtures::cosine_well(), 2.0), hypothesis_error);  // f(0) < 0
  CHECK_THROWS_AS(truncate(f, 0.5), hypothesis_error);                        // f(rho) != 0
  auto valley = NonlinearitySpec::create({0.0, 1.0}, {{0.0, -1.0, 1.0}}, 1.0);
  CHECK_THROWS_AS(truncate(valley, 1.0), hypothesis_error);  // F_rho <= 0 at 0
}

TEST_CASE("small ball keeps the minimizer small, large ball saturates") {
  auto f = fixtures::logistic_well();
  auto small = minimize_radial(f, 2.0, 2, 1.0, 1.0, 128);
  CHECK(small.sup_norm <= 0.5);
  // the zero function is admissible, so the minimum is at most its energy
  TruncatedNonlinearity tf = truncate(f, 1.0);
  detail::RadialEnergy energy{&tf, 2.0, 2, 1.0, 128};
  std::vector<double> zero(129, 0.0);
  CHECK(small.energy <= energy(zero, nullptr) + 1e-12);

  auto large = minimize_radial(f, 2.0, 2, 1.0, 30.0, 128);
  CHECK(large.sup_norm >= 0.95);
  CHECK(large.sup_norm <= 1.0);
}

TEST_CASE("minimizer beats the plateau comparison function") {
  auto f = fixtures::logistic_well();
  for (double p : {1.5, 2.0, 3.0}) {
    for (double r : {5.0, 12.0}) {
      auto sol = minimize_radial(f, p, 2, 1.0, r, 128);
      TruncatedNonlinearity tf = truncate(f, 1.0);
      detail::RadialEnergy energy{&tf, p, 2, r, 128};
      auto w = plateau_start(1.0, r, 128);
      CHECK(sol.energy <= energy(w, nullptr) + 1e-10);
      // range and radial monotonicity
      for (double v : sol.u) {
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
      }
      for (std::size_t j = 0; j + 1 < sol.u.size(); ++j)
        CHECK(sol.u[j + 1] <= sol.u[j] + 1e-12);
    }
  }
}

TEST_CASE("grid refinement moves the sup norm only slightly") {
  auto f = fixtures::logistic_well();
  auto c = minimize_radial(f, 2.0, 2, 1.0, 10.0, 128);
  auto fine = minimize_radial(f, 2.0, 2, 1.0, 10.0, 256);
  CHECK(std::abs(c.sup_norm - fine.sup_norm) <= 5e-3);
}

TEST_CASE("energy descent agrees with the independent EL fixed point") {
  auto f = fixtures::logistic_well();
  for (double p : {1.5, 2.0, 3.0}) {
    auto sol = minimize_radial(f, p, 2, 1.0, 10.0, 128);
    double oracle = ball_oracle::el_fixed_point_sup(f, p, 2, 1.0, 10.0, 128);
    CHECK(std::abs(sol.sup_norm - oracle) <= 5e-3);
  }
}

TEST_CASE("scan finds the threshold radius and reports the table") {
  auto f = fixtures::logistic_well();
  auto scan = sup_norm_scan(f, 2.0, 2, 1.0, 0.05, {1.0, 5.0, 10.0, 15.0}, 128);
  CHECK(scan.R0 <= 15.0);
  CHECK(scan.table.size() == 4);
  // trivial threshold: the first radius qualifies
  auto scan0 = sup_norm_scan(f, 2.0, 2, 1.0, 1.0, {1.0, 5.0}, 128);
  CHECK(scan0.R0 == 1.0);
  // unreachable threshold: error
  CHECK_THROWS_AS(sup_norm_scan(f, 2.0, 2, 1.0, 1e-9, {1.0}, 128), convergence_error);
  CHECK_THROWS_AS(sup_norm_scan(f, 2.0, 2, 1.0, 0.05, {5.0, 1.0}, 128), argument_error);
}

TEST_CASE("descent accepts only energy-nonincreasing iterates") {
  auto f = fixtures::logistic_well();
  TruncatedNonlinearity tf = truncate(f, 1.0);
  detail::RadialEnergy energy{&tf, 2.0, 2, 8.0, 256};
  std::vector<double> accepted;
  auto eval = [&](const std::vector<double>& u, std::vector<double>* g) {
    double e = energy(u, g);
    if (g) accepted.push_back(e);  // gradients are only requested at accepted points
    return e;
  };
  auto project = [&](std::vector<double>& u) {
    u.back() = 0.0;
    for (double& v : u) v = std::clamp(v, 0.0, 1.0);
  };
  std::vector<double> u = plateau_start(1.0, 8.0, 256);
  minimize(u, eval, project, {});
  REQUIRE(accepted.size() > 2);
  for (std::size_t k = 0; k + 1 < accepted.size(); ++k)
    CHECK(accepted[k + 1] <= accepted[k]);
}

TEST_CASE("bulk-versus-ring energy mechanism at a computable instance") {
  // With eps = 0.3 the bulk lower bound pi r^2 F_rho(rho - eps) overtakes the
  // ring cost within r <= 30, so the minimizer's full 2-D energy must fall
  // below it once the sup norm has crossed rho - eps.
  auto f = fixtures::logistic_well();
  double rho = 1.0, eps = 0.3;
  double Frho_eps = f.primitive(rho) - f.primitive(rho - eps);
  double r = 30.0;
  auto sol = minimize_radial(f, 2.0, 2, rho, r, 512);
  CHECK(sol.sup_norm >= rho - eps);
  double full_energy = 2.0 * M_PI * sol.energy;
  CHECK(full_energy < M_PI * r * r * Frho_eps);

  // on a small ball the minimizer stays below rho - eps and the bulk bound
  // is a genuine lower bound for its energy
  double rs = 1.0;
  auto tiny = minimize_radial(f, 2.0, 2, rho, rs, 128);
  REQUIRE(tiny.sup_norm <= rho - eps);
  CHECK(2.0 * M_PI * tiny.energy >= M_PI * rs * rs * Frho_eps * (1.0 - 1e-9));
}
