#include <doctest.h>

#include <cmath>

#include "plap/polynomial.hpp"
#include "plap/quadrature.hpp"

using namespace plap;

TEST_CASE("horner evaluation and calculus") {
  std::vector<double> c{1.0, -2.0, 3.0};  // 1 - 2x + 3x^2
  CHECK(poly::eval(c, 0.0) == 1.0);
  CHECK(poly::eval(c, 2.0) == doctest::Approx(9.0));
  auto d = poly::derivative(c);
  CHECK(d == std::vector<double>{-2.0, 6.0});
  auto a = poly::antiderivative(c, 5.0);
  CHECK(a == std::vector<double>{5.0, 1.0, -1.0, 1.0});
}

TEST_CASE("taylor shift recenters exactly") {
  // p(t) = t - t^3, p(1 + x) = -2x - 3x^2 - x^3
  std::vector<double> c{0.0, 1.0, 0.0, -1.0};
  auto s = poly::taylor_shift(c, 1.0);
  CHECK(s[0] == 0.0);
  CHECK(s[1] == -2.0);
  CHECK(s[2] == -3.0);
  CHECK(s[3] == -1.0);
}

TEST_CASE("root isolation on monotone intervals") {
  // t - t^3 on [0, 2]: roots 0 and 1
  auto r = poly::real_roots_in({0.0, 1.0, 0.0, -1.0}, 0.0, 2.0);
  REQUIRE(r.size() == 2);
  CHECK(r[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(r[1] == doctest::Approx(1.0).epsilon(1e-12));

  // (1 - t)^3: triple root at 1, found through the critical-point ladder
  auto r3 = poly::real_roots_in({1.0, -3.0, 3.0, -1.0}, 0.0, 2.0);
  REQUIRE(r3.size() == 1);
  CHECK(r3[0] == doctest::Approx(1.0).epsilon(1e-10));

  // double root (even multiplicity, no sign change)
  auto r2 = poly::real_roots_in({1.0, -2.0, 1.0}, 0.0, 2.0);  // (1-t)^2
  REQUIRE(r2.size() == 1);
  CHECK(r2[0] == doctest::Approx(1.0).epsilon(1e-10));

  // irrational roots of a quartic: t^4 - 3 has one root in [0, 2]
  auto r4 = poly::real_roots_in({-3.0, 0.0, 0.0, 0.0, 1.0}, 0.0, 2.0);
  REQUIRE(r4.size() == 1);
  CHECK(r4[0] == doctest::Approx(std::pow(3.0, 0.25)).epsilon(1e-13));
}

TEST_CASE("adaptive quadrature hits tight absolute tolerances") {
  auto s = quad::integrate([](double x) { return std::sin(x); }, 0.0, M_PI, 1e-12);
  CHECK(s.converged);
  CHECK(s.value == doctest::Approx(2.0).epsilon(1e-12));

  auto pi4 = quad::integrate([](double x) { return 4.0 / (1.0 + x * x); }, 0.0, 1.0, 1e-12);
  CHECK(pi4.value == doctest::Approx(M_PI).epsilon(1e-12));

  // integrable endpoint blow-up, no substitution: slow but correct
  auto sq = quad::integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, 1e-9,
                            100000);
  CHECK(sq.value == doctest::Approx(2.0).epsilon(1e-8));
}
