#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "delaystab/boundary.hpp"

using namespace delaystab;

constexpr double kPi = std::numbers::pi;

TEST_CASE("characteristic residual") {
  CHECK(std::abs(characteristic_residual(0.0, 0.0, 0.5, {1.0, 0.0}) - std::complex<double>(1.0, 0.0)) < 1e-15);
  CHECK_THROWS_AS(characteristic_residual(1.0, 1.0, 0.5, {0.0, 0.0}), std::invalid_argument);
  // On a + bh = 0 the residual vanishes as omega -> 0 along the reals.
  double prev = 1e300;
  for (double w : {1e-1, 1e-2, 1e-3, 1e-4}) {
    const double r = std::abs(characteristic_residual(4.0, -8.0, 0.5, {w, 0.0}));
    CHECK(r < prev);
    prev = r;
  }
  CHECK(prev < 1e-3);
}

TEST_CASE("boundary points") {
  auto p = boundary_point(2.0 * kPi, 0.5);
  CHECK(std::fabs(p.a) < 1e-12);
  CHECK(p.b == doctest::Approx(19.739208802178717).epsilon(1e-14));
  p = boundary_point(kPi, 0.5);
  CHECK(p.a == doctest::Approx(kPi).epsilon(1e-14));
  CHECK(std::fabs(p.b) < 1e-12);
  p = boundary_point(1e-4, 0.5);
  CHECK(std::fabs(p.a - 4.0) < 1e-3);
  CHECK(std::fabs(p.b + 8.0) < 1e-3);
  CHECK_THROWS_AS(boundary_point(4.0 * kPi, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(boundary_point(0.0, 0.5), std::invalid_argument);
}

TEST_CASE("boundary curve") {
  const auto two = boundary_curve(0.5, kPi, 2.0 * kPi, 2);
  REQUIRE(two.size() == 2);
  CHECK(two[0].beta == kPi);
  CHECK(two[1].beta == 2.0 * kPi);
  CHECK(two[1].b == doctest::Approx(2.0 * kPi * kPi));

  const auto curve = boundary_curve(0.5, 0.01, 4.0 * kPi - 0.01, 1000);
  REQUIRE(curve.size() == 1000);
  for (std::size_t i = 1; i < curve.size(); ++i) CHECK(curve[i].beta > curve[i - 1].beta);
  CHECK_THROWS_AS(boundary_curve(0.5, 1.0, 4.0 * kPi, 10), std::invalid_argument);
  CHECK_THROWS_AS(boundary_curve(0.5, 2.0, 1.0, 10), std::invalid_argument);
}

TEST_CASE("residual identity at random frequencies") {
  std::mt19937_64 rng(11);
  for (double h : {0.3, 0.5, 1.0}) {
    std::uniform_real_distribution<double> beta(0.01, 2.0 * kPi / h - 0.01);
    for (int i = 0; i < 1000; ++i) {
      const auto p = boundary_point(beta(rng), h);
      CHECK(std::abs(characteristic_residual(p.a, p.b, h, {0.0, p.beta})) < 1e-9);
    }
  }
}
