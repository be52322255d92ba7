#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "delaystab/closed_forms.hpp"
#include "delaystab/presets.hpp"

using namespace delaystab;

namespace {

EquationSpec general(double a0, double a1, double b1, double sigma, double h) {
  EquationSpec spec;
  spec.h = {h};
  spec.a = {CoeffExpr::constant(a0), CoeffExpr::constant(a1)};
  spec.b = {CoeffExpr::constant(b1)};
  spec.sigma = CoeffExpr::constant(sigma);
  return spec;
}

ScalarParams sp(double a, double b, double h, double p) {
  ScalarParams pp;
  pp.a = a;
  pp.b = b;
  pp.h = h;
  pp.p = p;
  return pp;
}

}  // namespace

TEST_CASE("(0,0) form") {
  auto eq = general(1.0, 0.0, 0.0, 0.0, 0.5);
  auto v = cond_4_1(eq, default_analysis(eq));
  CHECK(v.sup_value == 0.0);
  CHECK(v.holds);
  eq.sigma = CoeffExpr::constant(1.0);
  v = cond_4_1(eq, default_analysis(eq));
  CHECK(v.sup_value == doctest::Approx(1.0));
  CHECK(v.holds);
  const auto e45 = constant_delay_equation(-2.0, 9.0, 0.5, 0.55);
  CHECK_THROWS_AS(cond_4_1(e45, default_analysis(e45)), PreconditionError);
}

TEST_CASE("(n,0), (0,n), (n,n) forms") {
  const auto eq = general(1.5, 0.0, 0.0, 0.0, 0.5);
  const auto cfg = default_analysis(eq);
  CHECK(cond_4_2(eq, cfg).sup_value == 0.0);
  CHECK(cond_4_3(eq, cfg).sup_value == 0.0);
  CHECK(cond_4_4(eq, cfg).sup_value == 0.0);

  // p + |a^2 - b| h + a |b| h^2 < a at a = 2, b = 0: 2 < 2 fails
  const auto e1 = constant_delay_equation(2.0, 0.0, 0.5, 0.0);
  const auto v = cond_4_2(e1, default_analysis(e1));
  CHECK(v.sup_value == doctest::Approx(2.0).epsilon(1e-12));
  CHECK_FALSE(v.holds);

  // p < (a + bh)(1 - ah - bh^2/2) = 0.5625 at a = b = 1
  const auto e2 = constant_delay_equation(1.0, 1.0, 0.5, 0.1);
  CHECK(cond_4_4(e2, default_analysis(e2)).holds);
  const auto e3 = constant_delay_equation(1.0, 1.0, 0.5, 0.6);
  CHECK_FALSE(cond_4_4(e3, default_analysis(e3)).holds);
}

TEST_CASE("closed forms agree with the generic ratio") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> ua0(0.2, 3.0), ua1(-1.5, 1.5), ub(-3.0, 3.0), us2(0.0, 2.0);
  const double hs[] = {0.25, 0.5, 1.0};
  int compared = 0;
  for (int draw = 0; draw < 100; ++draw) {
    const double a0 = ua0(rng), a1 = ua1(rng), b = ub(rng), s = std::sqrt(us2(rng));
    const double h = hs[draw % 3];
    const auto eq = general(a0, a1, b, s, h);
    const auto cfg = default_analysis(eq);
    const Decomposition decs[] = {{0, 0}, {1, 0}, {0, 1}, {1, 1}};
    for (int i = 0; i < 4; ++i) {
      ConditionValue closed;
      try {
        closed = i == 0 ? cond_4_1(eq, cfg) : i == 1 ? cond_4_2(eq, cfg) : i == 2 ? cond_4_3(eq, cfg) : cond_4_4(eq, cfg);
      } catch (const PreconditionError&) {
        CHECK_FALSE(check_ratio_condition(eq, decs[i], cfg).sup_value);
        continue;
      }
      const auto generic = check_ratio_condition(eq, decs[i], cfg);
      REQUIRE(generic.sup_value);
      CHECK(*generic.sup_value == doctest::Approx(closed.sup_value).epsilon(1e-6));
      if (std::fabs(closed.sup_value - 2.0) > 1e-6) CHECK(generic.holds == closed.holds);
      ++compared;
    }
  }
  CHECK(compared > 300);
}

TEST_CASE("region 4_6") {
  CHECK(region_4_6(sp(1.0, 0.0, 0.5, 0.2)));
  for (double b : {-5.0, 0.0, 0.5, 3.0}) CHECK_FALSE(region_4_6(sp(0.0, b, 0.5, 0.1)));
  CHECK(region_4_6(sp(1.0, 1.0, 0.5, 0.0)));
  CHECK_FALSE(region_4_6(sp(1.0, 2.0, 0.5, 0.0)));
  // Three branches agree with the source inequality p + |a^2-b|h + a|b|h^2 < a.
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ua(0.01, 1.9), ub(-6.0, 6.0), up(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const double a = ua(rng), b = ub(rng), p = up(rng), h = 0.5;
    const double lhs = p + std::fabs(a * a - b) * h + a * std::fabs(b) * h * h;
    if (std::fabs(lhs - a) < 1e-9) continue;
    CHECK(region_4_6(sp(a, b, h, p)) == (lhs < a));
  }
}

TEST_CASE("region 4_7") {
  CHECK(region_4_7(sp(0.0, 2.0, 0.5, 0.2)));
  CHECK(region_4_7(sp(0.43, 2.0, 0.5, 0.2)));
  CHECK_FALSE(region_4_7(sp(0.45, 2.0, 0.5, 0.2)));
  CHECK_FALSE(region_4_7(sp(0.0, 0.0, 0.5, 0.0)));
  CHECK_FALSE(region_4_7(sp(0.0, 2.0, 0.5, 0.75)));
  CHECK_FALSE(region_4_7(sp(0.0, 8.0, 0.5, 0.0)));
}

TEST_CASE("region 4_8") {
  CHECK(p_bound_4_8(-2.0, 9.0, 0.5) == doctest::Approx(1.0763888888888889).epsilon(1e-14));
  CHECK(region_4_8(sp(-2.0, 9.0, 0.5, 0.55)));
  CHECK_FALSE(region_4_8(sp(-2.0, 9.0, 0.5, 1.08)));
  CHECK_FALSE(region_4_8(sp(-2.0, 4.0, 0.5, 0.0)));
  CHECK(std::isnan(p_bound_4_8(-2.0, 4.0, 0.5)));
  for (double b : {0.3, 1.0, 2.5, 4.0, 7.9}) {
    const double h = 0.5;
    CHECK(p_bound_4_8(0.0, b, h) == b * h * (1.0 - 0.5 * b * h * h));
  }
}

TEST_CASE("(C1) and (C2)") {
  const auto f5 = find_preset("fig5").scalar();
  CHECK(c1_lhs(f5) == doctest::Approx(2.5254219275204808).epsilon(1e-13));
  CHECK(region_C1(f5));
  auto zero_a = f5;
  zero_a.a = 0.0;
  CHECK_FALSE(region_C1(zero_a));

  const auto f6 = find_preset("fig6").scalar();
  CHECK(c2_rhs(f6) == doctest::Approx(1.5746245318199101).epsilon(1e-13));
  CHECK(region_C2(f6));
  auto fast = f6;
  fast.mu = 2.0 * fast.nu + 1e-9;
  CHECK_FALSE(region_C2(fast));
}

TEST_CASE("small-mu reductions") {
  ScalarParams pp = sp(2.0, 3.0, 0.5, 0.3);
  pp.mu = 1e-8;
  CHECK(std::fabs(c1_lhs(pp) - (std::fabs(pp.b) * pp.h + pp.p)) < 1e-6);
  pp.a = 0.0;
  pp.nu = 0.5e-8;
  CHECK(std::fabs(c2_rhs(pp) - pp.b * pp.h * (1.0 - 0.5 * pp.b * pp.h * pp.h)) < 1e-6);
  CHECK(expm1_ratio(0.0) == 1.0);
  CHECK(coshm1_ratio(0.0) == 0.5);
  CHECK(expm1_ratio(1e-12) == doctest::Approx(1.0 + 0.5e-12).epsilon(1e-15));
}

TEST_CASE("distributed-only forms") {
  auto eq = general(1.0, 0.0, 0.0, 0.0, 0.5);
  CHECK(cond_4_11(eq, default_analysis(eq)).sup_value == 0.0);
  CHECK(cond_4_12(eq, default_analysis(eq)).sup_value == 0.0);
  eq.a[1] = CoeffExpr::constant(0.1);
  CHECK_THROWS_AS(cond_4_11(eq, default_analysis(eq)), PreconditionError);

  const Preset p5 = find_preset("fig5");
  const auto e5 = p5.equation();
  const auto v11 = cond_4_11(e5, default_analysis(e5));
  CHECK(std::fabs(v11.sup_value - 1.6836146183469872) < 1e-9);
  CHECK(std::fabs(v11.sup_value - 2.0 * c1_lhs(p5.scalar()) / p5.a) < 1e-9);
  CHECK(v11.holds == region_C1(p5.scalar()));

  const Preset p6 = find_preset("fig6");
  const auto e6 = p6.equation();
  const auto v12 = cond_4_12(e6, default_analysis(e6));
  const double c2_form = 2.0 * (p6.b * p6.h * p6.h * coshm1_ratio(p6.mu * p6.h) + p6.p / (p6.b * p6.h));
  CHECK(std::fabs(v12.sup_value - 0.92186311229810972) < 1e-9);
  CHECK(std::fabs(v12.sup_value - c2_form) < 1e-9);
  CHECK(v12.holds == region_C2(p6.scalar()));
}
