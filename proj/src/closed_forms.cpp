#include "delaystab/closed_forms.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace delaystab {
namespace {

double sq(double x) { return x * x; }

double positive(double v, const char* name) {
  if (!(v > 0.0)) throw PreconditionError(std::string(name) + " is not positive");
  return v;
}

ConditionValue finish(const EquationSpec& spec, const AnalysisConfig& cfg, const RealFn& f) {
  ConditionValue out;
  out.sup_value = scan_sup(spec, f, cfg.scan, cfg.threads).value;
  out.holds = out.sup_value < 2.0;
  return out;
}

void require_no_discrete_delays(const EquationSpec& spec) {
  for (std::size_t k = 1; k < spec.a.size(); ++k) {
    const auto& ak = spec.a[k];
    if (ak.depends_on_t() || ak.eval(0.0) != 0.0) {
      throw PreconditionError("a_" + std::to_string(k) + " is not identically zero");
    }
  }
}

}  // namespace

ConditionValue cond_4_1(const EquationSpec& spec, const AnalysisConfig& cfg) {
  spec.validate();
  const std::size_t n = spec.n();
  return finish(spec, cfg, [&](double t) {
    const double a0 = positive(spec.a[0](t), "a_0(t)");
    double sum = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
      const double hk = spec.delay(k);
      const auto& bk = spec.b[k - 1];
      sum += std::fabs(spec.a[k](t)) + std::fabs(spec.a[k](t + hk)) + std::fabs(bk(t)) * hk +
             integrate_abs([&](double s) { return bk(s); }, t - hk, t, cfg.quad);
    }
    return (sum + sq(spec.sigma(t + spec.tau))) / a0;
  });
}

ConditionValue cond_4_2(const EquationSpec& spec, const AnalysisConfig& cfg) {
  spec.validate();
  const std::size_t n = spec.n();
  auto s0 = [&](double t) {
    double v = 0.0;
    for (std::size_t k = 0; k <= n; ++k) v += spec.a[k](t + spec.delay(k));
    return v;
  };
  auto a0_mass = [&](double t) {
    double v = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
      v += integrate_abs([&](double s) { return spec.a[k](s); }, t, t + spec.delay(k), cfg.quad);
    }
    return v;
  };
  auto b0_mass = [&](double t) {
    double v = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
      v += integrate_abs([&](double s) { return spec.b[k - 1](s); }, t - spec.delay(k), t, cfg.quad);
    }
    return v;
  };
  return finish(spec, cfg, [&](double t) {
    const double s0t = positive(s0(t), "S0(t)");
    double sum = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
      const double hk = spec.delay(k);
      const auto& ak = spec.a[k];
      const auto& bk = spec.b[k - 1];
      const double ak_shift = ak(t + hk);
      const double bk_t = bk(t);
      sum += integrate_abs([&](double s) { return s0t * ak(s + hk) - bk(s); }, t - hk, t, cfg.quad);
      sum += integrate_abs([&](double th) { return s0(th) * ak_shift - bk_t; }, t, t + hk, cfg.quad);
      if (bk_t != 0.0) sum += std::fabs(bk_t) * integrate(a0_mass, t, t + hk, cfg.quad);
      if (ak_shift != 0.0) sum += std::fabs(ak_shift) * integrate(b0_mass, t, t + hk, cfg.quad);
    }
    return (sum + sq(spec.sigma(t + spec.tau))) / s0t;
  });
}

namespace {

double s1_of(const EquationSpec& spec, double t) {
  double v = spec.a[0](t);
  for (std::size_t k = 1; k <= spec.n(); ++k) v += spec.b[k - 1](t) * spec.delay(k);
  return v;
}

double b1_of(const EquationSpec& spec, const QuadConfig& q, double t) {
  double v = 0.0;
  for (std::size_t k = 1; k <= spec.n(); ++k) {
    const double hk = spec.delay(k);
    const auto& bk = spec.b[k - 1];
    v += integrate_abs([&](double s) { return (s - t + hk) * bk(s); }, t - hk, t, q);
  }
  return v;
}

}  // namespace

ConditionValue cond_4_3(const EquationSpec& spec, const AnalysisConfig& cfg) {
  spec.validate();
  const std::size_t n = spec.n();
  auto a_abs_sum = [&](double th) {
    double v = 0.0;
    for (std::size_t i = 1; i <= n; ++i) v += std::fabs(spec.a[i](th));
    return v;
  };
  return finish(spec, cfg, [&](double t) {
    const double s1t = positive(s1_of(spec, t), "S1(t)");
    double sum = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
      const double hk = spec.delay(k);
      const double bk_t = std::fabs(spec.b[k - 1](t));
      if (bk_t != 0.0) {
        sum += bk_t * integrate([&](double th) { return (s1_of(spec, th) + a_abs_sum(th)) * (t - th + hk); },
                                t, t + hk, cfg.quad);
      }
      sum += std::fabs(spec.a[k](t)) + (1.0 + b1_of(spec, cfg.quad, t + hk)) * std::fabs(spec.a[k](t + hk));
    }
    return (sum + sq(spec.sigma(t + spec.tau))) / s1t + b1_of(spec, cfg.quad, t);
  });
}

ConditionValue cond_4_4(const EquationSpec& spec, const AnalysisConfig& cfg) {
  spec.validate();
  const std::size_t n = spec.n();
  auto s2 = [&](double t) {
    double v = spec.a[0](t);
    for (std::size_t k = 1; k <= n; ++k) v += spec.a[k](t + spec.delay(k)) + spec.b[k - 1](t) * spec.delay(k);
    return v;
  };
  return finish(spec, cfg, [&](double t) {
    const double s2t = positive(s2(t), "S2(t)");
    double kernel_part = 0.0;
    double shifted_part = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
      const double hk = spec.delay(k);
      const auto& ak = spec.a[k];
      const auto& bk = spec.b[k - 1];
      kernel_part += integrate_abs([&](double s) { return ak(s + hk) + (s - t + hk) * bk(s); }, t - hk, t, cfg.quad);
      const double ak_shift = ak(t + hk);
      const double bk_t = bk(t);
      shifted_part += integrate_abs(
          [&](double th) { return positive(s2(th), "S2(theta)") * (ak_shift + (t - th + hk) * bk_t); }, t, t + hk,
          cfg.quad);
    }
    return kernel_part + (shifted_part + sq(spec.sigma(t + spec.tau))) / s2t;
  });
}

ConditionValue cond_4_11(const EquationSpec& spec, const AnalysisConfig& cfg) {
  spec.validate();
  require_no_discrete_delays(spec);
  const std::size_t n = spec.n();
  return finish(spec, cfg, [&](double t) {
    const double a0 = positive(spec.a[0](t), "a_0(t)");
    double sum = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
      const double hk = spec.delay(k);
      const auto& bk = spec.b[k - 1];
      sum += std::fabs(bk(t)) * hk + integrate_abs([&](double s) { return bk(s); }, t - hk, t, cfg.quad);
    }
    return (sum + sq(spec.sigma(t + spec.tau))) / a0;
  });
}

ConditionValue cond_4_12(const EquationSpec& spec, const AnalysisConfig& cfg) {
  spec.validate();
  require_no_discrete_delays(spec);
  const std::size_t n = spec.n();
  return finish(spec, cfg, [&](double t) {
    const double s1t = positive(s1_of(spec, t), "S1(t)");
    double sum = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
      const double hk = spec.delay(k);
      const double bk_t = std::fabs(spec.b[k - 1](t));
      if (bk_t != 0.0) {
        sum += bk_t * integrate([&](double th) { return s1_of(spec, th) * (t - th + hk); }, t, t + hk, cfg.quad);
      }
    }
    return (sum + sq(spec.sigma(t + spec.tau))) / s1t + b1_of(spec, cfg.quad, t);
  });
}

bool region_4_6(const ScalarParams& pp) {
  const double a = pp.a, b = pp.b, h = pp.h, p = pp.p;
  if (!(a > 0.0)) return false;
  if (b <= 0.0) return b > (p - a * (1.0 - a * h)) / (h * (1.0 + a * h));
  if (b < a * a) {
    if (!(a * h < 1.0)) return false;
    return b > (p - a * (1.0 - a * h)) / (h * (1.0 - a * h));
  }
  return b < (a * (1.0 + a * h) - p) / (h * (1.0 + a * h));
}

bool region_4_7(const ScalarParams& pp) {
  const double x = pp.b * pp.h * pp.h;
  if (!(x > 0.0 && x < 2.0)) return false;
  return std::fabs(pp.a) < (pp.b * pp.h * (1.0 - 0.5 * x) - pp.p) / (1.0 + 0.5 * x);
}

double p_bound_4_8(double a, double b, double h) {
  const double s = a + b * h;
  if (!(s > 0.0)) return std::numeric_limits<double>::quiet_NaN();
  const double base = 1.0 - a * h - 0.5 * b * h * h;
  return a >= 0.0 ? s * base : s * (base - a * a / b);
}

bool region_4_8(const ScalarParams& pp) {
  const double bound = p_bound_4_8(pp.a, pp.b, pp.h);
  return !std::isnan(bound) && pp.p < bound;
}

double expm1_ratio(double x) { return x == 0.0 ? 1.0 : std::expm1(x) / x; }

double coshm1_ratio(double x) {
  if (x == 0.0) return 0.5;
  const double r = std::sinh(0.5 * x) / (0.5 * x);
  return 0.5 * r * r;
}

double c1_lhs(const ScalarParams& pp) {
  return 0.5 * std::fabs(pp.b) * (pp.h + pp.h * expm1_ratio(pp.mu * pp.h)) + pp.p * std::exp(-2.0 * pp.nu * pp.tau);
}

double c2_rhs(const ScalarParams& pp) {
  return pp.b * pp.h * (1.0 - pp.b * pp.h * pp.h * coshm1_ratio(pp.mu * pp.h)) * std::exp(2.0 * pp.nu * pp.tau);
}

bool region_C1(const ScalarParams& pp) {
  if (!(pp.mu >= 0.0)) return false;
  return c1_lhs(pp) < pp.a;
}

bool region_C2(const ScalarParams& pp) {
  if (pp.a != 0.0 || !(pp.b > 0.0) || !(pp.mu >= 0.0) || !(pp.mu <= 2.0 * pp.nu)) return false;
  return pp.p < c2_rhs(pp);
}

}  // namespace delaystab
