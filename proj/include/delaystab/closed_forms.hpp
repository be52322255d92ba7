#pragma once

#include <stdexcept>

#include "delaystab/equation.hpp"
#include "delaystab/stability.hpp"

namespace delaystab {

/// The denominator of a closed-form ratio is not positive on the horizon.
class PreconditionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct ConditionValue {
  double sup_value = 0.0;
  bool holds = false;  // sup_value < 2
};

// Closed-form members of the condition family for general n, transcribed
// directly from their printed forms (not through DecompositionTerms).
// All throw PreconditionError when the leading denominator is not positive.

/// (n1, n2) = (0, 0): sup (1/a0)[sum(|a_k(t)| + |a_k(t+h_k)| + |b_k(t)| h_k
/// + int_{t-h_k}^t |b_k|) + sigma^2(t+tau)] < 2.
ConditionValue cond_4_1(const EquationSpec& spec, const AnalysisConfig& cfg);
/// (n, 0), with S0, A0, B0.
ConditionValue cond_4_2(const EquationSpec& spec, const AnalysisConfig& cfg);
/// (0, n), with S1, B1.
ConditionValue cond_4_3(const EquationSpec& spec, const AnalysisConfig& cfg);
/// (n, n), with S2.
ConditionValue cond_4_4(const EquationSpec& spec, const AnalysisConfig& cfg);
/// Distributed delays only (a_k = 0 for k >= 1): the (0, 0) form.
ConditionValue cond_4_11(const EquationSpec& spec, const AnalysisConfig& cfg);
/// Distributed delays only: the (0, n) form.
ConditionValue cond_4_12(const EquationSpec& spec, const AnalysisConfig& cfg);

/// Scalar parameters of the constant-coefficient and exponentially varying
/// single-delay examples; p = sigma^2 / 2.
struct ScalarParams {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double h = 0.5;
  double p = 0.0;
  double tau = 0.0;
  double mu = 0.0;
  double nu = 0.0;
};

/// p + |a^2 - b| h + a |b| h^2 < a in its three-branch form (requires a > 0).
bool region_4_6(const ScalarParams& pp);
/// |a| < (bh(1 - bh^2/2) - p) / (1 + bh^2/2), 0 < bh^2 < 2.
bool region_4_7(const ScalarParams& pp);
/// p < p_bound_4_8(a, b, h), a + bh > 0.
bool region_4_8(const ScalarParams& pp);
/// (a+bh)(1 - ah - bh^2/2) for a >= 0, (a+bh)(1 - ah - bh^2/2 - a^2/b) for a < 0.
/// NaN when a + bh <= 0.
double p_bound_4_8(double a, double b, double h);

/// |b|/2 (h + (e^{mu h} - 1)/mu) + p e^{-2 nu tau}; mu = 0 uses the limit.
double c1_lhs(const ScalarParams& pp);
/// bh (1 - b (cosh(mu h) - 1)/mu^2) e^{2 nu tau}; mu = 0 uses the limit.
double c2_rhs(const ScalarParams& pp);
/// c1_lhs < a.
bool region_C1(const ScalarParams& pp);
/// p < c2_rhs with a = 0, b > 0, mu <= 2 nu.
bool region_C2(const ScalarParams& pp);

/// (e^{x} - 1)/x with its limit 1 at x = 0, free of cancellation.
double expm1_ratio(double x);
/// (cosh(x) - 1)/x^2 = 2 sinh^2(x/2)/x^2 with its limit 1/2 at x = 0.
double coshm1_ratio(double x);

}  // namespace delaystab
