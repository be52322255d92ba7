#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "delaystab/equation.hpp"
#include "delaystab/numerics.hpp"

namespace delaystab {

/// Quantities of the Lyapunov-derived test for one decomposition (n1, n2).
///
/// With m1 = min(n1, n2), m2 = max(n1, n2) and [i..j] the integer-interval
/// indicator:
///
///     S(t)         = sum_{k=0}^{n1} a_k(t+h_k) + sum_{k=1}^{n2} b_k(t) h_k
///     R_k(t,s)     = a_k(s+h_k) + (s-t+h_k) b_k(s)              k <= m1
///                    a_k(s+h_k)                  (n1 > n2)      m1 < k <= m2
///                    (s-t+h_k) b_k(s)            (n1 < n2)      m1 < k <= m2
///     R(t)         = sum_{k=1}^{m2} int_{t-h_k}^{t} |R_k(t,s)| ds
///     R^l_k(t,s)   = (S(t)-l) R_k(t,s) [1..m2] - b_k(s) [n2+1..n]
///     P_l(t)       = l R(t) + sum_{i>n1} |a_i(t)| + sum_{i>n2} int_{t-h_i}^{t} |b_i|
///     Q^l_k(t,s)   = |R^l_k(t,s)| + P_l(t) |R_k(t,s)| [1..m2] + R(t) |b_k(s)| [n2+1..n]
///     F(t,l)       = l - 2 S(t)
///                    + sum_{k=1}^{n} ( int_{t-h_k}^{t} |R^l_k(t,s)| ds
///                                      + e^{l h_k} int_{t}^{t+h_k} Q^l_k(theta,t) dtheta )
///                    + sum_{k>n1} ( |a_k(t)| + e^{l h_k} (1 + R(t+h_k)) |a_k(t+h_k)| )
///                    + e^{l tau} sigma^2(t+tau)
///
/// Inside F the first argument of Q is the integration variable, so P, R and
/// S are evaluated at theta. sup_t F(t, l) <= 0 for some l > 0 together with
/// inf S > 0 and sup R < 1 certifies exponential mean-square stability of the
/// linear part.
///
/// For autonomous equations S, R and the b-masses are computed once at
/// construction and reused for every t.
class DecompositionTerms {
 public:
  DecompositionTerms(const EquationSpec& spec, Decomposition dec, QuadConfig quad);

  const EquationSpec& spec() const noexcept { return *spec_; }
  Decomposition decomposition() const noexcept { return dec_; }

  /// S(t).
  double stabilizing_sum(double t) const;
  /// R_k(t,s), k in [1, m2]; std::out_of_range otherwise.
  double kernel(std::size_t k, double t, double s) const;
  /// R(t).
  double kernel_mass(double t) const;
  /// R^l_k(t,s), k in [1, n].
  double shifted_kernel(std::size_t k, double lambda, double t, double s) const;
  /// P_l(t).
  double residual_weight(double lambda, double t) const;
  /// Q^l_k(t,s), k in [1, n].
  double history_weight(std::size_t k, double lambda, double t, double s) const;
  /// int_t^{t+h_k} Q^l_k(theta, t) dtheta, integrated term by term.
  double history_weight_integral(std::size_t k, double lambda, double t) const;
  /// F(t, l).
  double rate_bound(double lambda, double t) const;
  /// (F(t,0) + 2 S(t)) / S(t): the bracketed ratio whose sup must stay below 2.
  double ratio(double t) const;
  /// 1 + 2 e^{l h} + sum_{k=1}^{m2} e^{l h_k} int_t^{t+h_k} |R_k(theta,t)| dtheta,
  /// the multiplier of eps^{alpha-1} G in the nonlinear condition.
  double nonlinear_factor(double lambda, double t) const;

 private:
  double stabilizing_sum_uncached(double t) const;
  double kernel_mass_uncached(double t) const;
  double b_mass(double t) const;
  double b_mass_uncached(double t) const;
  void check_channel(std::size_t k) const;

  const EquationSpec* spec_;
  Decomposition dec_;
  QuadConfig quad_;
  std::size_t n_;
  std::size_t m1_;
  std::size_t m2_;
  bool cached_ = false;
  double cached_s_ = 0.0;
  double cached_r_ = 0.0;
  double cached_b_mass_ = 0.0;
};

struct AnalysisConfig {
  ScanConfig scan;
  QuadConfig quad;
  unsigned threads = 1;
  int lambda_steps = 40;
};

/// Defaults from default_scan / default_quad.
AnalysisConfig default_analysis(const EquationSpec& spec);

struct Condition24 {
  double inf_s = 0.0;
  double sup_r = 0.0;
  bool holds = false;
};

struct RatioCondition {
  std::optional<double> sup_value;  // absent when S is not positive on the horizon
  bool holds = false;               // sup_value < 2
};

struct ExponentialCertificate {
  double sup_rate_at_zero = 0.0;   // sup_t F(t, 0)
  std::optional<double> lambda;    // largest grid l with sup_t F(t, l) <= 0
  std::optional<double> sup_rate;  // sup_t F(t, lambda)
};

struct ProbabilityCertificate {
  std::optional<double> lambda;
  std::optional<double> epsilon;
  std::optional<double> factor;  // sup_t nonlinear_factor at lambda
};

struct ScanMeta {
  double t_max = 0.0;
  int n_grid = 0;
  int refine_factor = 0;
  int panels = 0;
  bool autonomous = false;
};

struct StabilityVerdict {
  Decomposition dec;
  Condition24 condition_2_4;
  RatioCondition ratio_condition;
  ExponentialCertificate exponential;
  ProbabilityCertificate probability;
  ScanMeta scan;
  std::optional<std::string> error;

  bool certified() const noexcept { return probability.epsilon.has_value(); }
};

/// inf_t S(t) > 0 and sup_t R(t) < 1.
Condition24 check_condition_2_4(const EquationSpec& spec, Decomposition dec,
                                const AnalysisConfig& cfg);

/// sup_t (F(t,0) + 2 S(t)) / S(t) < 2; evaluated only when inf S > 0.
RatioCondition check_ratio_condition(const EquationSpec& spec, Decomposition dec,
                                     const AnalysisConfig& cfg);

/// Linear part (g = 0). Requires sup_t (F(t,0) + 2S)/S < 2 and sup_t F(t,0) < 0, then
/// searches l_max 2^{-j}, j = 0..lambda_steps-1, l_max = 1/h (1 when h = 0),
/// for the largest l with sup_t F(t,l) <= 0.
ExponentialCertificate verify_exponential_ms(const EquationSpec& spec, Decomposition dec,
                                             const AnalysisConfig& cfg);

/// Nonlinear equation. With margin m = -sup_t F(t,l) > 0 and
/// K = sup_t nonlinear_factor(l, t), returns eps = min(1, (m/(G K))^{1/(alpha-1)});
/// eps = 1 when G = 0. If the exponential certificate sits exactly at
/// sup F = 0, the next smaller grid l with strictly negative sup is used.
ProbabilityCertificate verify_stability_in_probability(const EquationSpec& spec, Decomposition dec,
                                                       const AnalysisConfig& cfg);

/// Every check for one decomposition; evaluation errors are captured in `error`.
StabilityVerdict evaluate_decomposition(const EquationSpec& spec, Decomposition dec,
                                        const AnalysisConfig& cfg);

struct MultiConditionReport {
  std::vector<StabilityVerdict> verdicts;  // (n1, n2) in row-major order
  std::vector<Decomposition> certifying;

  bool any_certified() const noexcept { return !certifying.empty(); }
};

/// Evaluates all (n+1)^2 decompositions.
MultiConditionReport multi_condition(const EquationSpec& spec, const AnalysisConfig& cfg);

}  // namespace delaystab
