#pragma once

#include <cstddef>
#include <vector>

#include "delaystab/expr.hpp"
#include "delaystab/numerics.hpp"

namespace delaystab {

/// One monomial c * x(t - delay)^alpha of the nonlinearity g(t, x_t).
struct NonlinearTerm {
  double c = 0.0;
  double delay = 0.0;
  double alpha = 2.0;
};

/// g(t, x_t) = sum_i c_i x(t - d_i)^{alpha_i}. For |x| <= 1 it is bounded by
/// G |x|^alpha with alpha = min alpha_i and G = sum |c_i|.
struct NonlinearitySpec {
  std::vector<NonlinearTerm> terms;

  bool empty() const noexcept { return terms.empty(); }
  /// Smallest exponent; +inf without terms.
  double alpha() const;
  /// Total weight sum |c_i|.
  double weight() const;
};

/// Scalar equation
///
///     dx(t) + ( sum_{k=0..n} a_k(t) x(t-h_k)
///             + sum_{k=1..n} int_{t-h_k}^{t} b_k(s) x(s) ds + g(t, x_t) ) dt
///             + sigma(t) x(t-tau) dw(t) = 0,     h_0 = 0.
struct EquationSpec {
  std::vector<double> h;     // h_1..h_n
  std::vector<CoeffExpr> a;  // a_0..a_n
  std::vector<CoeffExpr> b;  // b_1..b_n
  CoeffExpr sigma;
  double tau = 0.0;
  NonlinearitySpec nonlin;

  std::size_t n() const noexcept { return h.size(); }
  /// h_k with h_0 = 0.
  double delay(std::size_t k) const { return k == 0 ? 0.0 : h.at(k - 1); }
  /// max(h_1..h_n, tau).
  double max_delay() const;
  /// True when no coefficient depends on t.
  bool autonomous() const;
  bool contains_abs() const;

  /// Checks sizes, delay signs and nonlinearity bounds; throws std::invalid_argument.
  void validate() const;
};

/// Selects one member (n1, n2) of the condition family.
struct Decomposition {
  int n1 = 0;
  int n2 = 0;

  int m1() const noexcept { return n1 < n2 ? n1 : n2; }
  int m2() const noexcept { return n1 < n2 ? n2 : n1; }
  void validate(std::size_t n) const;

  friend bool operator==(const Decomposition&, const Decomposition&) = default;
};

/// Default scan horizon: t_max = 50 * max(h_1..h_n, tau, 1).
ScanConfig default_scan(const EquationSpec& spec);

/// Default quadrature: 64 panels, 256 when a coefficient contains abs().
QuadConfig default_quad(const EquationSpec& spec);

/// sup over t >= 0 of f. Autonomous equations make every scanned quantity
/// constant in t, so only t = 0 is evaluated.
ScanResult scan_sup(const EquationSpec& spec, const RealFn& f, const ScanConfig& cfg,
                    unsigned threads = 1, std::optional<double> stop_above = std::nullopt);
ScanResult scan_inf(const EquationSpec& spec, const RealFn& f, const ScanConfig& cfg,
                    unsigned threads = 1);

/// Equation (a0 = 0, a1 = a at delay h, b1 = b, sigma = sqrt(2p), tau) with
/// the quadratic term c x(t-h)^2 when c != 0.
EquationSpec constant_delay_equation(double a, double b, double h, double p, double tau = 0.0,
                                     double c = 0.0);

}  // namespace delaystab
