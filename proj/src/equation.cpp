#include "delaystab/equation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace delaystab {

double NonlinearitySpec::alpha() const {
  double out = std::numeric_limits<double>::infinity();
  for (const auto& term : terms) out = std::min(out, term.alpha);
  return out;
}

double NonlinearitySpec::weight() const {
  double out = 0.0;
  for (const auto& term : terms) out += std::fabs(term.c);
  return out;
}

double EquationSpec::max_delay() const {
  double out = tau;
  for (double hk : h) out = std::max(out, hk);
  return out;
}

bool EquationSpec::autonomous() const {
  auto constant = [](const CoeffExpr& e) { return !e.depends_on_t(); };
  return std::all_of(a.begin(), a.end(), constant) && std::all_of(b.begin(), b.end(), constant) &&
         constant(sigma);
}

bool EquationSpec::contains_abs() const {
  auto has_abs = [](const CoeffExpr& e) { return e.contains_abs(); };
  return std::any_of(a.begin(), a.end(), has_abs) || std::any_of(b.begin(), b.end(), has_abs) ||
         has_abs(sigma);
}

void EquationSpec::validate() const {
  const std::size_t n = h.size();
  if (a.size() != n + 1) {
    throw std::invalid_argument("expected " + std::to_string(n + 1) + " a-coefficients, got " +
                                std::to_string(a.size()));
  }
  if (b.size() != n) {
    throw std::invalid_argument("expected " + std::to_string(n) + " b-coefficients, got " +
                                std::to_string(b.size()));
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (!(h[k] > 0.0) || !std::isfinite(h[k])) {
      throw std::invalid_argument("delay h_" + std::to_string(k + 1) + " must be positive");
    }
  }
  if (!(tau >= 0.0) || !std::isfinite(tau)) throw std::invalid_argument("tau must be >= 0");
  const double hmax = max_delay();
  for (const auto& term : nonlin.terms) {
    if (!(term.alpha > 1.0)) throw std::invalid_argument("nonlinearity exponent must exceed 1");
    if (!(term.delay >= 0.0) || term.delay > hmax + 1e-12) {
      throw std::invalid_argument("nonlinearity delay must lie in [0, max delay]");
    }
    if (!std::isfinite(term.c)) throw std::invalid_argument("nonlinearity coefficient must be finite");
  }
}

void Decomposition::validate(std::size_t n) const {
  const auto limit = static_cast<int>(n);
  if (n1 < 0 || n1 > limit || n2 < 0 || n2 > limit) {
    throw std::out_of_range("decomposition (" + std::to_string(n1) + "," + std::to_string(n2) +
                            ") outside [0," + std::to_string(n) + "]^2");
  }
}

ScanConfig default_scan(const EquationSpec& spec) {
  ScanConfig cfg;
  cfg.t_max = 50.0 * std::max(spec.max_delay(), 1.0);
  return cfg;
}

QuadConfig default_quad(const EquationSpec& spec) {
  QuadConfig q;
  q.panels = spec.contains_abs() ? 256 : 64;
  return q;
}

ScanResult scan_sup(const EquationSpec& spec, const RealFn& f, const ScanConfig& cfg,
                    unsigned threads, std::optional<double> stop_above) {
  if (spec.autonomous()) {
    cfg.validate();
    return {0.0, f(0.0)};
  }
  return sup_scan(f, cfg, threads, stop_above);
}

ScanResult scan_inf(const EquationSpec& spec, const RealFn& f, const ScanConfig& cfg,
                    unsigned threads) {
  if (spec.autonomous()) {
    cfg.validate();
    return {0.0, f(0.0)};
  }
  return inf_scan(f, cfg, threads);
}

EquationSpec constant_delay_equation(double a, double b, double h, double p, double tau, double c) {
  if (p < 0.0) throw std::invalid_argument("p must be >= 0");
  EquationSpec spec;
  spec.h = {h};
  spec.a = {CoeffExpr::constant(0.0), CoeffExpr::constant(a)};
  spec.b = {CoeffExpr::constant(b)};
  spec.sigma = CoeffExpr::constant(std::sqrt(2.0 * p));
  spec.tau = tau;
  if (c != 0.0) spec.nonlin.terms.push_back({c, h, 2.0});
  spec.validate();
  return spec;
}

}  // namespace delaystab
