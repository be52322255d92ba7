#include "delaystab/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "delaystab/parallel.hpp"

namespace delaystab {

DecompositionTerms::DecompositionTerms(const EquationSpec& spec, Decomposition dec, QuadConfig quad)
    : spec_(&spec), dec_(dec), quad_(quad), n_(spec.n()) {
  spec.validate();
  dec.validate(n_);
  quad.validate();
  m1_ = static_cast<std::size_t>(dec.m1());
  m2_ = static_cast<std::size_t>(dec.m2());
  if (spec.autonomous()) {
    cached_s_ = stabilizing_sum_uncached(0.0);
    cached_r_ = kernel_mass_uncached(0.0);
    cached_b_mass_ = b_mass_uncached(0.0);
    cached_ = true;
  }
}

void DecompositionTerms::check_channel(std::size_t k) const {
  if (k < 1 || k > n_) {
    throw std::out_of_range("channel " + std::to_string(k) + " outside [1," + std::to_string(n_) + "]");
  }
}

double DecompositionTerms::stabilizing_sum_uncached(double t) const {
  const auto& s = *spec_;
  double out = 0.0;
  for (std::size_t k = 0; k <= static_cast<std::size_t>(dec_.n1); ++k) out += s.a[k](t + s.delay(k));
  for (std::size_t k = 1; k <= static_cast<std::size_t>(dec_.n2); ++k) out += s.b[k - 1](t) * s.delay(k);
  return out;
}

double DecompositionTerms::stabilizing_sum(double t) const {
  return cached_ ? cached_s_ : stabilizing_sum_uncached(t);
}

double DecompositionTerms::kernel(std::size_t k, double t, double s) const {
  if (k < 1 || k > m2_) {
    throw std::out_of_range("kernel index " + std::to_string(k) + " outside [1," + std::to_string(m2_) + "]");
  }
  const auto& sp = *spec_;
  const double hk = sp.delay(k);
  if (k <= m1_) return sp.a[k](s + hk) + (s - t + hk) * sp.b[k - 1](s);
  if (dec_.n1 > dec_.n2) return sp.a[k](s + hk);
  return (s - t + hk) * sp.b[k - 1](s);
}

double DecompositionTerms::kernel_mass_uncached(double t) const {
  double out = 0.0;
  for (std::size_t k = 1; k <= m2_; ++k) {
    const double hk = spec_->delay(k);
    out += integrate_abs([&](double s) { return kernel(k, t, s); }, t - hk, t, quad_);
  }
  return out;
}

double DecompositionTerms::kernel_mass(double t) const {
  return cached_ ? cached_r_ : kernel_mass_uncached(t);
}

double DecompositionTerms::b_mass_uncached(double t) const {
  double out = 0.0;
  for (std::size_t i = static_cast<std::size_t>(dec_.n2) + 1; i <= n_; ++i) {
    const auto& bi = spec_->b[i - 1];
    out += integrate_abs([&](double u) { return bi(u); }, t - spec_->delay(i), t, quad_);
  }
  return out;
}

double DecompositionTerms::b_mass(double t) const {
  return cached_ ? cached_b_mass_ : b_mass_uncached(t);
}

double DecompositionTerms::shifted_kernel(std::size_t k, double lambda, double t, double s) const {
  check_channel(k);
  double out = 0.0;
  if (k <= m2_) out += (stabilizing_sum(t) - lambda) * kernel(k, t, s);
  if (k > static_cast<std::size_t>(dec_.n2)) out -= spec_->b[k - 1](s);
  return out;
}

double DecompositionTerms::residual_weight(double lambda, double t) const {
  double out = lambda * kernel_mass(t);
  for (std::size_t i = static_cast<std::size_t>(dec_.n1) + 1; i <= n_; ++i) out += std::fabs(spec_->a[i](t));
  return out + b_mass(t);
}

double DecompositionTerms::history_weight(std::size_t k, double lambda, double t, double s) const {
  check_channel(k);
  double out = std::fabs(shifted_kernel(k, lambda, t, s));
  if (k <= m2_) out += residual_weight(lambda, t) * std::fabs(kernel(k, t, s));
  if (k > static_cast<std::size_t>(dec_.n2)) out += kernel_mass(t) * std::fabs(spec_->b[k - 1](s));
  return out;
}

double DecompositionTerms::history_weight_integral(std::size_t k, double lambda, double t) const {
  check_channel(k);
  const double hk = spec_->delay(k);
  const double lo = t;
  const double hi = t + hk;
  double out = integrate_abs([&](double theta) { return shifted_kernel(k, lambda, theta, t); }, lo, hi, quad_);
  if (k <= m2_) {
    // P >= 0, so P |R_k| = |P R_k|.
    out += integrate_abs(
        [&](double theta) { return residual_weight(lambda, theta) * kernel(k, theta, t); }, lo, hi, quad_);
  }
  if (k > static_cast<std::size_t>(dec_.n2)) {
    const double bk = std::fabs(spec_->b[k - 1](t));
    if (bk != 0.0) out += bk * integrate([&](double theta) { return kernel_mass(theta); }, lo, hi, quad_);
  }
  return out;
}

double DecompositionTerms::rate_bound(double lambda, double t) const {
  const auto& sp = *spec_;
  const double s_t = stabilizing_sum(t);
  double out = lambda - 2.0 * s_t;
  for (std::size_t k = 1; k <= n_; ++k) {
    const double hk = sp.delay(k);
    const bool in_kernel = k <= m2_;
    const bool in_tail = k > static_cast<std::size_t>(dec_.n2);
    const auto& bk = sp.b[k - 1];
    out += integrate_abs(
        [&](double s) {
          double v = 0.0;
          if (in_kernel) v += (s_t - lambda) * kernel(k, t, s);
          if (in_tail) v -= bk(s);
          return v;
        },
        t - hk, t, quad_);
    out += std::exp(lambda * hk) * history_weight_integral(k, lambda, t);
  }
  for (std::size_t k = static_cast<std::size_t>(dec_.n1) + 1; k <= n_; ++k) {
    const double hk = sp.delay(k);
    out += std::fabs(sp.a[k](t)) + std::exp(lambda * hk) * (1.0 + kernel_mass(t + hk)) * std::fabs(sp.a[k](t + hk));
  }
  const double sig = sp.sigma(t + sp.tau);
  out += std::exp(lambda * sp.tau) * sig * sig;
  return out;
}

double DecompositionTerms::ratio(double t) const {
  const double s_t = stabilizing_sum(t);
  if (!(s_t > 0.0)) throw EvalError("S(t) is not positive");
  return (rate_bound(0.0, t) + 2.0 * s_t) / s_t;
}

double DecompositionTerms::nonlinear_factor(double lambda, double t) const {
  double out = 1.0 + 2.0 * std::exp(lambda * spec_->max_delay());
  for (std::size_t k = 1; k <= m2_; ++k) {
    const double hk = spec_->delay(k);
    out += std::exp(lambda * hk) *
           integrate_abs([&](double theta) { return kernel(k, theta, t); }, t, t + hk, quad_);
  }
  return out;
}

AnalysisConfig default_analysis(const EquationSpec& spec) {
  AnalysisConfig cfg;
  cfg.scan = default_scan(spec);
  cfg.quad = default_quad(spec);
  return cfg;
}

namespace {

double lambda_ceiling(const EquationSpec& spec) {
  const double h = spec.max_delay();
  return h > 0.0 ? 1.0 / h : 1.0;
}

struct Search {
  ExponentialCertificate cert;
  int step = -1;  // grid index of cert.lambda
};

Condition24 condition_2_4(const DecompositionTerms& terms, const AnalysisConfig& cfg) {
  const auto& spec = terms.spec();
  Condition24 out;
  out.inf_s = scan_inf(spec, [&](double t) { return terms.stabilizing_sum(t); }, cfg.scan, cfg.threads).value;
  out.sup_r = scan_sup(spec, [&](double t) { return terms.kernel_mass(t); }, cfg.scan, cfg.threads).value;
  out.holds = out.inf_s > 0.0 && out.sup_r < 1.0;
  return out;
}

RatioCondition ratio_condition(const DecompositionTerms& terms, const Condition24& c24,
                               const AnalysisConfig& cfg) {
  RatioCondition out;
  if (!(c24.inf_s > 0.0)) return out;
  try {
    out.sup_value = scan_sup(terms.spec(), [&](double t) { return terms.ratio(t); }, cfg.scan, cfg.threads).value;
  } catch (const EvalError&) {
    // S vanished between grid points.
    return out;
  }
  out.holds = *out.sup_value < 2.0;
  return out;
}

Search exponential(const DecompositionTerms& terms, const Condition24& c24, const AnalysisConfig& cfg) {
  Search out;
  const auto& spec = terms.spec();
  out.cert.sup_rate_at_zero =
      scan_sup(spec, [&](double t) { return terms.rate_bound(0.0, t); }, cfg.scan, cfg.threads).value;
  if (!c24.holds || !(out.cert.sup_rate_at_zero < 0.0)) return out;
  const double top = lambda_ceiling(spec);
  for (int j = 0; j < cfg.lambda_steps; ++j) {
    const double lambda = std::ldexp(top, -j);
    const ScanResult r =
        scan_sup(spec, [&](double t) { return terms.rate_bound(lambda, t); }, cfg.scan, cfg.threads, 0.0);
    if (r.value <= 0.0) {
      out.cert.lambda = lambda;
      out.cert.sup_rate = r.value;
      out.step = j;
      return out;
    }
  }
  return out;
}

ProbabilityCertificate probability(const DecompositionTerms& terms, const Search& search,
                                   const AnalysisConfig& cfg) {
  ProbabilityCertificate out;
  if (!search.cert.lambda) return out;
  const auto& spec = terms.spec();
  const double g = spec.nonlin.weight();
  if (g == 0.0) {
    out.lambda = search.cert.lambda;
    out.epsilon = 1.0;
    return out;
  }
  double lambda = *search.cert.lambda;
  double margin = -*search.cert.sup_rate;
  const double top = lambda_ceiling(spec);
  for (int j = search.step + 1; margin <= 0.0 && j < cfg.lambda_steps; ++j) {
    lambda = std::ldexp(top, -j);
    margin = -scan_sup(spec, [&](double t) { return terms.rate_bound(lambda, t); }, cfg.scan, cfg.threads).value;
  }
  if (!(margin > 0.0)) return out;
  const double factor =
      scan_sup(spec, [&](double t) { return terms.nonlinear_factor(lambda, t); }, cfg.scan, cfg.threads).value;
  const double alpha = spec.nonlin.alpha();
  const double eps = std::min(1.0, std::pow(margin / (g * factor), 1.0 / (alpha - 1.0)));
  if (!(eps > 0.0)) return out;
  out.lambda = lambda;
  out.epsilon = eps;
  out.factor = factor;
  return out;
}

ScanMeta scan_meta(const EquationSpec& spec, const AnalysisConfig& cfg) {
  return {cfg.scan.t_max, cfg.scan.n_grid, cfg.scan.refine_factor, cfg.quad.panels, spec.autonomous()};
}

}  // namespace

Condition24 check_condition_2_4(const EquationSpec& spec, Decomposition dec, const AnalysisConfig& cfg) {
  const DecompositionTerms terms(spec, dec, cfg.quad);
  return condition_2_4(terms, cfg);
}

RatioCondition check_ratio_condition(const EquationSpec& spec, Decomposition dec, const AnalysisConfig& cfg) {
  const DecompositionTerms terms(spec, dec, cfg.quad);
  return ratio_condition(terms, condition_2_4(terms, cfg), cfg);
}

ExponentialCertificate verify_exponential_ms(const EquationSpec& spec, Decomposition dec,
                                             const AnalysisConfig& cfg) {
  const DecompositionTerms terms(spec, dec, cfg.quad);
  return exponential(terms, condition_2_4(terms, cfg), cfg).cert;
}

ProbabilityCertificate verify_stability_in_probability(const EquationSpec& spec, Decomposition dec,
                                                       const AnalysisConfig& cfg) {
  const DecompositionTerms terms(spec, dec, cfg.quad);
  return probability(terms, exponential(terms, condition_2_4(terms, cfg), cfg), cfg);
}

StabilityVerdict evaluate_decomposition(const EquationSpec& spec, Decomposition dec, const AnalysisConfig& cfg) {
  StabilityVerdict out;
  out.dec = dec;
  out.scan = scan_meta(spec, cfg);
  try {
    const DecompositionTerms terms(spec, dec, cfg.quad);
    out.condition_2_4 = condition_2_4(terms, cfg);
    out.ratio_condition = ratio_condition(terms, out.condition_2_4, cfg);
    const Search search = exponential(terms, out.condition_2_4, cfg);
    out.exponential = search.cert;
    out.probability = probability(terms, search, cfg);
  } catch (const std::exception& e) {
    out.error = e.what();
    out.probability = {};
  }
  return out;
}

MultiConditionReport multi_condition(const EquationSpec& spec, const AnalysisConfig& cfg) {
  spec.validate();
  const std::size_t side = spec.n() + 1;
  MultiConditionReport report;
  report.verdicts.resize(side * side);
  auto cell = [&](std::size_t idx, const AnalysisConfig& c) {
    const Decomposition dec{static_cast<int>(idx / side), static_cast<int>(idx % side)};
    report.verdicts[idx] = evaluate_decomposition(spec, dec, c);
  };
  if (spec.autonomous()) {
    AnalysisConfig inner = cfg;
    inner.threads = 1;
    parallel_for(side * side, cfg.threads, [&](std::size_t idx) { cell(idx, inner); });
  } else {
    for (std::size_t idx = 0; idx < side * side; ++idx) cell(idx, cfg);
  }
  for (const auto& v : report.verdicts) {
    if (v.certified()) report.certifying.push_back(v.dec);
  }
  return report;
}

}  // namespace delaystab
