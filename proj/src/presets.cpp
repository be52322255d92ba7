#include "delaystab/presets.hpp"

#include <cmath>
#include <stdexcept>

#include "delaystab/expr.hpp"

namespace delaystab {

ScalarParams Preset::scalar() const { return {a, b, c, h, p, tau, mu, nu}; }

EquationSpec Preset::equation() const {
  if (form == Form::DelayedFeedback) return constant_delay_equation(a, b, h, p, tau, c);
  EquationSpec spec;
  spec.h = {h};
  spec.a = {CoeffExpr::constant(a), CoeffExpr::constant(0.0)};
  spec.b = {CoeffExpr::parse(format_number(b) + "*exp(" + format_number(-mu) + "*t)")};
  spec.sigma = CoeffExpr::parse(format_number(std::sqrt(2.0 * p)) + "*exp(" + format_number(-nu) + "*t)");
  spec.tau = tau;
  if (c != 0.0) spec.nonlin.terms.push_back({c, h, 2.0});
  spec.validate();
  return spec;
}

SimParams Preset::simulation() const {
  SimParams sim;
  sim.init = CoeffExpr::parse(init);
  return sim;
}

const std::vector<Preset>& presets() {
  static const std::vector<Preset> table = {
      {"fig4", Preset::Form::DelayedFeedback, -2.0, 9.0, 1.0, 0.5, 0.55, 0.0, 0.0, 0.0, "0.6*cos(t)"},
      {"fig5", Preset::Form::ExponentialKernel, 3.0, 4.0, 3.0, 0.5, 0.5, 0.0, 0.1, 0.01, "-0.09*cos(t)"},
      {"fig6", Preset::Form::ExponentialKernel, 0.0, 8.5, 1.0, 0.3, 0.2, 0.0, 0.008, 0.15, "0.55"},
  };
  return table;
}

const Preset& find_preset(std::string_view name) {
  for (const auto& p : presets()) {
    if (p.name == name) return p;
  }
  throw std::invalid_argument("unknown preset '" + std::string(name) + "' (expected fig4, fig5 or fig6)");
}

}  // namespace delaystab
