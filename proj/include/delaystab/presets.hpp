#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "delaystab/closed_forms.hpp"
#include "delaystab/equation.hpp"
#include "delaystab/simulator.hpp"

namespace delaystab {

/// Caption parameters of one published trajectory figure.
struct Preset {
  enum class Form {
    DelayedFeedback,    // a x(t-h) + b int x + c x^2(t-h), constant coefficients
    ExponentialKernel,  // a x(t) + b int e^{-mu s} x(s) ds + c x^2(t-h), sigma e^{-nu t}
  };

  std::string name;
  Form form = Form::DelayedFeedback;
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double h = 0.0;
  double p = 0.0;
  double tau = 0.0;
  double mu = 0.0;
  double nu = 0.0;
  std::string init;  // initial function on [-h, 0]

  ScalarParams scalar() const;
  EquationSpec equation() const;
  /// dt = 1e-3, t_end = 30, 50 paths, seed 1, init from the caption.
  SimParams simulation() const;
};

/// fig4, fig5, fig6.
const std::vector<Preset>& presets();

/// Throws std::invalid_argument for an unknown name.
const Preset& find_preset(std::string_view name);

}  // namespace delaystab
