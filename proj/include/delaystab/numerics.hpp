#pragma once

#include <functional>
#include <optional>

namespace delaystab {

using RealFn = std::function<double(double)>;

/// Composite Simpson rule settings. `panels` counts subintervals per
/// integration window and must be even.
struct QuadConfig {
  int panels = 64;

  void validate() const;
};

/// Grid scan of [0, t_max] used for every sup/inf over t >= 0.
struct ScanConfig {
  double t_max = 50.0;
  int n_grid = 2001;
  int refine_factor = 32;

  void validate() const;
  double step() const { return t_max / (n_grid - 1); }
};

struct ScanResult {
  double t = 0.0;
  double value = 0.0;
};

/// Composite Simpson approximation of the integral of f over [lo, hi].
double integrate(const RealFn& f, double lo, double hi, const QuadConfig& q);

/// Integral of |f| over [lo, hi]. Simpson pairs in which f changes sign are
/// split at the located roots so each piece integrates a smooth function;
/// piecewise-linear integrands come out exact.
double integrate_abs(const RealFn& f, double lo, double hi, const QuadConfig& q);

/// Maximum of f over the grid on [0, t_max], followed by one refinement pass
/// of refine_factor subsamples in each cell adjacent to the grid maximizer.
///
/// With `stop_above` set, the scan returns the first grid value exceeding
/// it without refining; callers that only need a pass/fail answer use this
/// to skip the remaining grid. `threads > 1` evaluates the grid in parallel
/// (and disables early exit); the result does not depend on the thread count.
ScanResult sup_scan(const RealFn& f, const ScanConfig& cfg, unsigned threads = 1,
                    std::optional<double> stop_above = std::nullopt);

/// Minimum of f, computed as the sup_scan of -f.
ScanResult inf_scan(const RealFn& f, const ScanConfig& cfg, unsigned threads = 1);

}  // namespace delaystab
