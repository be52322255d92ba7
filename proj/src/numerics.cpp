#include "delaystab/numerics.hpp"

#include <boost/math/tools/toms748_solve.hpp>

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "delaystab/parallel.hpp"

namespace delaystab {
namespace {

double simpson_pair(double f0, double f1, double f2, double width) {
  return width / 6.0 * (f0 + 4.0 * f1 + f2);
}

// Root of f in (a, b) given a strict sign change between fa and fb.
double bracketed_root(const RealFn& f, double a, double b, double fa, double fb) {
  std::uintmax_t max_iter = 100;
  auto tol = boost::math::tools::eps_tolerance<double>(50);
  const auto [lo, hi] = boost::math::tools::toms748_solve(f, a, b, fa, fb, tol, max_iter);
  return 0.5 * (lo + hi);
}

// |f| over one Simpson pair [x0, x2] whose node values do not share a strict sign.
double abs_pair_split(const RealFn& f, double x0, double x2, double f0, double f1, double f2) {
  const double x1 = 0.5 * (x0 + x2);
  std::vector<double> cuts{x0};
  const std::array<double, 3> xs{x0, x1, x2};
  const std::array<double, 3> fs{f0, f1, f2};
  for (int i = 0; i < 2; ++i) {
    if (fs[i] * fs[i + 1] < 0.0) cuts.push_back(bracketed_root(f, xs[i], xs[i + 1], fs[i], fs[i + 1]));
    if (i == 0 && f1 == 0.0) cuts.push_back(x1);
  }
  cuts.push_back(x2);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i];
    const double b = cuts[i + 1];
    if (b <= a) continue;
    const double m = 0.5 * (a + b);
    total += simpson_pair(std::fabs(f(a)), std::fabs(f(m)), std::fabs(f(b)), b - a);
  }
  return total;
}

}  // namespace

void QuadConfig::validate() const {
  if (panels < 2 || panels % 2 != 0) throw std::invalid_argument("quadrature panels must be even and >= 2");
}

void ScanConfig::validate() const {
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw std::invalid_argument("scan t_max must be positive");
  if (n_grid < 2) throw std::invalid_argument("scan n_grid must be >= 2");
  if (refine_factor < 1) throw std::invalid_argument("scan refine_factor must be >= 1");
}

double integrate(const RealFn& f, double lo, double hi, const QuadConfig& q) {
  if (hi < lo) throw std::invalid_argument("integrate: hi < lo");
  if (hi == lo) return 0.0;
  const int n = q.panels;
  const double w = (hi - lo) / n;
  double odd = 0.0;
  double even = 0.0;
  for (int i = 1; i < n; ++i) {
    const double v = f(lo + i * w);
    if (i % 2 == 1) {
      odd += v;
    } else {
      even += v;
    }
  }
  return w / 3.0 * (f(lo) + f(hi) + 4.0 * odd + 2.0 * even);
}

double integrate_abs(const RealFn& f, double lo, double hi, const QuadConfig& q) {
  if (hi < lo) throw std::invalid_argument("integrate_abs: hi < lo");
  if (hi == lo) return 0.0;
  const int n = q.panels;
  const double w = (hi - lo) / n;
  std::vector<double> nodes(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) nodes[static_cast<std::size_t>(i)] = f(i == n ? hi : lo + i * w);
  double total = 0.0;
  for (int j = 0; j < n; j += 2) {
    const double f0 = nodes[static_cast<std::size_t>(j)];
    const double f1 = nodes[static_cast<std::size_t>(j) + 1];
    const double f2 = nodes[static_cast<std::size_t>(j) + 2];
    const bool same_sign = (f0 > 0 && f1 > 0 && f2 > 0) || (f0 < 0 && f1 < 0 && f2 < 0);
    const bool all_zero = f0 == 0.0 && f1 == 0.0 && f2 == 0.0;
    if (same_sign || all_zero) {
      total += simpson_pair(std::fabs(f0), std::fabs(f1), std::fabs(f2), 2.0 * w);
    } else {
      const double x0 = lo + j * w;
      const double x2 = j + 2 == n ? hi : lo + (j + 2) * w;
      total += abs_pair_split(f, x0, x2, f0, f1, f2);
    }
  }
  return total;
}

ScanResult sup_scan(const RealFn& f, const ScanConfig& cfg, unsigned threads,
                    std::optional<double> stop_above) {
  cfg.validate();
  const auto n = static_cast<std::size_t>(cfg.n_grid);
  const double dt = cfg.step();
  auto grid_t = [&](std::size_t i) { return i + 1 == n ? cfg.t_max : static_cast<double>(i) * dt; };

  std::vector<double> values(n);
  if (threads > 1) {
    parallel_for(n, threads, [&](std::size_t i) { values[i] = f(grid_t(i)); });
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      values[i] = f(grid_t(i));
      if (stop_above && values[i] > *stop_above) return {grid_t(i), values[i]};
    }
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (values[i] > values[best]) best = i;
  }
  ScanResult out{grid_t(best), values[best]};
  if (stop_above && out.value > *stop_above) return out;

  const int r = cfg.refine_factor;
  auto refine_cell = [&](std::size_t left) {
    const double a = grid_t(left);
    const double b = grid_t(left + 1);
    for (int j = 1; j < r; ++j) {
      const double t = a + (b - a) * j / r;
      const double v = f(t);
      if (v > out.value) out = {t, v};
    }
  };
  if (best > 0) refine_cell(best - 1);
  if (best + 1 < n) refine_cell(best);
  return out;
}

ScanResult inf_scan(const RealFn& f, const ScanConfig& cfg, unsigned threads) {
  const ScanResult neg = sup_scan([&](double t) { return -f(t); }, cfg, threads);
  return {neg.t, -neg.value};
}

}  // namespace delaystab
