#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "delaystab/equation.hpp"
#include "delaystab/expr.hpp"

namespace delaystab {

struct SimParams {
  double dt = 1e-3;
  double t_end = 30.0;
  int n_paths = 50;
  std::uint64_t base_seed = 1;
  CoeffExpr init;  // phi(s) on [-h, 0], written in the variable t
  double conv_eps = 0.01;
  double conv_window = 0.1;

  void validate() const;
};

enum class PathClass { Convergent, NonConvergent, Diverged };

const char* to_string(PathClass c);

struct Trajectory {
  std::vector<double> times;
  std::vector<double> values;  // truncated after the first non-finite value
  std::uint64_t seed = 0;
  bool diverged = false;
};

struct TrajectoryBatch {
  std::vector<Trajectory> paths;
  std::vector<PathClass> classes;
  std::vector<double> max_tail_abs;
  std::size_t convergent = 0;
  std::size_t non_convergent = 0;
  std::size_t diverged = 0;

  double convergent_fraction() const;
};

/// Counter-based standard normal stream. Draw i of stream `seed` is
///
///     u1 = (mix(k ^ (2i+1) * G) >> 11 + 1) * 2^-53,
///     u2 = (mix(k ^ (2i+2) * G) >> 11) * 2^-53,     k = mix(seed),
///     z  = sqrt(-2 ln u1) cos(2 pi u2)
///
/// with mix the SplitMix64 finalizer and G = 0x9E3779B97F4A7C15, so a draw
/// depends only on (seed, i).
double standard_normal(std::uint64_t seed, std::uint64_t index);

/// Trapezoid rule over equally spaced samples: dt * (sum - (first + last)/2)
/// of weights[j] * values[j].
double trapezoid_product(std::span<const double> weights, std::span<const double> values, double dt);

/// Number of dt steps for `delay`; std::invalid_argument if snapping moves it
/// by more than 1e-6 relative.
std::size_t snap_delay(double delay, double dt);

/// Tabulated Euler-Maruyama setup for one (spec, params) pair. Delays are
/// snapped to the dt grid and every coefficient is tabulated once, so
/// run() only walks the history buffer.
///
/// Scheme, for step i at t_i = i dt:
///
///     x_{i+1} = x_i - [ sum_k a_k(t_i) x(t_i - h_k)
///                      + sum_k trapezoid(b_k(s) x(s), s in [t_i - h_k, t_i])
///                      + sum_j c_j x(t_i - d_j)^{alpha_j} ] dt
///                   - sigma(t_i) x(t_i - tau) dW_i,   dW_i = sqrt(dt) z(seed, i)
///
/// Integer alpha uses a plain power; fractional alpha uses sign(x)|x|^alpha.
class SimulationPlan {
 public:
  SimulationPlan(const EquationSpec& spec, const SimParams& params);

  Trajectory run(std::uint64_t seed) const;

  std::size_t steps() const noexcept { return steps_; }
  std::size_t history() const noexcept { return history_; }
  const SimParams& params() const noexcept { return params_; }

 private:
  struct NonlinearStep {
    double c;
    std::size_t lag;
    double alpha;
    bool integer;
  };

  SimParams params_;
  std::size_t steps_ = 0;
  std::size_t history_ = 0;
  std::vector<std::size_t> a_lag_;                 // a_0..a_n
  std::vector<std::vector<double>> a_table_;       // a_k(t_i), i < steps
  std::vector<std::size_t> b_lag_;                 // b_1..b_n
  std::vector<std::vector<double>> b_table_;       // b_k(s_j), s_j = (j - history) dt
  std::vector<double> sigma_table_;
  std::size_t tau_lag_ = 0;
  std::vector<NonlinearStep> nonlinear_;
  std::vector<double> initial_;                    // phi at s_j, j <= history
};

Trajectory simulate(const EquationSpec& spec, const SimParams& params, std::uint64_t seed);

PathClass classify(const Trajectory& traj, const SimParams& params);

/// Max |x| over t >= (1 - conv_window) t_end; +inf for diverged paths.
double max_tail_abs(const Trajectory& traj, const SimParams& params);

/// Path i uses seed base_seed + i. Paths run on up to `threads` workers; the
/// batch is identical for every thread count.
TrajectoryBatch simulate_batch(const EquationSpec& spec, const SimParams& params, unsigned threads = 1);

/// "t,x" header, one row per grid point.
void write_trajectory_csv(const Trajectory& traj, const std::filesystem::path& path);

/// path_000.csv, path_001.csv, ... plus summary.csv ("seed,class,max_tail_abs").
void write_batch(const TrajectoryBatch& batch, const std::filesystem::path& dir);

}  // namespace delaystab
