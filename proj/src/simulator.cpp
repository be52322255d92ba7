#include "delaystab/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "delaystab/parallel.hpp"

namespace delaystab {
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

void SimParams::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be positive");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw std::invalid_argument("t_end must be positive");
  if (n_paths < 1) throw std::invalid_argument("n_paths must be positive");
  if (!(conv_eps > 0.0)) throw std::invalid_argument("conv_eps must be positive");
  if (!(conv_window > 0.0 && conv_window <= 1.0)) throw std::invalid_argument("conv_window must lie in (0, 1]");
}

const char* to_string(PathClass c) {
  switch (c) {
    case PathClass::Convergent: return "convergent";
    case PathClass::NonConvergent: return "non_convergent";
    case PathClass::Diverged: return "diverged";
  }
  return "?";
}

double TrajectoryBatch::convergent_fraction() const {
  return paths.empty() ? 0.0 : static_cast<double>(convergent) / static_cast<double>(paths.size());
}

double standard_normal(std::uint64_t seed, std::uint64_t index) {
  const std::uint64_t key = mix(seed);
  const std::uint64_t r1 = mix(key ^ ((2 * index + 1) * kGolden));
  const std::uint64_t r2 = mix(key ^ ((2 * index + 2) * kGolden));
  const double u1 = static_cast<double>((r1 >> 11) + 1) * 0x1.0p-53;  // (0, 1]
  const double u2 = static_cast<double>(r2 >> 11) * 0x1.0p-53;        // [0, 1)
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double trapezoid_product(std::span<const double> weights, std::span<const double> values, double dt) {
  if (weights.size() != values.size()) throw std::invalid_argument("trapezoid_product: size mismatch");
  if (weights.size() < 2) return 0.0;
  double sum = 0.0;
  for (std::size_t j = 0; j < weights.size(); ++j) sum += weights[j] * values[j];
  sum -= 0.5 * (weights.front() * values.front() + weights.back() * values.back());
  return dt * sum;
}

std::size_t snap_delay(double delay, double dt) {
  if (delay < 0.0) throw std::invalid_argument("negative delay");
  const double steps = std::round(delay / dt);
  if (delay == 0.0) return 0;
  if (std::fabs(steps * dt - delay) > 1e-6 * delay) {
    throw std::invalid_argument("delay " + std::to_string(delay) + " is not a multiple of dt " + std::to_string(dt));
  }
  return static_cast<std::size_t>(steps);
}

SimulationPlan::SimulationPlan(const EquationSpec& spec, const SimParams& params) : params_(params) {
  spec.validate();
  params.validate();
  const double dt = params.dt;
  const std::size_t n = spec.n();
  const std::size_t end_steps = static_cast<std::size_t>(std::llround(params.t_end / dt));
  if (std::fabs(static_cast<double>(end_steps) * dt - params.t_end) > 1e-6 * params.t_end) {
    throw std::invalid_argument("t_end must be a multiple of dt");
  }
  steps_ = end_steps;

  a_lag_.resize(n + 1);
  for (std::size_t k = 0; k <= n; ++k) a_lag_[k] = snap_delay(spec.delay(k), dt);
  b_lag_.resize(n);
  for (std::size_t k = 1; k <= n; ++k) b_lag_[k - 1] = a_lag_[k];
  tau_lag_ = snap_delay(spec.tau, dt);
  for (const auto& term : spec.nonlin.terms) {
    nonlinear_.push_back({term.c, snap_delay(term.delay, dt), term.alpha, term.alpha == std::trunc(term.alpha)});
  }
  history_ = tau_lag_;
  for (std::size_t lag : a_lag_) history_ = std::max(history_, lag);
  for (const auto& nl : nonlinear_) history_ = std::max(history_, nl.lag);
  if (static_cast<double>(history_) * dt >= params.t_end) {
    throw std::invalid_argument("t_end must exceed the largest delay");
  }

  auto time_at = [&](std::size_t j) { return (static_cast<double>(j) - static_cast<double>(history_)) * dt; };
  a_table_.assign(n + 1, std::vector<double>(steps_));
  sigma_table_.resize(steps_);
  for (std::size_t i = 0; i < steps_; ++i) {
    const double t = static_cast<double>(i) * dt;
    for (std::size_t k = 0; k <= n; ++k) a_table_[k][i] = spec.a[k](t);
    sigma_table_[i] = spec.sigma(t);
  }
  b_table_.assign(n, std::vector<double>(history_ + steps_ + 1));
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j <= history_ + steps_; ++j) b_table_[k][j] = spec.b[k](time_at(j));
  }
  initial_.resize(history_ + 1);
  for (std::size_t j = 0; j <= history_; ++j) initial_[j] = params.init(time_at(j));
}

Trajectory SimulationPlan::run(std::uint64_t seed) const {
  const double dt = params_.dt;
  const double sqrt_dt = std::sqrt(dt);
  std::vector<double> x(history_ + steps_ + 1, 0.0);
  std::copy(initial_.begin(), initial_.end(), x.begin());

  Trajectory out;
  out.seed = seed;
  std::size_t last = steps_;
  for (std::size_t i = 0; i < steps_; ++i) {
    const std::size_t idx = history_ + i;
    double drift = 0.0;
    for (std::size_t k = 0; k < a_lag_.size(); ++k) drift += a_table_[k][i] * x[idx - a_lag_[k]];
    for (std::size_t k = 0; k < b_lag_.size(); ++k) {
      const std::size_t lo = idx - b_lag_[k];
      const std::size_t len = b_lag_[k] + 1;
      drift += trapezoid_product(std::span<const double>(b_table_[k]).subspan(lo, len),
                                 std::span<const double>(x).subspan(lo, len), dt);
    }
    for (const auto& nl : nonlinear_) {
      const double v = x[idx - nl.lag];
      const double powered = nl.integer ? std::pow(v, nl.alpha) : std::copysign(std::pow(std::fabs(v), nl.alpha), v);
      drift += nl.c * powered;
    }
    const double diffusion = sigma_table_[i] * x[idx - tau_lag_];
    x[idx + 1] = x[idx] - drift * dt - diffusion * sqrt_dt * standard_normal(seed, i);
    if (!std::isfinite(x[idx + 1])) {
      out.diverged = true;
      last = i + 1;
      break;
    }
  }
  out.values.assign(x.begin() + static_cast<std::ptrdiff_t>(history_),
                    x.begin() + static_cast<std::ptrdiff_t>(history_ + last + 1));
  out.times.resize(out.values.size());
  for (std::size_t i = 0; i < out.times.size(); ++i) out.times[i] = static_cast<double>(i) * dt;
  return out;
}

Trajectory simulate(const EquationSpec& spec, const SimParams& params, std::uint64_t seed) {
  return SimulationPlan(spec, params).run(seed);
}

double max_tail_abs(const Trajectory& traj, const SimParams& params) {
  if (traj.diverged) return std::numeric_limits<double>::infinity();
  const double start = (1.0 - params.conv_window) * params.t_end;
  double out = 0.0;
  for (std::size_t i = 0; i < traj.values.size(); ++i) {
    if (!std::isfinite(traj.values[i])) return std::numeric_limits<double>::infinity();
    if (traj.times[i] >= start - 1e-9 * params.t_end) out = std::max(out, std::fabs(traj.values[i]));
  }
  return out;
}

PathClass classify(const Trajectory& traj, const SimParams& params) {
  if (traj.diverged) return PathClass::Diverged;
  for (double v : traj.values) {
    if (!std::isfinite(v)) return PathClass::Diverged;
  }
  return max_tail_abs(traj, params) < params.conv_eps ? PathClass::Convergent : PathClass::NonConvergent;
}

TrajectoryBatch simulate_batch(const EquationSpec& spec, const SimParams& params, unsigned threads) {
  const SimulationPlan plan(spec, params);
  TrajectoryBatch batch;
  const auto n = static_cast<std::size_t>(params.n_paths);
  batch.paths.resize(n);
  batch.classes.resize(n);
  batch.max_tail_abs.resize(n);
  parallel_for(n, threads, [&](std::size_t i) {
    batch.paths[i] = plan.run(params.base_seed + i);
    batch.classes[i] = classify(batch.paths[i], params);
    batch.max_tail_abs[i] = max_tail_abs(batch.paths[i], params);
  });
  for (PathClass c : batch.classes) {
    switch (c) {
      case PathClass::Convergent: ++batch.convergent; break;
      case PathClass::NonConvergent: ++batch.non_convergent; break;
      case PathClass::Diverged: ++batch.diverged; break;
    }
  }
  return batch;
}

void write_trajectory_csv(const Trajectory& traj, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << "t,x\n";
  for (std::size_t i = 0; i < traj.values.size(); ++i) {
    os << format_number(traj.times[i]) << ',' << format_number(traj.values[i]) << '\n';
  }
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

void write_batch(const TrajectoryBatch& batch, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (std::size_t i = 0; i < batch.paths.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "path_%03zu.csv", i);
    write_trajectory_csv(batch.paths[i], dir / name);
  }
  std::ofstream os(dir / "summary.csv");
  if (!os) throw std::runtime_error("cannot write summary in " + dir.string());
  os << "seed,class,max_tail_abs\n";
  for (std::size_t i = 0; i < batch.paths.size(); ++i) {
    os << batch.paths[i].seed << ',' << to_string(batch.classes[i]) << ',' << format_number(batch.max_tail_abs[i])
       << '\n';
  }
}

}  // namespace delaystab
