#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "delaystab/presets.hpp"
#include "delaystab/simulator.hpp"

using namespace delaystab;

namespace {

EquationSpec zero_equation(double h = 0.5) {
  EquationSpec spec;
  spec.h = {h};
  spec.a = {CoeffExpr::constant(0.0), CoeffExpr::constant(0.0)};
  spec.b = {CoeffExpr::constant(0.0)};
  spec.sigma = CoeffExpr::constant(0.0);
  return spec;
}

SimParams params(double dt, double t_end, const char* init) {
  SimParams sim;
  sim.dt = dt;
  sim.t_end = t_end;
  sim.init = parse(init);
  return sim;
}

bool same_bits(const std::vector<double>& x, const std::vector<double>& y) {
  return x.size() == y.size() && std::memcmp(x.data(), y.data(), x.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("exponential decay") {
  EquationSpec spec;
  spec.a = {CoeffExpr::constant(1.0)};
  spec.sigma = CoeffExpr::constant(0.0);
  const auto traj = simulate(spec, params(1e-3, 2.0, "1"), 1);
  REQUIRE(traj.values.size() == 2001);
  CHECK(traj.times[1000] == doctest::Approx(1.0));
  CHECK(std::fabs(traj.values[1000] - std::exp(-1.0)) < 2e-3);
}

TEST_CASE("zero equation keeps a constant path") {
  auto sim = params(1e-3, 1.0, "0.55");
  sim.n_paths = 1;
  const auto batch = simulate_batch(zero_equation(), sim);
  REQUIRE(batch.paths.size() == 1);
  for (double v : batch.paths[0].values) REQUIRE(v == 0.55);
}

TEST_CASE("determinism across runs and thread counts") {
  const Preset& p = find_preset("fig4");
  auto sim = p.simulation();
  sim.t_end = 3.0;
  sim.n_paths = 6;
  const auto a = simulate_batch(p.equation(), sim, 1);
  const auto b = simulate_batch(p.equation(), sim, 1);
  const auto c = simulate_batch(p.equation(), sim, 3);
  for (std::size_t i = 0; i < a.paths.size(); ++i) {
    CHECK(a.paths[i].seed == sim.base_seed + i);
    CHECK(same_bits(a.paths[i].values, b.paths[i].values));
    CHECK(same_bits(a.paths[i].values, c.paths[i].values));
  }
  CHECK_FALSE(same_bits(a.paths[0].values, a.paths[1].values));
}

TEST_CASE("order-one convergence for a delayed linear equation") {
  EquationSpec spec = zero_equation(0.5);
  spec.a[1] = CoeffExpr::constant(1.0);
  auto at_end = [&](double dt) { return simulate(spec, params(dt, 2.0, "1"), 1).values.back(); };
  const double ref = at_end(0.01 / 16.0);
  const double e1 = std::fabs(at_end(0.01) - ref);
  const double e2 = std::fabs(at_end(0.005) - ref);
  CHECK(e1 / e2 > 1.8);
  CHECK(e1 / e2 < 2.5);
}

TEST_CASE("noise increments have variance sigma^2 x^2 dt") {
  EquationSpec spec;
  spec.a = {CoeffExpr::constant(0.0)};
  spec.sigma = CoeffExpr::constant(0.5);
  const SimParams sim = params(0.01, 0.01, "1");
  const SimulationPlan plan(spec, sim);
  double sum = 0.0, sum2 = 0.0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    const double x = plan.run(static_cast<std::uint64_t>(i) + 1).values[1] - 1.0;
    sum += x;
    sum2 += x * x;
  }
  const double var = (sum2 - sum * sum / n) / (n - 1);
  CHECK(std::fabs(var / (0.25 * 0.01) - 1.0) < 0.05);
}

TEST_CASE("standard normal stream") {
  double sum = 0.0, sum2 = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double z = standard_normal(42, static_cast<std::uint64_t>(i));
    sum += z;
    sum2 += z * z;
  }
  CHECK(std::fabs(sum / n) < 0.01);
  CHECK(std::fabs(sum2 / n - 1.0) < 0.01);
  CHECK(standard_normal(1, 5) == standard_normal(1, 5));
  CHECK(standard_normal(1, 5) != standard_normal(2, 5));
}

TEST_CASE("distributed-delay trapezoid") {
  const double dt = 1e-3, b = 2.5, h = 0.3;
  const std::size_t m = snap_delay(h, dt);
  std::vector<double> w(m + 1, b), x(m + 1, 1.0);
  CHECK(std::fabs(trapezoid_product(w, x, dt) - b * h) < 1e-9);
}

TEST_CASE("delay snapping") {
  CHECK(snap_delay(0.5, 1e-3) == 500);
  CHECK(snap_delay(0.3, 1e-3) == 300);
  CHECK(snap_delay(0.0, 1e-3) == 0);
  CHECK_THROWS_AS(snap_delay(0.5005, 1e-3), std::invalid_argument);
  CHECK_THROWS_AS(simulate(zero_equation(0.5), params(1e-3, 0.4, "1"), 1), std::invalid_argument);
}

TEST_CASE("classification") {
  SimParams sim = params(0.01, 30.0, "0");
  Trajectory zero;
  for (int i = 0; i <= 3000; ++i) {
    zero.times.push_back(i * 0.01);
    zero.values.push_back(0.0);
  }
  CHECK(classify(zero, sim) == PathClass::Convergent);

  Trajectory decay = zero;
  for (std::size_t i = 0; i < decay.values.size(); ++i) decay.values[i] = std::exp(-decay.times[i]);
  CHECK(classify(decay, sim) == PathClass::Convergent);
  CHECK(max_tail_abs(decay, sim) == doctest::Approx(std::exp(-27.0)));

  Trajectory stuck = zero;
  stuck.values.back() = 0.5;
  CHECK(classify(stuck, sim) == PathClass::NonConvergent);

  Trajectory bad = zero;
  bad.values[10] = std::numeric_limits<double>::infinity();
  CHECK(classify(bad, sim) == PathClass::Diverged);
}

TEST_CASE("explosive paths are marked diverged") {
  EquationSpec spec;
  spec.a = {CoeffExpr::constant(0.0)};
  spec.sigma = CoeffExpr::constant(0.0);
  spec.h = {};
  spec.nonlin.terms.push_back({-1.0, 0.0, 2.0});  // x' = x^2 blows up at t = 1
  const auto traj = simulate(spec, params(1e-2, 5.0, "1"), 1);
  CHECK(traj.diverged);
  CHECK_FALSE(std::isfinite(traj.values.back()));
  CHECK(traj.values.size() < 501);
  CHECK(classify(traj, params(1e-2, 5.0, "1")) == PathClass::Diverged);
}

TEST_CASE("csv export") {
  const auto dir = std::filesystem::temp_directory_path() / "delaystab_sim_test";
  std::filesystem::remove_all(dir);
  auto sim = params(0.1, 1.0, "1");
  sim.n_paths = 3;
  const auto batch = simulate_batch(zero_equation(0.5), sim);
  write_batch(batch, dir);
  CHECK(std::filesystem::exists(dir / "path_002.csv"));
  std::ifstream in(dir / "path_000.csv");
  std::string line;
  std::getline(in, line);
  CHECK(line == "t,x");
  std::getline(in, line);
  CHECK(line == "0,1");
  std::ifstream summary(dir / "summary.csv");
  std::getline(summary, line);
  CHECK(line == "seed,class,max_tail_abs");
  std::getline(summary, line);
  CHECK(line == "1,non_convergent,1");
  std::filesystem::remove_all(dir);
}

TEST_CASE("parameter validation") {
  SimParams sim;
  sim.dt = 0.0;
  CHECK_THROWS(sim.validate());
  sim = SimParams{};
  sim.conv_window = 1.5;
  CHECK_THROWS(sim.validate());
  sim = SimParams{};
  sim.n_paths = 0;
  CHECK_THROWS(sim.validate());
}
