#include "delaystab/commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "delaystab/boundary.hpp"
#include "delaystab/expr.hpp"
#include "delaystab/parallel.hpp"
#include "delaystab/presets.hpp"
#include "delaystab/region.hpp"
#include "delaystab/simulator.hpp"
#include "delaystab/spec_file.hpp"
#include "delaystab/stability.hpp"

namespace delaystab {
namespace {

using nlohmann::json;

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::string cell(const std::optional<double>& v) {
  if (!v) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", *v);
  return buf;
}

std::string cell(double v) { return cell(std::optional<double>(v)); }

void write_json(const json& doc, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << doc.dump(2) << '\n';
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

ScanOverrides scan_flags(const CliOptions& opt) {
  ScanOverrides s;
  s.t_max = opt.t_max;
  s.grid = opt.grid;
  s.panels = opt.panels;
  return s;
}

json verdict_json(const StabilityVerdict& v) {
  json j;
  j["n1"] = v.dec.n1;
  j["n2"] = v.dec.n2;
  j["condition_2_4"] = {{"inf_s", v.condition_2_4.inf_s},
                        {"sup_r", v.condition_2_4.sup_r},
                        {"holds", v.condition_2_4.holds}};
  j["ratio_condition"] = {{"sup_value", opt_json(v.ratio_condition.sup_value)},
                          {"holds", v.ratio_condition.holds}};
  j["sup_rate_at_zero"] = v.exponential.sup_rate_at_zero;
  j["lambda"] = opt_json(v.exponential.lambda);
  j["sup_rate"] = opt_json(v.exponential.sup_rate);
  j["epsilon"] = opt_json(v.probability.epsilon);
  j["nonlinear_factor"] = opt_json(v.probability.factor);
  j["certified"] = v.certified();
  j["error"] = v.error ? json(*v.error) : json(nullptr);
  return j;
}

void print_report(const MultiConditionReport& report, std::ostream& out) {
  char line[256];
  std::snprintf(line, sizeof line, "%-8s %12s %12s %6s %12s %12s %12s %s\n", "(n1,n2)", "inf S", "sup R", "ratio",
                "sup F(t,0)", "lambda", "epsilon", "verdict");
  out << line;
  for (const auto& v : report.verdicts) {
    const std::string dec = "(" + std::to_string(v.dec.n1) + "," + std::to_string(v.dec.n2) + ")";
    const char* verdict = v.error ? "error" : v.certified() ? "certified" : "-";
    std::snprintf(line, sizeof line, "%-8s %12s %12s %6s %12s %12s %12s %s\n", dec.c_str(),
                  cell(v.condition_2_4.inf_s).c_str(), cell(v.condition_2_4.sup_r).c_str(),
                  v.condition_2_4.holds ? "yes" : "no", cell(v.exponential.sup_rate_at_zero).c_str(),
                  cell(v.exponential.lambda).c_str(), cell(v.probability.epsilon).c_str(), verdict);
    out << line;
    if (v.error) out << "  " << *v.error << '\n';
  }
  out << report.certifying.size() << "/" << report.verdicts.size() << " decompositions certify\n";
}

int guarded(const char* name, std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    err << name << ": " << e.what() << '\n';
    return kExitInputError;
  }
}

std::filesystem::path require_out(const CliOptions& opt, const char* cmd) {
  if (!opt.out) throw std::invalid_argument(std::string(cmd) + " needs --out");
  return *opt.out;
}

}  // namespace

int cmd_check(const CliOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded("check", err, [&] {
    if (!opt.spec) throw std::invalid_argument("check needs --spec");
    const SpecFile file = load_spec_file(*opt.spec);
    AnalysisConfig cfg = default_analysis(file.equation);
    ScanOverrides scan = file.scan;
    scan.merge(scan_flags(opt));
    scan.apply(cfg);
    cfg.threads = resolve_threads(0);

    const MultiConditionReport report = multi_condition(file.equation, cfg);
    print_report(report, out);
    if (opt.out) {
      json doc;
      doc["n"] = file.equation.n();
      doc["autonomous"] = file.equation.autonomous();
      doc["scan"] = {{"t_max", cfg.scan.t_max},
                     {"grid", cfg.scan.n_grid},
                     {"refine", cfg.scan.refine_factor},
                     {"panels", cfg.quad.panels},
                     {"lambda_steps", cfg.lambda_steps}};
      doc["verdicts"] = json::array();
      for (const auto& v : report.verdicts) doc["verdicts"].push_back(verdict_json(v));
      doc["certifying"] = json::array();
      for (const auto& d : report.certifying) doc["certifying"].push_back({d.n1, d.n2});
      doc["any_certified"] = report.any_certified();
      write_json(doc, *opt.out);
    }
    return report.any_certified() ? kExitCertified : kExitNotCertified;
  });
}

int cmd_region(const CliOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded("region", err, [&] {
    const std::filesystem::path dir = require_out(opt, "region");
    RegionSpec spec;
    spec.fixed.h = opt.h.value_or(0.5);
    spec.fixed.p = opt.p.value_or(0.2);
    spec.fixed.c = opt.c.value_or(0.0);
    spec.fixed.mu = opt.mu.value_or(0.0);
    spec.fixed.nu = opt.nu.value_or(0.0);
    spec.fixed.tau = opt.tau.value_or(0.0);
    if (!(spec.fixed.h > 0.0)) throw std::invalid_argument("--h must be positive");
    if (!(spec.fixed.p >= 0.0)) throw std::invalid_argument("--p must be non-negative");
    if (opt.a_range) spec.a_range = parse_range(*opt.a_range);
    if (opt.b_range) spec.b_range = parse_range(*opt.b_range);
    spec.conditions = parse_conditions(opt.conditions.value_or("4_6,4_7,4_8"));
    spec.threads = resolve_threads(0);

    const RegionGrid grid = map_region(spec);
    const double h = spec.fixed.h;
    const auto curve = boundary_curve(h, 0.01, 2.0 * std::numbers::pi / h - 0.01, 1000);

    std::filesystem::create_directories(dir);
    export_region(grid, dir / "region.csv");
    export_boundary(curve, dir / "boundary.csv");

    json doc;
    auto range_json = [](const AxisRange& r) { return json{{"lo", r.lo}, {"hi", r.hi}, {"n", r.n}}; };
    doc["a_range"] = range_json(grid.a_range);
    doc["b_range"] = range_json(grid.b_range);
    doc["fixed"] = {{"h", h},
                    {"p", spec.fixed.p},
                    {"c", spec.fixed.c},
                    {"mu", spec.fixed.mu},
                    {"nu", spec.fixed.nu},
                    {"tau", spec.fixed.tau}};
    doc["conditions"] = json::array();
    for (std::size_t c = 0; c < grid.conditions.size(); ++c) {
      doc["conditions"].push_back(
          {{"id", grid.conditions[c].name()}, {"cells", grid.count(c)}, {"errors", grid.errors[c]}});
    }
    doc["files"] = {{"region", "region.csv"}, {"boundary", "boundary.csv"}};
    write_json(doc, dir / "manifest.json");

    for (std::size_t c = 0; c < grid.conditions.size(); ++c) {
      out << grid.conditions[c].name() << ": " << grid.count(c) << " of " << grid.masks[c].size() << " cells";
      if (grid.errors[c] > 0) out << " (" << grid.errors[c] << " evaluation errors)";
      out << '\n';
    }
    out << "wrote " << (dir / "region.csv").string() << '\n';
    return 0;
  });
}

int cmd_boundary(const CliOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded("boundary", err, [&] {
    const double h = opt.h.value_or(0.5);
    if (!(h > 0.0)) throw std::invalid_argument("--h must be positive");
    AxisRange beta{0.01, 2.0 * std::numbers::pi / h - 0.01, 1000};
    if (opt.beta_range) beta = parse_range(*opt.beta_range);
    const auto curve = boundary_curve(h, beta.lo, beta.hi, beta.n);
    if (opt.out) {
      export_boundary(curve, *opt.out);
      out << "wrote " << curve.size() << " points to " << *opt.out << '\n';
    } else {
      out << "beta,a,b\n";
      for (const auto& p : curve) {
        out << format_number(p.beta) << ',' << format_number(p.a) << ',' << format_number(p.b) << '\n';
      }
    }
    return 0;
  });
}

int cmd_simulate(const CliOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded("simulate", err, [&] {
    if (opt.preset && opt.spec) throw std::invalid_argument("give either --preset or --spec, not both");
    EquationSpec spec;
    SimParams sim;
    SimOverrides over;
    if (opt.preset) {
      const Preset& preset = find_preset(*opt.preset);
      spec = preset.equation();
      sim = preset.simulation();
    } else if (opt.spec) {
      const SpecFile file = load_spec_file(*opt.spec);
      spec = file.equation;
      over = file.simulation;
    } else {
      throw std::invalid_argument("simulate needs --preset or --spec");
    }
    SimOverrides flags;
    flags.dt = opt.dt;
    flags.t_end = opt.t_end;
    flags.paths = opt.paths;
    flags.seed = opt.seed;
    over.merge(flags);
    over.apply(sim);

    const TrajectoryBatch batch = simulate_batch(spec, sim, resolve_threads(0));
    if (opt.out) write_batch(batch, *opt.out);
    char line[160];
    std::snprintf(line, sizeof line, "%zu paths: %zu convergent, %zu non-convergent, %zu diverged (fraction %.4g)\n",
                  batch.paths.size(), batch.convergent, batch.non_convergent, batch.diverged,
                  batch.convergent_fraction());
    out << line;
    return 0;
  });
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stability analysis of scalar stochastic delay differential equations", "delaystab"};
  app.set_help_flag("--help", "Print help");
  app.require_subcommand(1);
  CliOptions opt;

  auto add_common = [&opt](CLI::App* sub) {
    sub->add_option("--spec", opt.spec, "Equation spec file (YAML)");
    sub->add_option("--out", opt.out, "Output file or directory");
    sub->add_option("--preset", opt.preset, "Preset: fig4, fig5 or fig6");
    sub->add_option("--conditions", opt.conditions, "Comma-separated condition ids");
    sub->add_option("--a-range", opt.a_range, "a axis as lo:hi:n");
    sub->add_option("--b-range", opt.b_range, "b axis as lo:hi:n");
    sub->add_option("--beta-range", opt.beta_range, "beta samples as lo:hi:n");
    sub->add_option("--h", opt.h, "Delay h");
    sub->add_option("--p", opt.p, "Noise level p = sigma^2/2");
    sub->add_option("--c", opt.c, "Nonlinear coefficient c");
    sub->add_option("--mu", opt.mu, "Kernel decay rate mu");
    sub->add_option("--nu", opt.nu, "Noise decay rate nu");
    sub->add_option("--tau", opt.tau, "Noise delay tau");
    sub->add_option("--seed", opt.seed, "Base seed");
    sub->add_option("--dt", opt.dt, "Time step");
    sub->add_option("--t-end", opt.t_end, "Simulation horizon");
    sub->add_option("--paths", opt.paths, "Number of paths");
    sub->add_option("--t-max", opt.t_max, "Scan horizon");
    sub->add_option("--grid", opt.grid, "Scan grid points");
    sub->add_option("--panels", opt.panels, "Quadrature panels");
  };
  auto* check = app.add_subcommand("check", "Evaluate every decomposition for a spec file");
  auto* region = app.add_subcommand("region", "Map stability regions over an (a, b) grid");
  auto* boundary = app.add_subcommand("boundary", "Sample the exact deterministic stability boundary");
  auto* simulate = app.add_subcommand("simulate", "Run a seeded Monte Carlo batch");
  for (auto* sub : {check, region, boundary, simulate}) add_common(sub);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    for (auto* sub : app.get_subcommands()) out << sub->help();
    if (app.get_subcommands().empty()) err << app.help();
    return kExitInputError;
  }
  if (check->parsed()) return cmd_check(opt, out, err);
  if (region->parsed()) return cmd_region(opt, out, err);
  if (boundary->parsed()) return cmd_boundary(opt, out, err);
  return cmd_simulate(opt, out, err);
}

}  // namespace delaystab
