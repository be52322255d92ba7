#include "delaystab/spec_file.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "delaystab/expr.hpp"

namespace delaystab {
namespace {

[[noreturn]] void fail(const YAML::Node& node, const std::string& what) {
  const auto mark = node.Mark();
  if (mark.is_null()) throw SpecFileError(what);
  throw SpecFileError(what, mark.line + 1, mark.column + 1);
}

void require_map(const YAML::Node& node, const std::string& where, std::initializer_list<const char*> keys) {
  if (!node.IsMap()) fail(node, where + " must be a mapping");
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    bool known = false;
    for (const char* k : keys) known = known || key == k;
    if (!known) fail(kv.first, "unknown key '" + key + "' in " + where);
  }
}

template <typename T>
T scalar(const YAML::Node& node, const std::string& what) {
  if (!node.IsScalar()) fail(node, what + " must be a scalar");
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    fail(node, "bad value for " + what + ": '" + node.Scalar() + "'");
  }
}

template <typename T>
void read_opt(const YAML::Node& map, const char* key, std::optional<T>& out) {
  if (const auto node = map[key]) out = scalar<T>(node, key);
}

CoeffExpr expression(const YAML::Node& node, const std::string& what) {
  if (!node.IsScalar()) fail(node, what + " must be a number or expression");
  try {
    return CoeffExpr::parse(node.Scalar());
  } catch (const ParseError& e) {
    const auto mark = node.Mark();
    throw SpecFileError(what + ": " + e.what(), mark.line + 1, mark.column + 1 + static_cast<int>(e.offset()));
  }
}

std::vector<CoeffExpr> expression_list(const YAML::Node& node, const std::string& what) {
  if (!node.IsSequence()) fail(node, what + " must be a list");
  std::vector<CoeffExpr> out;
  for (std::size_t i = 0; i < node.size(); ++i) out.push_back(expression(node[i], what + "[" + std::to_string(i) + "]"));
  return out;
}

EquationSpec read_equation(const YAML::Node& node) {
  require_map(node, "equation", {"n", "delays", "a", "b", "sigma", "tau", "nonlinearity"});
  EquationSpec spec;
  if (const auto d = node["delays"]) {
    if (!d.IsSequence()) fail(d, "delays must be a list");
    for (std::size_t i = 0; i < d.size(); ++i) spec.h.push_back(scalar<double>(d[i], "delay"));
  }
  if (const auto n = node["n"]) {
    if (scalar<std::size_t>(n, "n") != spec.h.size()) fail(n, "n does not match the number of delays");
  }
  if (!node["a"]) fail(node, "equation needs a");
  spec.a = expression_list(node["a"], "a");
  if (spec.a.size() != spec.n() + 1) fail(node["a"], "a needs n+1 = " + std::to_string(spec.n() + 1) + " entries");
  if (const auto b = node["b"]) {
    spec.b = expression_list(b, "b");
  } else {
    spec.b.assign(spec.n(), CoeffExpr::constant(0.0));
  }
  if (spec.b.size() != spec.n()) fail(node["b"], "b needs n = " + std::to_string(spec.n()) + " entries");
  if (const auto s = node["sigma"]) spec.sigma = expression(s, "sigma");
  if (const auto t = node["tau"]) spec.tau = scalar<double>(t, "tau");
  if (const auto nl = node["nonlinearity"]) {
    if (!nl.IsSequence()) fail(nl, "nonlinearity must be a list");
    for (const auto& term : nl) {
      require_map(term, "nonlinearity term", {"c", "delay", "alpha"});
      NonlinearTerm t;
      if (!term["c"]) fail(term, "nonlinearity term needs c");
      t.c = scalar<double>(term["c"], "c");
      if (const auto d = term["delay"]) t.delay = scalar<double>(d, "delay");
      if (const auto a = term["alpha"]) t.alpha = scalar<double>(a, "alpha");
      spec.nonlin.terms.push_back(t);
    }
  }
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    fail(node, std::string("invalid equation: ") + e.what());
  }
  return spec;
}

}  // namespace

SpecFileError::SpecFileError(const std::string& what, int line, int column)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what
                                  : what),
      line_(line),
      column_(column) {}

void ScanOverrides::apply(AnalysisConfig& cfg) const {
  if (t_max) cfg.scan.t_max = *t_max;
  if (grid) cfg.scan.n_grid = *grid;
  if (refine) cfg.scan.refine_factor = *refine;
  if (panels) cfg.quad.panels = *panels;
  cfg.scan.validate();
  cfg.quad.validate();
}

void ScanOverrides::merge(const ScanOverrides& other) {
  if (other.t_max) t_max = other.t_max;
  if (other.grid) grid = other.grid;
  if (other.refine) refine = other.refine;
  if (other.panels) panels = other.panels;
}

void SimOverrides::apply(SimParams& sim) const {
  if (dt) sim.dt = *dt;
  if (t_end) sim.t_end = *t_end;
  if (paths) sim.n_paths = *paths;
  if (seed) sim.base_seed = *seed;
  if (init) sim.init = CoeffExpr::parse(*init);
  if (conv_eps) sim.conv_eps = *conv_eps;
  if (conv_window) sim.conv_window = *conv_window;
  sim.validate();
}

void SimOverrides::merge(const SimOverrides& other) {
  if (other.dt) dt = other.dt;
  if (other.t_end) t_end = other.t_end;
  if (other.paths) paths = other.paths;
  if (other.seed) seed = other.seed;
  if (other.init) init = other.init;
  if (other.conv_eps) conv_eps = other.conv_eps;
  if (other.conv_window) conv_window = other.conv_window;
}

SpecFile parse_spec_text(std::string_view text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    throw SpecFileError(e.msg, e.mark.line + 1, e.mark.column + 1);
  }
  if (!root.IsMap()) throw SpecFileError("spec file must be a mapping with an 'equation' section");
  require_map(root, "spec file", {"equation", "scan", "quad", "simulation"});
  if (!root["equation"]) throw SpecFileError("spec file needs an 'equation' section");

  SpecFile out;
  out.equation = read_equation(root["equation"]);
  if (const auto s = root["scan"]) {
    require_map(s, "scan", {"t_max", "grid", "refine"});
    read_opt(s, "t_max", out.scan.t_max);
    read_opt(s, "grid", out.scan.grid);
    read_opt(s, "refine", out.scan.refine);
  }
  if (const auto q = root["quad"]) {
    require_map(q, "quad", {"panels"});
    read_opt(q, "panels", out.scan.panels);
  }
  if (const auto s = root["simulation"]) {
    require_map(s, "simulation", {"dt", "t_end", "paths", "seed", "init", "conv_eps", "conv_window"});
    read_opt(s, "dt", out.simulation.dt);
    read_opt(s, "t_end", out.simulation.t_end);
    read_opt(s, "paths", out.simulation.paths);
    read_opt(s, "seed", out.simulation.seed);
    if (const auto init = s["init"]) {
      expression(init, "init");
      out.simulation.init = init.Scalar();
    }
    read_opt(s, "conv_eps", out.simulation.conv_eps);
    read_opt(s, "conv_window", out.simulation.conv_window);
  }
  return out;
}

SpecFile load_spec_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SpecFileError("cannot read spec file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_spec_text(buf.str());
}

}  // namespace delaystab
