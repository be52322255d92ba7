#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include <json.hpp>

#include "delaystab/commands.hpp"
#include "delaystab/presets.hpp"
#include "delaystab/spec_file.hpp"

using namespace delaystab;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const char* name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  fs::path write(const char* name, const std::string& text) const {
    std::ofstream(path / name) << text;
    return path / name;
  }
};

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kDecay = R"(equation:
  delays: [0.5]
  a: [1, 0]
  b: [0]
  sigma: 0
)";

const char* kGrowth = R"(equation:
  delays: [0.5]
  a: [-1, 0]
  b: [0]
  sigma: 0
)";

const char* kPointA = R"(equation:
  delays: [0.5]
  a: [0, -2]
  b: [9]
  sigma: sqrt(1.1)
  nonlinearity:
    - {c: 1, delay: 0.5, alpha: 2}
)";

}  // namespace

TEST_CASE("check exit codes and report") {
  TempDir tmp("delaystab_cli_check");
  const auto decay = tmp.write("decay.yaml", kDecay);
  auto r = run({"check", "--spec", decay.string(), "--out", (tmp.path / "r.json").string()});
  CHECK(r.code == 0);
  CHECK(r.out.find("4/4 decompositions certify") != std::string::npos);
  const auto doc = nlohmann::json::parse(slurp(tmp.path / "r.json"));
  CHECK(doc["verdicts"].size() == 4);
  CHECK(doc["certifying"].size() == 4);
  CHECK(doc["verdicts"][0]["lambda"].get<double>() == 2.0);

  r = run({"check", "--spec", tmp.write("growth.yaml", kGrowth).string()});
  CHECK(r.code == 2);
  CHECK(r.out.find("0/4 decompositions certify") != std::string::npos);

  r = run({"check", "--spec", tmp.write("bad.yaml", "equation: [1, 2\n").string()});
  CHECK(r.code == 1);
  CHECK(r.err.find("line") != std::string::npos);

  r = run({"check", "--spec", (tmp.path / "missing.yaml").string()});
  CHECK(r.code == 1);
  r = run({"check"});
  CHECK(r.code == 1);
  r = run({"frobnicate"});
  CHECK(r.code == 1);
}

TEST_CASE("check at point A certifies through dec (1,1) only") {
  TempDir tmp("delaystab_cli_point_a");
  const auto spec = tmp.write("a.yaml", kPointA);
  const auto json_path = tmp.path / "a.json";
  const auto r = run({"check", "--spec", spec.string(), "--out", json_path.string()});
  CHECK(r.code == 0);
  const auto doc = nlohmann::json::parse(slurp(json_path));
  REQUIRE(doc["verdicts"].size() == 4);
  CHECK(doc["verdicts"][0]["certified"] == false);
  CHECK(doc["verdicts"][3]["certified"] == true);
  CHECK(doc["verdicts"][3]["epsilon"].get<double>() > 0.0);
  CHECK(doc["certifying"] == nlohmann::json::array({{1, 1}}));
}

TEST_CASE("flags override the spec file") {
  TempDir tmp("delaystab_cli_override");
  const auto spec = tmp.write("s.yaml", std::string(kDecay) + "scan: {t_max: 7, grid: 11}\nquad: {panels: 8}\n");
  const auto out = tmp.path / "r.json";
  REQUIRE(run({"check", "--spec", spec.string(), "--out", out.string(), "--grid", "21"}).code == 0);
  const auto doc = nlohmann::json::parse(slurp(out));
  CHECK(doc["scan"]["t_max"].get<double>() == 7.0);
  CHECK(doc["scan"]["grid"].get<int>() == 21);
  CHECK(doc["scan"]["panels"].get<int>() == 8);
}

TEST_CASE("spec file parsing") {
  const auto f = parse_spec_text(R"y(equation:
  n: 1
  delays: [0.5]
  a: [3, 0]
  b: ["4*exp(-0.1*t)"]
  sigma: exp(-0.01*t)
  tau: 0
  nonlinearity:
    - {c: 3, delay: 0.5}
simulation: {dt: 0.001, t_end: 30, paths: 50, seed: 9, init: -0.09*cos(t)}
)y");
  CHECK(f.equation.n() == 1);
  CHECK(f.equation.b[0].eval(10.0) == doctest::Approx(4.0 * std::exp(-1.0)));
  CHECK(f.equation.nonlin.terms[0].alpha == 2.0);
  CHECK(*f.simulation.seed == 9);
  CHECK(*f.simulation.init == "-0.09*cos(t)");

  CHECK_THROWS_AS(parse_spec_text("equation:\n  delays: [0.5]\n  a: [1, 0]\n  colour: red\n"), SpecFileError);
  CHECK_THROWS_AS(parse_spec_text("equation:\n  delays: [0.5]\n  a: [1]\n"), SpecFileError);
  CHECK_THROWS_AS(parse_spec_text("equation:\n  n: 2\n  delays: [0.5]\n  a: [1, 0]\n"), SpecFileError);
  CHECK_THROWS_AS(parse_spec_text("equation:\n  a: [1]\nextra: 1\n"), SpecFileError);
  CHECK_THROWS_AS(parse_spec_text("scan: {grid: 3}\n"), SpecFileError);
  try {
    parse_spec_text("equation:\n  a: [\"2**\"]\n");
    FAIL("expected an error");
  } catch (const SpecFileError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() > 0);
  }
}

TEST_CASE("region command writes csv, boundary and manifest deterministically") {
  TempDir tmp("delaystab_cli_region");
  const auto d1 = tmp.path / "one", d2 = tmp.path / "two";
  const std::vector<std::string> base = {"region", "--h", "0.5", "--p", "0.2", "--a-range", "-4:8:200",
                                         "--b-range", "-10:30:200", "--conditions", "4_6,4_7,4_8", "--out"};
  auto a1 = base, a2 = base;
  a1.push_back(d1.string());
  a2.push_back(d2.string());
  REQUIRE(run(a1).code == 0);
  REQUIRE(run(a2).code == 0);
  const auto csv = slurp(d1 / "region.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 40001);
  CHECK(csv == slurp(d2 / "region.csv"));
  CHECK(slurp(d1 / "manifest.json") == slurp(d2 / "manifest.json"));
  const auto manifest = nlohmann::json::parse(slurp(d1 / "manifest.json"));
  CHECK(manifest["files"]["boundary"] == "boundary.csv");
  CHECK(manifest["a_range"]["n"] == 200);
  CHECK(fs::exists(d1 / "boundary.csv"));

  CHECK(run({"region", "--out", (tmp.path / "x").string(), "--a-range", "1:2"}).code == 1);
  CHECK(run({"region"}).code == 1);
}

TEST_CASE("boundary command") {
  TempDir tmp("delaystab_cli_boundary");
  auto r = run({"boundary", "--h", "0.5", "--beta-range", "3.141592653589793:6.283185307179586:2"});
  REQUIRE(r.code == 0);
  REQUIRE(r.out.rfind("beta,a,b\n3.141592653589793,", 0) == 0);
  {
    std::istringstream rows(r.out.substr(9));
    double beta = 0, a = 0, b = 0;
    char comma = 0;
    rows >> beta >> comma >> a >> comma >> b;
    CHECK(a == doctest::Approx(std::numbers::pi).epsilon(1e-12));
    CHECK(std::abs(b) < 1e-12);
  }
  const auto out = tmp.path / "b.csv";
  REQUIRE(run({"boundary", "--out", out.string()}).code == 0);
  const auto csv = slurp(out);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1001);
  CHECK(run({"boundary", "--beta-range", "1:20:5"}).code == 1);
}

TEST_CASE("simulate presets and spec files") {
  TempDir tmp("delaystab_cli_sim");
  auto r = run({"simulate", "--preset", "fig4", "--out", (tmp.path / "fig4").string()});
  REQUIRE(r.code == 0);
  CHECK(fs::exists(tmp.path / "fig4" / "path_049.csv"));
  CHECK_FALSE(fs::exists(tmp.path / "fig4" / "path_050.csv"));
  const auto summary = slurp(tmp.path / "fig4" / "summary.csv");
  CHECK(std::count(summary.begin(), summary.end(), '\n') == 51);
  std::size_t conv = 0;
  for (std::size_t pos = 0; (pos = summary.find(",convergent,", pos)) != std::string::npos; ++pos) ++conv;
  CHECK(conv >= 45);

  const auto zero = tmp.write("zero.yaml", R"(equation:
  delays: [0.5]
  a: [0, 0]
  b: [0]
  sigma: 0
simulation: {paths: 3, t_end: 2, init: 0.55}
)");
  r = run({"simulate", "--spec", zero.string(), "--paths", "1", "--out", (tmp.path / "zero").string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("1 paths") != std::string::npos);
  CHECK(fs::exists(tmp.path / "zero" / "path_000.csv"));
  CHECK_FALSE(fs::exists(tmp.path / "zero" / "path_001.csv"));
  const auto path = slurp(tmp.path / "zero" / "path_000.csv");
  CHECK(std::count(path.begin(), path.end(), '\n') == 2002);
  CHECK(path.find(",0.55\n") != std::string::npos);
  CHECK(path.find("2,0.55\n") != std::string::npos);

  CHECK(run({"simulate", "--preset", "fig9"}).code == 1);
  CHECK(run({"simulate"}).code == 1);
  CHECK(run({"simulate", "--preset", "fig4", "--dt", "0.0007"}).code == 1);
}

TEST_CASE("presets match the published captions") {
  struct Row {
    const char* name;
    double a, b, c, mu, nu, h, p, tau;
    const char* init;
  };
  const Row frozen[] = {
      {"fig4", -2.0, 9.0, 1.0, 0.0, 0.0, 0.5, 0.55, 0.0, "0.6*cos(t)"},
      {"fig5", 3.0, 4.0, 3.0, 0.1, 0.01, 0.5, 0.5, 0.0, "-0.09*cos(t)"},
      {"fig6", 0.0, 8.5, 1.0, 0.008, 0.15, 0.3, 0.2, 0.0, "0.55"},
  };
  REQUIRE(presets().size() == 3);
  for (const auto& row : frozen) {
    const Preset& p = find_preset(row.name);
    CHECK(p.a == row.a);
    CHECK(p.b == row.b);
    CHECK(p.c == row.c);
    CHECK(p.mu == row.mu);
    CHECK(p.nu == row.nu);
    CHECK(p.h == row.h);
    CHECK(p.p == row.p);
    CHECK(p.tau == row.tau);
    CHECK(p.init == row.init);
  }

  const auto e4 = find_preset("fig4").equation();
  CHECK(e4.a[0].eval(0.0) == 0.0);
  CHECK(e4.a[1].eval(0.0) == -2.0);
  CHECK(e4.b[0].eval(3.0) == 9.0);
  CHECK(e4.sigma.eval(0.0) == doctest::Approx(std::sqrt(1.1)).epsilon(1e-15));

  const auto e5 = find_preset("fig5").equation();
  CHECK(e5.a[0].eval(0.0) == 3.0);
  CHECK(e5.a[1].eval(0.0) == 0.0);
  CHECK(e5.b[0].eval(10.0) == doctest::Approx(4.0 * std::exp(-1.0)).epsilon(1e-15));
  CHECK(e5.sigma.eval(100.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(e5.nonlin.terms.size() == 1);
  CHECK(e5.nonlin.terms[0].c == 3.0);
  CHECK(e5.nonlin.terms[0].delay == 0.5);

  const auto e6 = find_preset("fig6").equation();
  CHECK(e6.sigma.eval(0.0) == doctest::Approx(std::sqrt(0.4)).epsilon(1e-15));
  CHECK(e6.h[0] == 0.3);

  const auto sim = find_preset("fig6").simulation();
  CHECK(sim.dt == 1e-3);
  CHECK(sim.t_end == 30.0);
  CHECK(sim.n_paths == 50);
  CHECK(sim.init.eval(-0.1) == 0.55);
}
