#include "delaystab/region.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

#include <boost/math/tools/roots.hpp>

#include "delaystab/equation.hpp"
#include "delaystab/expr.hpp"
#include "delaystab/parallel.hpp"
#include "delaystab/stability.hpp"

namespace delaystab {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

template <typename T>
T parse_field(std::string_view text, const char* what) {
  text = trim(text);
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw std::invalid_argument(std::string("bad ") + what + ": '" + std::string(text) + "'");
  }
  return value;
}

double segment_distance(double px, double py, const BoundaryPoint& p, const BoundaryPoint& q) {
  const double dx = q.a - p.a, dy = q.b - p.b;
  const double len2 = dx * dx + dy * dy;
  double u = len2 > 0.0 ? ((px - p.a) * dx + (py - p.b) * dy) / len2 : 0.0;
  u = std::clamp(u, 0.0, 1.0);
  return std::hypot(px - (p.a + u * dx), py - (p.b + u * dy));
}

}  // namespace

double AxisRange::at(int i) const {
  if (n == 1) return lo;
  if (i == n - 1) return hi;
  return lo + i * (hi - lo) / (n - 1);
}

void AxisRange::validate() const {
  if (n < 1) throw std::invalid_argument("range needs at least one point");
  if (!std::isfinite(lo) || !std::isfinite(hi)) throw std::invalid_argument("range bounds must be finite");
  if (n > 1 && !(lo < hi)) throw std::invalid_argument("range needs lo < hi");
}

AxisRange parse_range(std::string_view text) {
  const auto c1 = text.find(':');
  const auto c2 = c1 == std::string_view::npos ? c1 : text.find(':', c1 + 1);
  if (c2 == std::string_view::npos || text.find(':', c2 + 1) != std::string_view::npos) {
    throw std::invalid_argument("range must look like lo:hi:n, got '" + std::string(text) + "'");
  }
  AxisRange r{parse_field<double>(text.substr(0, c1), "range lower bound"),
              parse_field<double>(text.substr(c1 + 1, c2 - c1 - 1), "range upper bound"),
              parse_field<int>(text.substr(c2 + 1), "range count")};
  r.validate();
  return r;
}

std::string ConditionId::name() const {
  switch (kind) {
    case Kind::R4_6: return "4_6";
    case Kind::R4_7: return "4_7";
    case Kind::R4_8: return "4_8";
    case Kind::C1: return "C1";
    case Kind::C2: return "C2";
    case Kind::Generic: return "generic_" + std::to_string(n1) + "_" + std::to_string(n2);
  }
  return "?";
}

ConditionId ConditionId::parse(std::string_view text) {
  text = trim(text);
  if (text == "4_6") return {Kind::R4_6};
  if (text == "4_7") return {Kind::R4_7};
  if (text == "4_8") return {Kind::R4_8};
  if (text == "C1") return {Kind::C1};
  if (text == "C2") return {Kind::C2};
  std::string_view rest;
  char sep = '_';
  if (text.starts_with("generic_")) {
    rest = text.substr(8);
  } else if (text.starts_with("generic(") && text.ends_with(")")) {
    rest = text.substr(8, text.size() - 9);
    sep = ',';
  } else {
    throw std::invalid_argument("unknown condition '" + std::string(text) + "'");
  }
  const auto pos = rest.find(sep);
  if (pos == std::string_view::npos) throw std::invalid_argument("generic condition needs n1 and n2");
  ConditionId id{Kind::Generic, parse_field<int>(rest.substr(0, pos), "n1"),
                 parse_field<int>(rest.substr(pos + 1), "n2")};
  if (id.n1 < 0 || id.n1 > 1 || id.n2 < 0 || id.n2 > 1) {
    throw std::invalid_argument("generic decomposition must lie in {0,1}x{0,1}");
  }
  return id;
}

std::vector<ConditionId> parse_conditions(std::string_view csv) {
  std::vector<ConditionId> out;
  // Commas inside generic(n1,n2) do not split.
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= csv.size(); ++i) {
    if (i < csv.size() && csv[i] == '(') ++depth;
    if (i < csv.size() && csv[i] == ')') --depth;
    if (i == csv.size() || (csv[i] == ',' && depth == 0)) {
      const auto item = trim(csv.substr(start, i - start));
      if (item.empty()) throw std::invalid_argument("empty condition name");
      out.push_back(ConditionId::parse(item));
      start = i + 1;
    }
  }
  return out;
}

bool RegionGrid::at(std::size_t cond, int i, int j) const {
  return masks.at(cond).at(static_cast<std::size_t>(j) * a_range.n + i) != 0;
}

std::size_t RegionGrid::count(std::size_t cond) const {
  return static_cast<std::size_t>(std::count(masks.at(cond).begin(), masks.at(cond).end(), std::uint8_t{1}));
}

bool evaluate_condition(const ConditionId& id, const ScalarParams& pp) {
  switch (id.kind) {
    case ConditionId::Kind::R4_6: return region_4_6(pp);
    case ConditionId::Kind::R4_7: return region_4_7(pp);
    case ConditionId::Kind::R4_8: return region_4_8(pp);
    case ConditionId::Kind::C1: return region_C1(pp);
    case ConditionId::Kind::C2: return region_C2(pp);
    case ConditionId::Kind::Generic: {
      const EquationSpec spec = constant_delay_equation(pp.a, pp.b, pp.h, pp.p, pp.tau, pp.c);
      return verify_exponential_ms(spec, {id.n1, id.n2}, default_analysis(spec)).lambda.has_value();
    }
  }
  return false;
}

RegionGrid map_region(const RegionSpec& spec) {
  spec.a_range.validate();
  spec.b_range.validate();
  RegionGrid grid;
  grid.a_range = spec.a_range;
  grid.b_range = spec.b_range;
  grid.fixed = spec.fixed;
  grid.conditions = spec.conditions;
  const std::size_t na = static_cast<std::size_t>(spec.a_range.n);
  const std::size_t cells = na * static_cast<std::size_t>(spec.b_range.n);
  grid.masks.assign(spec.conditions.size(), std::vector<std::uint8_t>(cells, 0));
  std::vector<std::vector<std::uint8_t>> failed(spec.conditions.size(), std::vector<std::uint8_t>(cells, 0));

  parallel_for(cells, resolve_threads(spec.threads), [&](std::size_t cell) {
    ScalarParams pp = spec.fixed;
    pp.a = spec.a_range.at(static_cast<int>(cell % na));
    pp.b = spec.b_range.at(static_cast<int>(cell / na));
    for (std::size_t c = 0; c < spec.conditions.size(); ++c) {
      try {
        grid.masks[c][cell] = evaluate_condition(spec.conditions[c], pp) ? 1 : 0;
      } catch (const std::exception&) {
        failed[c][cell] = 1;
      }
    }
  });
  grid.errors.resize(spec.conditions.size());
  for (std::size_t c = 0; c < failed.size(); ++c) {
    grid.errors[c] = static_cast<std::size_t>(std::count(failed[c].begin(), failed[c].end(), std::uint8_t{1}));
  }
  return grid;
}

void export_region(const RegionGrid& grid, std::ostream& os) {
  os << "a,b";
  for (const auto& id : grid.conditions) os << ',' << id.name();
  os << '\n';
  for (int j = 0; j < grid.b_range.n; ++j) {
    const std::string b = format_number(grid.b_range.at(j));
    for (int i = 0; i < grid.a_range.n; ++i) {
      os << format_number(grid.a_range.at(i)) << ',' << b;
      for (std::size_t c = 0; c < grid.conditions.size(); ++c) os << ',' << (grid.at(c, i, j) ? '1' : '0');
      os << '\n';
    }
  }
}

void export_region(const RegionGrid& grid, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  export_region(grid, os);
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

void export_boundary(const std::vector<BoundaryPoint>& curve, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << "beta,a,b\n";
  for (const auto& p : curve) {
    os << format_number(p.beta) << ',' << format_number(p.a) << ',' << format_number(p.b) << '\n';
  }
  if (!os) throw std::runtime_error("write failed: " + path.string());
}

ExactRegion::ExactRegion(double h, int n_pts) {
  if (!(h > 0.0)) throw std::invalid_argument("h must be positive");
  if (n_pts < 2) throw std::invalid_argument("n_pts must be at least 2");
  // a + bh is proportional to sin x - x cos x with x = h beta; its first
  // positive root lies in (pi, 3 pi / 2).
  auto f = [](double x) { return std::sin(x) - x * std::cos(x); };
  std::uintmax_t iters = 100;
  const auto bracket = boost::math::tools::toms748_solve(
      f, std::numbers::pi, 1.5 * std::numbers::pi, boost::math::tools::eps_tolerance<double>(52), iters);
  beta_star_ = 0.5 * (bracket.first + bracket.second) / h;

  vertices_.reserve(static_cast<std::size_t>(n_pts) + 1);
  vertices_.push_back({0.0, 2.0 / h, -2.0 / (h * h)});
  for (int i = 1; i <= n_pts; ++i) vertices_.push_back(boundary_point(beta_star_ * i / n_pts, h));
}

bool ExactRegion::contains(double a, double b, double margin) const {
  bool inside = false;
  const std::size_t n = vertices_.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const auto& p = vertices_[i];
    const auto& q = vertices_[j];
    if ((p.b > b) != (q.b > b) && a < (q.a - p.a) * (b - p.b) / (q.b - p.b) + p.a) inside = !inside;
  }
  if (inside) return true;
  if (margin <= 0.0) return false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    if (segment_distance(a, b, vertices_[j], vertices_[i]) <= margin) return true;
  }
  return false;
}

}  // namespace delaystab
