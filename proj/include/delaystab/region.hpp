#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "delaystab/boundary.hpp"
#include "delaystab/closed_forms.hpp"

namespace delaystab {

/// n evenly spaced values lo + i (hi - lo)/(n - 1); n = 1 gives lo.
struct AxisRange {
  double lo = 0.0;
  double hi = 0.0;
  int n = 1;

  double at(int i) const;
  void validate() const;
};

/// Parses "lo:hi:n".
AxisRange parse_range(std::string_view text);

/// One mask of a region grid: a closed form or a generic decomposition.
struct ConditionId {
  enum class Kind { R4_6, R4_7, R4_8, C1, C2, Generic };
  Kind kind = Kind::R4_8;
  int n1 = 0;
  int n2 = 0;

  /// "4_6", "4_7", "4_8", "C1", "C2" or "generic_<n1>_<n2>".
  std::string name() const;
  /// Accepts name() output and "generic(n1,n2)".
  static ConditionId parse(std::string_view text);

  friend bool operator==(const ConditionId&, const ConditionId&) = default;
};

/// Splits a comma-separated list of condition names.
std::vector<ConditionId> parse_conditions(std::string_view csv);

struct RegionSpec {
  AxisRange a_range{-4.0, 8.0, 200};
  AxisRange b_range{-10.0, 30.0, 200};
  ScalarParams fixed;  // a and b are ignored
  std::vector<ConditionId> conditions;
  unsigned threads = 1;
};

struct RegionGrid {
  AxisRange a_range;
  AxisRange b_range;
  ScalarParams fixed;
  std::vector<ConditionId> conditions;
  std::vector<std::vector<std::uint8_t>> masks;  // masks[c][j * a_range.n + i], b index j
  std::vector<std::size_t> errors;               // per condition, cells that failed to evaluate

  bool at(std::size_t cond, int i, int j) const;
  std::size_t count(std::size_t cond) const;
};

/// Evaluates every condition at every cell. Closed forms use the fixed
/// ScalarParams with (a, b) substituted; generic cells run
/// verify_exponential_ms on the constant-coefficient equation for (a, b).
/// Cells where a precondition fails or evaluation throws are false.
RegionGrid map_region(const RegionSpec& spec);

/// Evaluates one condition at one point.
bool evaluate_condition(const ConditionId& id, const ScalarParams& pp);

/// CSV "a,b,<names>", rows b-major then a, values 0/1.
void export_region(const RegionGrid& grid, const std::filesystem::path& path);
void export_region(const RegionGrid& grid, std::ostream& os);

/// "beta,a,b" rows.
void export_boundary(const std::vector<BoundaryPoint>& curve, const std::filesystem::path& path);

/// Exact deterministic stability region of x' = -a x(t-h) - b int_{t-h}^t x:
/// bounded by the imaginary-root curve from its beta -> 0 limit
/// (2/h, -2/h^2) up to its crossing with a + bh = 0, and closed along that line.
class ExactRegion {
 public:
  ExactRegion(double h, int n_pts = 2000);

  /// Inside the polygon, or within `margin` of its edges.
  bool contains(double a, double b, double margin = 0.0) const;

  double crossing_beta() const noexcept { return beta_star_; }
  const std::vector<BoundaryPoint>& polygon() const noexcept { return vertices_; }

 private:
  double beta_star_ = 0.0;
  std::vector<BoundaryPoint> vertices_;
};

}  // namespace delaystab
