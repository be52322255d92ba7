#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "delaystab/equation.hpp"
#include "delaystab/simulator.hpp"
#include "delaystab/stability.hpp"

namespace delaystab {

/// Malformed spec file; line and column are 1-based, 0 when unknown.
class SpecFileError : public std::runtime_error {
 public:
  SpecFileError(const std::string& what, int line = 0, int column = 0);
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

struct ScanOverrides {
  std::optional<double> t_max;
  std::optional<int> grid;
  std::optional<int> refine;
  std::optional<int> panels;

  /// Fields set here win over `cfg`.
  void apply(AnalysisConfig& cfg) const;
  /// Fields set in `other` win.
  void merge(const ScanOverrides& other);
};

struct SimOverrides {
  std::optional<double> dt;
  std::optional<double> t_end;
  std::optional<int> paths;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> init;
  std::optional<double> conv_eps;
  std::optional<double> conv_window;

  void apply(SimParams& sim) const;
  void merge(const SimOverrides& other);
};

/// YAML document:
///
///     equation:
///       n: 1                      # optional, must match delays
///       delays: [0.5]             # h_1..h_n
///       a: [0, -2]                # a_0..a_n, numbers or expressions in t
///       b: [9]                    # b_1..b_n
///       sigma: sqrt(1.1)
///       tau: 0
///       nonlinearity:
///         - {c: 1, delay: 0.5, alpha: 2}
///     scan: {t_max: 50, grid: 2001, refine: 32}
///     quad: {panels: 64}
///     simulation: {dt: 0.001, t_end: 30, paths: 50, seed: 1, init: 0.6*cos(t),
///                  conv_eps: 0.01, conv_window: 0.1}
///
/// Unknown keys are rejected.
struct SpecFile {
  EquationSpec equation;
  ScanOverrides scan;
  SimOverrides simulation;
};

SpecFile parse_spec_text(std::string_view text);
SpecFile load_spec_file(const std::filesystem::path& path);

}  // namespace delaystab
