#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace delaystab {

/// Flags shared by every subcommand. Unset flags fall back to the spec file,
/// then to built-in defaults.
struct CliOptions {
  std::optional<std::string> spec;
  std::optional<std::string> out;
  std::optional<std::string> preset;
  std::optional<std::string> conditions;
  std::optional<std::string> a_range;
  std::optional<std::string> b_range;
  std::optional<std::string> beta_range;
  std::optional<double> h;
  std::optional<double> p;
  std::optional<double> c;
  std::optional<double> mu;
  std::optional<double> nu;
  std::optional<double> tau;
  std::optional<std::uint64_t> seed;
  std::optional<double> dt;
  std::optional<double> t_end;
  std::optional<int> paths;
  std::optional<double> t_max;
  std::optional<int> grid;
  std::optional<int> panels;
};

inline constexpr int kExitCertified = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitNotCertified = 2;

/// Verdict table for every decomposition; JSON report to --out when given.
/// Exit 0 if some decomposition certifies, 2 if none, 1 on input errors.
int cmd_check(const CliOptions& opt, std::ostream& out, std::ostream& err);

/// Region masks: <out>/region.csv, <out>/boundary.csv and <out>/manifest.json.
int cmd_region(const CliOptions& opt, std::ostream& out, std::ostream& err);

/// "beta,a,b" CSV to --out, or to `out` when no path is given.
int cmd_boundary(const CliOptions& opt, std::ostream& out, std::ostream& err);

/// Monte Carlo batch from --preset or --spec; path files and summary.csv go
/// to the --out directory when given.
int cmd_simulate(const CliOptions& opt, std::ostream& out, std::ostream& err);

/// Parses argv (subcommand first) and dispatches.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace delaystab
