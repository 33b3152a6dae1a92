#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "lastzero/cli/run_config.hpp"

namespace lastzero::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitInvalidInput = 2;
inline constexpr int kExitNumericFailure = 3;

/// a_star, x0, psi'(0+), F(0), regime, E(g), H(a_star) plus provenance and
/// the config echo. JSON by default; CSV as key,value rows.
std::string cmd_solve(const RunConfig& cfg);

/// Columns x, F, G, H and one V_a column per threshold. Thresholds default to
/// {a*/2, a*, 3a*/2}; the grid to [-1, max(3a*, 2)] with the configured step.
std::string cmd_curve(const RunConfig& cfg);

/// One Monte Carlo report per requested (quantity, a, x, q), each with the
/// closed-form reference when one exists.
std::string cmd_simulate(const RunConfig& cfg);

struct CheckResult {
  std::string name;
  double measured;
  double threshold;
  bool passed;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool all_passed() const;
};

VerifyReport cmd_verify(const RunConfig& cfg);
std::string render(const VerifyReport& report, OutputFormat format);

/// Validates, dispatches and writes the output (to cfg.out_path or `out`).
/// Errors go to `err`; the return value is the process exit code.
int run(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace lastzero::cli
