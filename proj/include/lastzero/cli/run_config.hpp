#pragma once

#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "lastzero/levy_model.hpp"
#include "lastzero/simulate.hpp"

namespace lastzero::cli {

enum class Command { Solve, Curve, Simulate, Verify };
enum class OutputFormat { Csv, Json };

std::string to_string(Command c);
Command parse_command(const std::string& s);
OutputFormat parse_format(const std::string& s);

struct RunConfig {
  Command command = Command::Solve;
  std::string family = "bm";
  std::optional<double> mu, sigma, lambda, rho, beta;

  std::optional<std::string> out_path;
  std::optional<OutputFormat> format;  // default depends on the command

  std::optional<double> xmin, xmax;
  double step = 0.01;
  std::vector<double> a_values;  // threshold overrides

  McConfig mc;
  bool paths_given = false;
  std::vector<std::string> quantities;
  std::vector<double> x_values;
  std::vector<double> q_values;

  double tol = 1e-10;
  double quad_tol = 1e-9;
};

/// Builds the model; InvalidInput for unknown family, missing parameters or a
/// parameter set the model rejects.
LevyModel build_model(const RunConfig& cfg);

/// Checks everything that can be checked before computing (model, grid, mc
/// fields, tolerances). Throws InvalidInput.
void validate(const RunConfig& cfg);

OutputFormat effective_format(const RunConfig& cfg);

nlohmann::json to_json(const RunConfig& cfg);
/// Reads either a bare config object or a document carrying it under "config".
/// Keys absent from the document keep the values already in `base`.
RunConfig merge_json(RunConfig base, const nlohmann::json& doc);

}  // namespace lastzero::cli
