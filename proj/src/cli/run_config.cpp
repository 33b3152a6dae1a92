#include "lastzero/cli/run_config.hpp"

#include <cmath>

#include "lastzero/errors.hpp"

namespace lastzero::cli {

std::string to_string(Command c) {
  switch (c) {
    case Command::Solve:
      return "solve";
    case Command::Curve:
      return "curve";
    case Command::Simulate:
      return "simulate";
    case Command::Verify:
      return "verify";
  }
  return "unknown";
}

Command parse_command(const std::string& s) {
  if (s == "solve") return Command::Solve;
  if (s == "curve") return Command::Curve;
  if (s == "simulate") return Command::Simulate;
  if (s == "verify") return Command::Verify;
  throw InvalidInput("unknown command '" + s + "'");
}

OutputFormat parse_format(const std::string& s) {
  if (s == "csv") return OutputFormat::Csv;
  if (s == "json") return OutputFormat::Json;
  throw InvalidInput("unknown format '" + s + "' (expected csv or json)");
}

namespace {

double require(const std::optional<double>& v, const char* name, const std::string& family) {
  if (!v) throw InvalidInput("model '" + family + "' requires --" + std::string(name));
  return *v;
}

}  // namespace

LevyModel build_model(const RunConfig& cfg) {
  const auto& f = cfg.family;
  if (f == "bm") return LevyModel::brownian(require(cfg.mu, "mu", f), require(cfg.sigma, "sigma", f));
  if (f == "cl") {
    return LevyModel::cramer_lundberg(require(cfg.mu, "mu", f), require(cfg.lambda, "lambda", f),
                                      require(cfg.rho, "rho", f));
  }
  if (f == "beta") return LevyModel::beta_family(require(cfg.beta, "beta", f));
  throw InvalidInput("unknown model '" + f + "' (expected bm, cl or beta)");
}

void validate(const RunConfig& cfg) {
  (void)build_model(cfg);
  if (!(cfg.step > 0.0 && std::isfinite(cfg.step))) throw InvalidInput("grid step must be > 0");
  if (cfg.xmin && cfg.xmax && !(*cfg.xmin < *cfg.xmax)) throw InvalidInput("xmin must be < xmax");
  if (!(cfg.tol > 0.0)) throw InvalidInput("tol must be > 0");
  if (!(cfg.quad_tol > 0.0)) throw InvalidInput("quad_tol must be > 0");
  for (double a : cfg.a_values) {
    if (!std::isfinite(a)) throw InvalidInput("threshold values must be finite");
  }
  for (double q : cfg.q_values) {
    if (!(q >= 0.0)) throw InvalidInput("q must be >= 0");
  }
  validate(cfg.mc);
}

OutputFormat effective_format(const RunConfig& cfg) {
  if (cfg.format) return *cfg.format;
  return cfg.command == Command::Curve ? OutputFormat::Csv : OutputFormat::Json;
}

nlohmann::json to_json(const RunConfig& cfg) {
  nlohmann::json j;
  j["command"] = to_string(cfg.command);
  nlohmann::json m;
  m["family"] = cfg.family;
  if (cfg.mu) m["mu"] = *cfg.mu;
  if (cfg.sigma) m["sigma"] = *cfg.sigma;
  if (cfg.lambda) m["lambda"] = *cfg.lambda;
  if (cfg.rho) m["rho"] = *cfg.rho;
  if (cfg.beta) m["beta"] = *cfg.beta;
  j["model"] = m;
  if (cfg.format) j["format"] = *cfg.format == OutputFormat::Csv ? "csv" : "json";
  if (cfg.xmin) j["xmin"] = *cfg.xmin;
  if (cfg.xmax) j["xmax"] = *cfg.xmax;
  j["step"] = cfg.step;
  j["a"] = cfg.a_values;
  j["tol"] = cfg.tol;
  j["quad_tol"] = cfg.quad_tol;
  j["mc"] = {{"paths", cfg.mc.n_paths},
             {"seed", cfg.mc.base_seed},
             {"dt", cfg.mc.dt},
             {"tail_eps", cfg.mc.tail_eps},
             {"jump_cutoff", cfg.mc.jump_cutoff}};
  j["quantity"] = cfg.quantities;
  j["x"] = cfg.x_values;
  j["q"] = cfg.q_values;
  return j;
}

RunConfig merge_json(RunConfig base, const nlohmann::json& doc) {
  if (!doc.is_object()) throw InvalidInput("config document must be a JSON object");
  const auto& j = doc.contains("config") ? doc.at("config") : doc;
  if (!j.is_object()) throw InvalidInput("config must be a JSON object");
  try {
    if (j.contains("command")) base.command = parse_command(j.at("command").get<std::string>());
    if (j.contains("model")) {
      const auto& m = j.at("model");
      if (m.contains("family")) base.family = m.at("family").get<std::string>();
      if (m.contains("mu")) base.mu = m.at("mu").get<double>();
      if (m.contains("sigma")) base.sigma = m.at("sigma").get<double>();
      if (m.contains("lambda")) base.lambda = m.at("lambda").get<double>();
      if (m.contains("rho")) base.rho = m.at("rho").get<double>();
      if (m.contains("beta")) base.beta = m.at("beta").get<double>();
    }
    if (j.contains("format")) base.format = parse_format(j.at("format").get<std::string>());
    if (j.contains("out")) base.out_path = j.at("out").get<std::string>();
    if (j.contains("xmin")) base.xmin = j.at("xmin").get<double>();
    if (j.contains("xmax")) base.xmax = j.at("xmax").get<double>();
    if (j.contains("step")) base.step = j.at("step").get<double>();
    if (j.contains("a")) base.a_values = j.at("a").get<std::vector<double>>();
    if (j.contains("tol")) base.tol = j.at("tol").get<double>();
    if (j.contains("quad_tol")) base.quad_tol = j.at("quad_tol").get<double>();
    if (j.contains("mc")) {
      const auto& mc = j.at("mc");
      if (mc.contains("paths")) {
        base.mc.n_paths = mc.at("paths").get<std::size_t>();
        base.paths_given = true;
      }
      if (mc.contains("seed")) base.mc.base_seed = mc.at("seed").get<std::uint64_t>();
      if (mc.contains("dt")) base.mc.dt = mc.at("dt").get<double>();
      if (mc.contains("tail_eps")) base.mc.tail_eps = mc.at("tail_eps").get<double>();
      if (mc.contains("jump_cutoff")) base.mc.jump_cutoff = mc.at("jump_cutoff").get<double>();
    }
    if (j.contains("quantity")) base.quantities = j.at("quantity").get<std::vector<std::string>>();
    if (j.contains("x")) base.x_values = j.at("x").get<std::vector<double>>();
    if (j.contains("q")) base.q_values = j.at("q").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("config: ") + e.what());
  }
  return base;
}

}  // namespace lastzero::cli
