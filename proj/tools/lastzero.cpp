// lastzero: solve / curve / simulate / verify for the last-zero prediction problem.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>

#include "lastzero/cli/commands.hpp"
#include "lastzero/errors.hpp"

namespace {

using lastzero::cli::RunConfig;

struct Flags {
  std::optional<std::string> config_path;
  std::optional<std::string> model;
  std::optional<double> mu, sigma, lambda, rho, beta;
  std::vector<double> a;
  std::optional<double> xmin, xmax, step;
  std::optional<std::size_t> paths;
  std::optional<std::uint64_t> seed;
  std::optional<double> dt, tail_eps, jump_cutoff, tol, quad_tol;
  std::optional<unsigned> threads;
  std::optional<std::string> format, out;
  std::vector<std::string> quantity;
  std::vector<double> x, q;
};

void add_options(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config_path, "JSON config file; flags override its values");
  app->add_option("--model", f.model, "process family: bm | cl | beta");
  app->add_option("--mu", f.mu, "drift (bm) or premium rate (cl)");
  app->add_option("--sigma", f.sigma, "volatility (bm)");
  app->add_option("--lambda", f.lambda, "claim arrival rate (cl)");
  app->add_option("--rho", f.rho, "exponential claim-size rate (cl)");
  app->add_option("--beta", f.beta, "beta-family index in (1, 2]");
  app->add_option("--a", f.a, "threshold(s); repeatable");
  app->add_option("--xmin", f.xmin, "curve grid start (default -1)");
  app->add_option("--xmax", f.xmax, "curve grid end (default max(3 a*, 2))");
  app->add_option("--step", f.step, "curve grid step (default 0.01)");
  app->add_option("--paths", f.paths, "Monte Carlo paths");
  app->add_option("--seed", f.seed, "Monte Carlo base seed");
  app->add_option("--dt", f.dt, "finest diffusion time step");
  app->add_option("--tail-eps", f.tail_eps, "return probability allowed above the barrier");
  app->add_option("--jump-cutoff", f.jump_cutoff, "beta family: small-jump cutoff");
  app->add_option("--threads", f.threads, "worker threads (0 = all cores; output does not depend on it)");
  app->add_option("--tol", f.tol, "a* tolerance");
  app->add_option("--quad-tol", f.quad_tol, "quadrature tolerance");
  app->add_option("--format", f.format, "csv | json");
  app->add_option("--out", f.out, "output file (default stdout)");
  app->add_option("--quantity", f.quantity,
                  "simulate: mean_abs_error | expected_g | value_va | infimum | laplace_g | tau_plus; repeatable");
  app->add_option("--x", f.x, "starting point(s) for expected_g / value_va");
  app->add_option("--q", f.q, "Laplace argument(s) for laplace_g");
}

RunConfig assemble(const std::string& command, const Flags& f) {
  RunConfig cfg;
  if (f.config_path) {
    std::ifstream in(*f.config_path);
    if (!in) throw lastzero::InvalidInput("cannot read config file " + *f.config_path);
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw lastzero::InvalidInput(std::string("config file: ") + e.what());
    }
    cfg = lastzero::cli::merge_json(cfg, doc);
  }
  cfg.command = lastzero::cli::parse_command(command);
  if (f.model) cfg.family = *f.model;
  if (f.mu) cfg.mu = f.mu;
  if (f.sigma) cfg.sigma = f.sigma;
  if (f.lambda) cfg.lambda = f.lambda;
  if (f.rho) cfg.rho = f.rho;
  if (f.beta) cfg.beta = f.beta;
  if (!f.a.empty()) cfg.a_values = f.a;
  if (f.xmin) cfg.xmin = f.xmin;
  if (f.xmax) cfg.xmax = f.xmax;
  if (f.step) cfg.step = *f.step;
  if (f.paths) {
    cfg.mc.n_paths = *f.paths;
    cfg.paths_given = true;
  }
  if (f.seed) cfg.mc.base_seed = *f.seed;
  if (f.dt) cfg.mc.dt = *f.dt;
  if (f.tail_eps) cfg.mc.tail_eps = *f.tail_eps;
  if (f.jump_cutoff) cfg.mc.jump_cutoff = *f.jump_cutoff;
  if (f.threads) cfg.mc.threads = *f.threads;
  if (f.tol) cfg.tol = *f.tol;
  if (f.quad_tol) cfg.quad_tol = *f.quad_tol;
  if (f.format) cfg.format = lastzero::cli::parse_format(*f.format);
  if (f.out) cfg.out_path = f.out;
  if (!f.quantity.empty()) cfg.quantities = f.quantity;
  if (!f.x.empty()) cfg.x_values = f.x;
  if (!f.q.empty()) cfg.q_values = f.q;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal prediction of the last zero of a spectrally negative Levy process"};
  app.require_subcommand(1);
  Flags flags;
  for (const char* name : {"solve", "curve", "simulate", "verify"}) {
    auto* sub = app.add_subcommand(name);
    add_options(sub, flags);
  }
  app.get_subcommand("solve")->description("optimal threshold a* and summary quantities (JSON)");
  app.get_subcommand("curve")->description("F, G, H and V_a on a grid (CSV)");
  app.get_subcommand("simulate")->description("Monte Carlo estimates with standard errors (JSON)");
  app.get_subcommand("verify")->description("run the invariant suite; exit 1 on any failure");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return lastzero::cli::kExitInvalidInput;
  }

  try {
    const auto cfg = assemble(app.get_subcommands().front()->get_name(), flags);
    return lastzero::cli::run(cfg, std::cout, std::cerr);
  } catch (const lastzero::InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return lastzero::cli::kExitInvalidInput;
  }
}
