#include "lastzero/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>

#include "lastzero/cli/format.hpp"
#include "lastzero/errors.hpp"
#include "lastzero/optimal_rule.hpp"
#include "lastzero/simulate.hpp"

namespace lastzero::cli {
namespace {

using nlohmann::json;

struct Solved {
  ScaleEvaluator ev;
  OptimalRule rule;
};

Solved solve_config(const RunConfig& cfg) {
  ScaleEvaluator ev(build_model(cfg));
  auto rule = solve(ev, cfg.quad_tol, cfg.tol, cfg.mc.threads);
  return {std::move(ev), std::move(rule)};
}

// Scale used in place of a_star when a_star = 0: the mean of -inf X.
double threshold_scale(const ScaleEvaluator& ev, double a_star) {
  if (a_star > 0.0) return a_star;
  const auto& p = ev.profile();
  return p.psi_double_prime0 / (2.0 * p.psi_prime0);
}

std::string optional_cell(const std::optional<double>& v) { return v ? format_number(*v) : ""; }

json optional_json(const std::optional<double>& v) { return v ? json_number(*v) : json(nullptr); }

}  // namespace

std::string cmd_solve(const RunConfig& cfg) {
  const auto [ev, rule] = solve_config(cfg);
  const auto& p = ev.profile();
  const double v0 = V_at(ev, rule, 0.0);
  const std::vector<std::pair<std::string, json>> fields = {
      {"a_star", json_number(rule.a_star)},
      {"x0", json_number(rule.x0)},
      {"psi_prime0", json_number(p.psi_prime0)},
      {"psi_double_prime0", json_number(p.psi_double_prime0)},
      {"F0", json_number(p.F0)},
      {"regime", to_string(rule.regime)},
      {"E_g", json_number(rule.expected_g)},
      {"H_at_a_star", json_number(rule.H_at_a_star)},
      {"V_at_0", json_number(v0)},
      {"V_star", json_number(v0 + rule.expected_g)},
      {"H_method", to_string(rule.table.method)},
      {"tol", cfg.tol},
      {"quad_tol", cfg.quad_tol},
      {"table_x_max", json_number(rule.table.x_max())},
      {"table_points", rule.table.grid.size()},
  };
  if (effective_format(cfg) == OutputFormat::Csv) {
    std::string s = csv_line({"key", "value"});
    s += csv_line({"model", ev.model().describe()});
    for (const auto& [k, v] : fields) {
      s += csv_line({k, v.is_string() ? v.get<std::string>() : v.is_number_float() ? format_number(v.get<double>())
                                                                                     : v.dump()});
    }
    return s;
  }
  json j;
  j["model"] = ev.model().describe();
  for (const auto& [k, v] : fields) j[k] = v;
  j["config"] = to_json(cfg);
  return j.dump(2) + "\n";
}

std::string cmd_curve(const RunConfig& cfg) {
  const auto [ev, rule] = solve_config(cfg);
  std::vector<double> as = cfg.a_values;
  if (as.empty()) {
    const double s = threshold_scale(ev, rule.a_star);
    as = rule.a_star > 0.0 ? std::vector<double>{0.5 * s, s, 1.5 * s} : std::vector<double>{0.0, 0.5 * s, 1.5 * s};
  }
  const double xmin = cfg.xmin.value_or(-1.0);
  const double xmax = cfg.xmax.value_or(std::max(3.0 * rule.a_star, 2.0));
  if (!(xmin < xmax)) throw InvalidInput("curve: xmin must be < xmax");
  const auto n = static_cast<std::size_t>(std::floor((xmax - xmin) / cfg.step + 1e-9)) + 1;
  if (n > 10'000'000) throw InvalidInput("curve: grid has too many points");
  std::vector<double> xs;
  xs.reserve(n + as.size());
  for (std::size_t i = 0; i < n; ++i) xs.push_back(xmin + static_cast<double>(i) * cfg.step);
  // thresholds inside the window get their own rows
  for (double a : as) {
    if (a >= xmin && a <= xmax) xs.push_back(a);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  std::vector<double> F, G, H;
  std::vector<std::vector<double>> V(as.size());
  for (double x : xs) {
    F.push_back(ev.F(x));
    G.push_back(ev.G(x));
    H.push_back(H_eval(ev, rule.table.method, x, rule.table.quad_tol));
  }
  for (std::size_t k = 0; k < as.size(); ++k) V[k] = value_curve(ev, rule.table, as[k], xs).V;

  if (effective_format(cfg) == OutputFormat::Json) {
    json j;
    j["model"] = ev.model().describe();
    j["a_star"] = json_number(rule.a_star);
    json ja = json::array();
    for (double a : as) ja.push_back(json_number(a));
    j["thresholds"] = ja;
    auto col = [](const std::vector<double>& v) {
      json c = json::array();
      for (double d : v) c.push_back(json_number(d));
      return c;
    };
    j["x"] = col(xs);
    j["F"] = col(F);
    j["G"] = col(G);
    j["H"] = col(H);
    json jv = json::array();
    for (const auto& v : V) jv.push_back(col(v));
    j["V"] = jv;
    j["config"] = to_json(cfg);
    return j.dump(2) + "\n";
  }
  std::vector<std::string> header = {"x", "F", "G", "H"};
  for (double a : as) header.push_back("V_a=" + format_number(a));
  std::string s = csv_line(header);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    std::vector<std::string> row = {format_number(xs[i]), format_number(F[i]), format_number(G[i]),
                                    format_number(H[i])};
    for (const auto& v : V) row.push_back(format_number(v[i]));
    s += csv_line(row);
  }
  return s;
}

std::string cmd_simulate(const RunConfig& cfg) {
  const auto [ev, rule] = solve_config(cfg);
  const auto& model = ev.model();
  const auto& p = ev.profile();
  const auto quantities = cfg.quantities.empty() ? std::vector<std::string>{"mean_abs_error"} : cfg.quantities;
  const std::vector<double> a_default = cfg.a_values.empty() ? std::vector<double>{rule.a_star} : cfg.a_values;
  const std::vector<double> xs = cfg.x_values.empty() ? std::vector<double>{0.0} : cfg.x_values;
  const std::vector<double> qs = cfg.q_values.empty() ? std::vector<double>{1.0} : cfg.q_values;

  struct Row {
    McReport report;
    std::optional<double> reference;
  };
  std::vector<Row> rows;
  for (const auto& name : quantities) {
    if (name == "mean_abs_error") {
      const auto as = cfg.a_values.empty() ? threshold_grid(ev, rule.a_star) : cfg.a_values;
      const auto reports = estimate_mean_abs_error_grid(ev, cfg.mc, as);
      for (const auto& r : reports) rows.push_back({r, mean_abs_error(ev, rule.table, *r.a)});
    } else if (name == "expected_g") {
      for (double x : xs) {
        std::optional<double> ref;
        try {
          ref = expected_g(model, x);
        } catch (const UnsupportedModel&) {
        }
        rows.push_back({estimate_expected_g(ev, cfg.mc, x), ref});
      }
    } else if (name == "value_va") {
      for (double a : a_default) {
        for (double x : xs) rows.push_back({estimate_value_va(ev, cfg.mc, a, x), V_a_at(ev, rule.table, a, x)});
      }
    } else if (name == "infimum") {
      rows.push_back({estimate_infimum_mean(ev, cfg.mc), p.psi_double_prime0 / (2.0 * p.psi_prime0)});
    } else if (name == "laplace_g") {
      for (double q : qs) {
        std::optional<double> ref;
        if (model.as<BrownianDrift>() != nullptr) ref = laplace_g(model, q, 0.0);
        rows.push_back({estimate_laplace_g(ev, cfg.mc, q), ref});
      }
    } else if (name == "tau_plus") {
      for (double a : a_default) rows.push_back({estimate_tau_plus(ev, cfg.mc, a), expected_tau_plus(model, a)});
    } else {
      throw InvalidInput("unknown quantity '" + name +
                         "' (expected mean_abs_error, expected_g, value_va, infimum, laplace_g or tau_plus)");
    }
  }

  if (effective_format(cfg) == OutputFormat::Csv) {
    std::string s = csv_line({"quantity", "a", "x", "q", "estimate", "std_error", "n_paths", "seed", "reference"});
    for (const auto& [r, ref] : rows) {
      s += csv_line({to_string(r.quantity), optional_cell(r.a), optional_cell(r.x), optional_cell(r.q),
                     format_number(r.estimate), format_number(r.std_error), std::to_string(r.n_paths),
                     std::to_string(r.seed_used), optional_cell(ref)});
    }
    return s;
  }
  json j;
  j["model"] = model.describe();
  j["a_star"] = json_number(rule.a_star);
  j["barrier"] = json_number(barrier_level(ev, cfg.mc.tail_eps));
  json reports = json::array();
  for (const auto& [r, ref] : rows) {
    reports.push_back({{"quantity", to_string(r.quantity)},
                       {"a", optional_json(r.a)},
                       {"x", optional_json(r.x)},
                       {"q", optional_json(r.q)},
                       {"estimate", json_number(r.estimate)},
                       {"std_error", json_number(r.std_error)},
                       {"n_paths", r.n_paths},
                       {"seed", r.seed_used},
                       {"reference", optional_json(ref)}});
  }
  j["reports"] = reports;
  j["config"] = to_json(cfg);
  return j.dump(2) + "\n";
}

bool VerifyReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

VerifyReport cmd_verify(const RunConfig& cfg) {
  const auto [ev, rule] = solve_config(cfg);
  const auto& model = ev.model();
  const auto& p = ev.profile();
  VerifyReport rep;
  auto check_le = [&](std::string name, double measured, double threshold) {
    rep.checks.push_back({std::move(name), measured, threshold, measured <= threshold});
  };

  // Laplace exponent
  {
    const double h = 1e-4;
    const double fd1 = (-3.0 * psi(model, 0.0) + 4.0 * psi(model, h) - psi(model, 2.0 * h)) / (2.0 * h);
    check_le("psi'(0+) vs finite difference", std::abs(fd1 - p.psi_prime0), 1e-6 * std::max(1.0, p.psi_prime0));
    const double fd2 =
        (-3.0 * psi_prime(model, 0.0) + 4.0 * psi_prime(model, h) - psi_prime(model, 2.0 * h)) / (2.0 * h);
    check_le("psi''(0+) vs finite difference", std::abs(fd2 - p.psi_double_prime0),
             1e-6 * std::max(1.0, p.psi_double_prime0));
    double worst = 0.0;
    for (double th : {0.1, 1.0, 5.0}) worst = std::max(worst, std::abs(phi(model, psi(model, th)) - th));
    check_le("Phi inverts psi", worst, 1e-9);
  }

  // distribution functions
  const double b = barrier_level(ev, cfg.mc.tail_eps);
  {
    double h_above_f = -1.0, h_drop = 0.0, f_drop = 0.0;
    double f_prev = 0.0, h_prev = 0.0;
    const double span = std::max(b, 4.0 * rule.a_star);
    for (int i = 0; i <= 200; ++i) {
      const double x = span * i / 200.0;
      const double f = ev.F(x);
      const double hv = H_eval(ev, rule.table.method, x, rule.table.quad_tol);
      h_above_f = std::max(h_above_f, hv - f);
      if (i > 0) {
        f_drop = std::max(f_drop, f_prev - f);
        h_drop = std::max(h_drop, h_prev - hv);
      }
      f_prev = f;
      h_prev = hv;
    }
    check_le("F nondecreasing (max drop)", f_drop, 0.0);
    check_le("H nondecreasing (max drop)", h_drop, 1e-9);
    check_le("H <= F (max excess)", h_above_f, 1e-9);
    check_le("(1 - tail_eps) - F(barrier)", (1.0 - cfg.mc.tail_eps) - ev.F(b), 0.0);
    if (rule.table.method != HMethod::NumericQuadrature) {
      double worst = 0.0;
      for (int i = 0; i <= 40; ++i) {
        const double x = 0.25 * i;
        worst = std::max(worst, std::abs(H_numeric(ev, x, cfg.quad_tol) - H_analytic(model, x)));
      }
      check_le("H quadrature vs closed form on [0,10]", worst, 1e-8);
    }
  }

  // optimal rule
  const double a = rule.a_star;
  check_le("x0 - a_star", rule.x0 - a, 1e-10);
  if (rule.regime == FitRegime::SmoothFit) {
    check_le("|H(a_star) - 1/2|", std::abs(rule.H_at_a_star - 0.5), 1e-8);
    check_le("smooth fit |V'(a_star-)|", std::abs(V_prime_at(ev, rule, a)), 1e-6);
  } else {
    check_le("1/2 - F(0)^2", 0.5 - p.F0 * p.F0, 0.0);
    check_le("|V'(0-) - 1/psi'(0+)|", std::abs(V_prime_at(ev, rule, -1e-300) - 1.0 / p.psi_prime0), 1e-12);
  }
  {
    double worst = -1e300;
    const double lo = cfg.xmin.value_or(-1.0);
    for (int i = 0; i <= 100; ++i) worst = std::max(worst, V_at(ev, rule, lo + (a - lo) * i / 100.0));
    check_le("max V on [xmin, a_star]", worst, 1e-12);
    const double s = threshold_scale(ev, a);
    const double v0 = V_at(ev, rule, 0.0);
    double gap = 1e300;
    for (double other : {a + 0.5 * s, std::max(0.0, a - 0.5 * s)}) {
      if (other != a) gap = std::min(gap, V_a_at(ev, rule.table, other, 0.0) - v0);
    }
    check_le("V(0) - min over perturbed thresholds of V_a(0)", -gap, 0.0);
  }
  if (const auto* bm = model.as<BrownianDrift>()) {
    check_le("|Laplace transform of g at q=0 - 1|", std::abs(laplace_g_brownian(bm->mu, bm->sigma, 0.0, 0.0) - 1.0),
             1e-12);
    const double h = 1e-5;
    const double d = (-3.0 * laplace_g_brownian(bm->mu, bm->sigma, 0.0, 0.0) +
                      4.0 * laplace_g_brownian(bm->mu, bm->sigma, h, 0.0) -
                      laplace_g_brownian(bm->mu, bm->sigma, 2.0 * h, 0.0)) /
                     (2.0 * h);
    check_le("|d/dq Laplace(g)(0) + E(g)|", std::abs(d + rule.expected_g), 1e-4);
  }

  // Monte Carlo
  McConfig mc = cfg.mc;
  const auto* bf = model.as<BetaFamily>();
  const bool approx_beta = bf != nullptr && bf->beta != 2.0;
  if (!cfg.paths_given) mc.n_paths = approx_beta ? 400 : 20000;
  const double k = approx_beta ? 5.0 : 3.0;
  {
    const auto r = estimate_mean_abs_error(ev, mc, a);
    const double ref = mean_abs_error(ev, rule.table, a);
    check_le("MC E|g - tau_a*| vs V(0) + E(g) (in std errors)", std::abs(r.estimate - ref) / r.std_error, k);
    const auto g = estimate_expected_g(ev, mc, 0.0);
    check_le("MC E(g) vs closed form (in std errors)", std::abs(g.estimate - rule.expected_g) / g.std_error, k);
    const auto inf = estimate_infimum_mean(ev, mc);
    const double inf_ref = p.psi_double_prime0 / (2.0 * p.psi_prime0);
    check_le("MC E(-inf X) vs psi''/(2 psi') (in std errors)", std::abs(inf.estimate - inf_ref) / inf.std_error, k);
    if (model.as<CramerLundberg>() == nullptr) {
      McConfig half = mc;
      half.dt = 0.5 * mc.dt;
      const auto r2 = estimate_mean_abs_error(ev, half, a);
      const double combined = std::hypot(r.std_error, r2.std_error);
      check_le("dt halving changes E|g - tau_a*| (in combined std errors)", std::abs(r.estimate - r2.estimate) / combined,
               2.0);
    }
  }
  return rep;
}

std::string render(const VerifyReport& report, OutputFormat format) {
  if (format == OutputFormat::Json) {
    json arr = json::array();
    for (const auto& c : report.checks) {
      arr.push_back({{"check", c.name},
                     {"measured", json_number(c.measured)},
                     {"threshold", json_number(c.threshold)},
                     {"passed", c.passed}});
    }
    return json{{"checks", arr}, {"passed", report.all_passed()}}.dump(2) + "\n";
  }
  std::string s;
  std::size_t ok = 0;
  for (const auto& c : report.checks) {
    ok += c.passed ? 1 : 0;
    s += std::string(c.passed ? "PASS " : "FAIL ") + c.name + ": measured " + format_number(c.measured) +
         ", threshold " + format_number(c.threshold) + "\n";
  }
  s += "verify: " + std::to_string(ok) + "/" + std::to_string(report.checks.size()) + " checks passed\n";
  return s;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    validate(cfg);
    std::string text;
    int code = kExitOk;
    switch (cfg.command) {
      case Command::Solve:
        text = cmd_solve(cfg);
        break;
      case Command::Curve:
        text = cmd_curve(cfg);
        break;
      case Command::Simulate:
        text = cmd_simulate(cfg);
        break;
      case Command::Verify: {
        const auto rep = cmd_verify(cfg);
        text = render(rep, cfg.format.value_or(OutputFormat::Csv));
        if (!rep.all_passed()) code = kExitVerifyFailed;
        break;
      }
    }
    if (cfg.out_path) {
      std::ofstream f(*cfg.out_path, std::ios::binary);
      if (!f) {
        err << "error: cannot open " << *cfg.out_path << " for writing\n";
        return kExitInvalidInput;
      }
      f << text;
    } else {
      out << text;
    }
    return code;
  } catch (const InvalidInput& e) {
    err << "invalid input: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const DomainError& e) {
    err << "invalid input: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const UnsupportedModel& e) {
    err << "unsupported: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << "\n";
    return kExitNumericFailure;
  }
}

}  // namespace lastzero::cli
