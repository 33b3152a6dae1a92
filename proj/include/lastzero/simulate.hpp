#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lastzero/scale_function.hpp"

namespace lastzero {

struct McConfig {
  std::size_t n_paths = 100000;
  std::uint64_t base_seed = 20240601;
  double dt = 1e-3;          // finest time step of the diffusion engine
  double tail_eps = 1e-8;    // P(return below 0 after the barrier) bound
  double jump_cutoff = 1e-3; // beta family: jumps smaller than this are replaced by a Gaussian
  unsigned threads = 0;      // 0 = hardware concurrency; results do not depend on it
};

/// Throws InvalidInput on non-positive n_paths/dt/jump_cutoff or tail_eps outside (0, 0.01].
void validate(const McConfig& cfg);

/// Smallest level b with F(b) >= 1 - tail_eps. Paths are simulated until they
/// first exceed b.
double barrier_level(const ScaleEvaluator& ev, double tail_eps);

/// What a single path must report.
struct PathRequest {
  double x_start = 0.0;
  std::vector<double> levels;     // thresholds a for tau_a^+
  bool need_g = true;
  bool need_infimum = false;
  bool need_G_integral = false;   // int_0^{tau_a} G(X_s) ds per level
};

struct PathEvents {
  double g = 0.0;                  // last time at or below 0 (0 if never)
  std::vector<double> tau;         // tau_a^+ per requested level
  std::vector<double> G_integral;  // per level, when requested
  double infimum_depth = 0.0;      // -min_t X_t, when requested
  std::uint64_t steps = 0;         // diffusion steps or compound-Poisson jumps
};

/// Simulates path `path_index` of the stream seeded by cfg.base_seed.
///
/// Cramer-Lundberg paths are exact: linear drift between exponential claim
/// times, so g (the last up-crossing of 0), tau_a^+ (creeping) and the
/// G-integral are closed form. Diffusion paths use Gaussian increments with
/// exactly sampled Brownian-bridge extrema, so crossings and the infimum are
/// detected exactly and event times are resolved to the step midpoint; steps
/// shrink to cfg.dt near 0 and the pending levels. The beta family with
/// beta < 2 adds claims above cfg.jump_cutoff as a compound Poisson stream and
/// a Gaussian term for the smaller ones. Throws NumericError after 1e9 steps.
PathEvents sample_path_events(const ScaleEvaluator& ev, const McConfig& cfg, const PathRequest& req,
                              std::size_t path_index);

enum class McQuantity { MeanAbsError, ExpectedG, ValueVa, InfimumSample, LaplaceG, TauPlus };

std::string to_string(McQuantity q);

struct McReport {
  double estimate;
  double std_error;
  std::size_t n_paths;
  McQuantity quantity;
  std::optional<double> a;
  std::optional<double> x;
  std::optional<double> q;
  std::uint64_t seed_used;
};

/// Mean of |g - tau_a^+| from 0.
McReport estimate_mean_abs_error(const ScaleEvaluator& ev, const McConfig& cfg, double a);
/// Same estimator for several thresholds on common paths.
std::vector<McReport> estimate_mean_abs_error_grid(const ScaleEvaluator& ev, const McConfig& cfg,
                                                   std::span<const double> as);
McReport estimate_expected_g(const ScaleEvaluator& ev, const McConfig& cfg, double x = 0.0);
McReport estimate_tau_plus(const ScaleEvaluator& ev, const McConfig& cfg, double a);
/// Mean of int_0^{tau_a^+} G(X_s) ds from x.
McReport estimate_value_va(const ScaleEvaluator& ev, const McConfig& cfg, double a, double x);
/// Mean of exp(-q g) from 0.
McReport estimate_laplace_g(const ScaleEvaluator& ev, const McConfig& cfg, double q);
/// Mean of -inf_t X_t from 0, with its standard error.
McReport estimate_infimum_mean(const ScaleEvaluator& ev, const McConfig& cfg);

/// One draw of -inf_t X_t (from 0) per path, in path order.
std::vector<double> sample_infimum(const ScaleEvaluator& ev, const McConfig& cfg);

/// Grid {0, s/10, ..., 2s} with s = a_star, or the mean of -inf X when a_star = 0.
std::vector<double> threshold_grid(const ScaleEvaluator& ev, double a_star);

}  // namespace lastzero
