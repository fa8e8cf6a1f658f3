#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mmrank/dataset.hpp"
#include "mmrank/model.hpp"

namespace mmrank {

enum class Algorithm { MM, AccMM, GD, AccGD, MMUnitNorm };

std::string_view to_string(Algorithm algorithm);
std::optional<Algorithm> parse_algorithm(std::string_view name);

// Per-coordinate overflow box; leaving it raises DivergenceSuspected.
inline constexpr double kOverflowGuard = 50.0;

struct SolverConfig {
  Algorithm algorithm = Algorithm::MM;
  // Stop at the first t with ||w(t) - w(t-1)||_inf <= xi.
  double xi = 1e-4;
  std::size_t max_iters = 100000;
  // Fixed gradient step; nullopt selects the automatic step size.
  std::optional<double> eta;
  // Lower bound on the box radius used by the automatic step size.
  double omega_hint = 1.0;
  bool record_trace = false;

  void validate() const;
};

struct TracePoint {
  std::size_t iteration;
  double log_posterior;
  // ||w(t) - w(t-1)||_inf; 0 for the initial point.
  double step_norm;
};

struct SolverResult {
  Params w_hat;
  std::size_t iterations = 0;
  bool converged = false;
  double log_posterior = 0.0;
  // Step size actually used by gradient algorithms; 0 for MM variants.
  double eta = 0.0;
  // Includes the initial point at iteration 0 when recorded.
  std::vector<TracePoint> trace;
  std::vector<std::string> status_notes;
};

// One MM iteration: the closed-form maximizer of the minorant at w.
Params mm_step(const Objective& objective, std::span<const double> w);
// Gradient ascent on rho: w + eta * grad rho(w).
Params gd_step(const Objective& objective, std::span<const double> w, double eta);

// Shifts w by c(w) = log(n (alpha - 1) / beta) - log(sum_i exp(w_i)) so the
// total mass sum_i exp(w_i) equals n (alpha - 1) / beta. Throws
// AccelerationUnavailable unless alpha > 1 and beta > 0.
Params rescale_map(std::span<const double> w, const GammaPrior& prior);

Params acc_mm_step(const Objective& objective, std::span<const double> w);
Params acc_gd_step(const Objective& objective, std::span<const double> w, double eta);

// MM step followed by a shift to unit total mass sum_i exp(w_i) = 1. Does
// not preserve monotone ascent.
Params unit_norm_step(const Objective& objective, std::span<const double> w);

// Convenience overloads taking model, dataset and prior directly.
Params mm_step(const ModelSpec& model, const ComparisonDataset& dataset, const GammaPrior& prior,
               std::span<const double> w);
Params gd_step(const ModelSpec& model, const ComparisonDataset& dataset, const GammaPrior& prior,
               std::span<const double> w, double eta);
Params acc_mm_step(const ModelSpec& model, const ComparisonDataset& dataset, const GammaPrior& prior,
                   std::span<const double> w);
Params acc_gd_step(const ModelSpec& model, const ComparisonDataset& dataset, const GammaPrior& prior,
                   std::span<const double> w, double eta);
Params unit_norm_step(const ModelSpec& model, const ComparisonDataset& dataset, const GammaPrior& prior,
                      std::span<const double> w);

// Automatic constant step 1 / mu, with mu the smoothness bound of -rho on
// the box ||w||_inf <= omega; for Bradley-Terry this is
// 2 / (d(M) + 2 beta exp(omega)).
double auto_step_size(const ModelSpec& model, const ComparisonDataset& dataset, const GammaPrior& prior,
                      double omega);

// Iterates the configured step from w0 (zeros when empty). Step errors
// propagate with the iteration index attached; running out of iterations
// is reported through converged = false. Under maximum likelihood the
// existence condition is checked first and DivergenceSuspected is raised
// when no finite estimate exists.
SolverResult solve(const ModelSpec& model, const ComparisonDataset& dataset, const GammaPrior& prior,
                   const SolverConfig& config, std::span<const double> w0 = {});
SolverResult solve(const Objective& objective, const ComparisonDataset& dataset, const SolverConfig& config,
                   std::span<const double> w0 = {});

// Long-run approximation of max rho: continues from `result` at tolerance
// xi / 100 for up to ten times the detected convergence horizon and returns
// the best log-posterior seen.
double estimate_optimum(const Objective& objective, const ComparisonDataset& dataset, const SolverConfig& config,
                        const SolverResult& result);

// Gap to the long-run optimum for each point of a recorded trace.
std::vector<double> trace_gaps(const std::vector<TracePoint>& trace, double optimum);

struct TwoItemState {
  double mass;        // s(t) = theta_1 + theta_2
  double gap;         // rho(w*) - rho(w(t))
  double limit_rate;  // (1 + 2 (alpha - 1) / m)^-2
};

// Closed-form MM dynamics for two items compared m times:
//   s(t+1) = (m + 2 (alpha - 1)) s(t) / (m + beta s(t)),
//   gap(t) = 2 (alpha - 1) (a(t) - log(1 + a(t))),  s(t) = s* (1 + a(t)),
// with s* = 2 (alpha - 1) / beta. Requires m >= 1, alpha > 1, beta > 0,
// s0 > 0.
TwoItemState two_item_closed_form(double m, double alpha, double beta, double s0, std::size_t t);

}  // namespace mmrank
