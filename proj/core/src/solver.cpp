#include "mmrank/solver.hpp"

#include <algorithm>
#include <cmath>

#include "mmrank/errors.hpp"
#include "mmrank/graph.hpp"
#include "mmrank/numeric.hpp"
#include "mmrank/spectral.hpp"

namespace mmrank {

std::string_view to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::MM: return "mm";
    case Algorithm::AccMM: return "acc-mm";
    case Algorithm::GD: return "gd";
    case Algorithm::AccGD: return "acc-gd";
    case Algorithm::MMUnitNorm: return "mm-unit-norm";
  }
  return "unknown";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) {
  if (name == "mm") return Algorithm::MM;
  if (name == "acc-mm") return Algorithm::AccMM;
  if (name == "gd") return Algorithm::GD;
  if (name == "acc-gd") return Algorithm::AccGD;
  if (name == "mm-unit-norm") return Algorithm::MMUnitNorm;
  return std::nullopt;
}

void SolverConfig::validate() const {
  if (!(xi > 0.0)) throw InvalidArgument("stopping tolerance xi must be > 0");
  if (eta && !(*eta > 0.0 && std::isfinite(*eta))) throw InvalidArgument("step size eta must be > 0");
  if (!(omega_hint > 0.0)) throw InvalidArgument("omega_hint must be > 0");
}

namespace {

Params guarded(Params w) {
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!std::isfinite(w[i]) || std::abs(w[i]) > kOverflowGuard) {
      throw DivergenceSuspected("score of item " + std::to_string(i) + " left the box |w| <= " +
                                std::to_string(static_cast<int>(kOverflowGuard)));
    }
  }
  return w;
}

void require_acceleration(const GammaPrior& prior) {
  if (!(prior.alpha > 1.0) || !(prior.beta > 0.0)) {
    throw AccelerationUnavailable("the rescaling step needs alpha > 1 and beta > 0");
  }
}

Params shift_to_log_mass(std::span<const double> w, double log_mass) {
  const double shift = log_mass - log_sum_exp(w);
  Params out(w.begin(), w.end());
  for (double& v : out) v += shift;
  return out;
}

Params gd_raw(const Objective& objective, std::span<const double> w, double eta) {
  if (!(eta > 0.0)) throw InvalidArgument("step size eta must be > 0");
  const auto g = objective.gradient(w);
  Params next(w.begin(), w.end());
  for (std::size_t i = 0; i < next.size(); ++i) next[i] += eta * g[i];
  return next;
}

}  // namespace

Params mm_step(const Objective& objective, std::span<const double> w) { return guarded(objective.mm_update(w)); }

Params gd_step(const Objective& objective, std::span<const double> w, double eta) {
  return guarded(gd_raw(objective, w, eta));
}

Params rescale_map(std::span<const double> w, const GammaPrior& prior) {
  require_acceleration(prior);
  const double n = static_cast<double>(w.size());
  return shift_to_log_mass(w, std::log((prior.alpha - 1.0) * n / prior.beta));
}

Params acc_mm_step(const Objective& objective, std::span<const double> w) {
  require_acceleration(objective.prior());
  return guarded(rescale_map(objective.mm_update(w), objective.prior()));
}

Params acc_gd_step(const Objective& objective, std::span<const double> w, double eta) {
  require_acceleration(objective.prior());
  return guarded(rescale_map(gd_raw(objective, w, eta), objective.prior()));
}

Params unit_norm_step(const Objective& objective, std::span<const double> w) {
  return guarded(shift_to_log_mass(objective.mm_update(w), 0.0));
}

Params mm_step(const ModelSpec& model, const ComparisonDataset& dataset, const GammaPrior& prior,
               std::span<const double> w) {
  return mm_step(Objective(model, dataset, prior), w);
}

Params gd_step(const ModelSpec& model, const ComparisonDataset& dataset, const GammaPrior& prior,
               std::span<const double> w, double eta) {
  return gd_step(Objective(model, dataset, prior), w, eta);
}

Params acc_mm_step(const ModelSpec& model, const ComparisonDataset& dataset, const GammaPrior& prior,
                   std::span<const double> w) {
  return acc_mm_step(Objective(model, dataset, prior), w);
}

Params acc_gd_step(const ModelSpec& model, const ComparisonDataset& dataset, const GammaPrior& prior,
                   std::span<const double> w, double eta) {
  return acc_gd_step(Objective(model, dataset, prior), w, eta);
}

Params unit_norm_step(const ModelSpec& model, const ComparisonDataset& dataset, const GammaPrior& prior,
                      std::span<const double> w) {
  return unit_norm_step(Objective(model, dataset, prior), w);
}

double auto_step_size(const ModelSpec& model, const ComparisonDataset& dataset, const GammaPrior& prior,
                      double omega) {
  const auto m = cooccurrence_matrix(dataset);
  double d_m = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) d_m = std::max(d_m, m.row(i).sum());
  LaplacianSummary summary;
  summary.n = dataset.n();
  summary.d_M = d_m;
  const std::size_t k = std::max<std::size_t>(2, dataset.max_set_size());
  const auto constants = convexity_constants(model, summary, prior, omega, k);
  // Gershgorin: lambda_n(L_M) <= 2 d(M).
  const double mu = constants.curvature_high * 2.0 * d_m + std::exp(omega) * prior.beta;
  if (!(mu > 0.0)) throw InvalidArgument("cannot choose a step size for a dataset without comparisons");
  return 1.0 / mu;
}

SolverResult solve(const ModelSpec& model, const ComparisonDataset& dataset, const GammaPrior& prior,
                   const SolverConfig& config, std::span<const double> w0) {
  return solve(Objective(model, dataset, prior), dataset, config, w0);
}

SolverResult solve(const Objective& objective, const ComparisonDataset& dataset, const SolverConfig& config,
                   std::span<const double> w0) {
  config.validate();
  const std::size_t n = objective.n();
  if (!w0.empty() && w0.size() != n) throw InvalidArgument("initial point has the wrong length");

  const bool accelerated = config.algorithm == Algorithm::AccMM || config.algorithm == Algorithm::AccGD;
  if (accelerated) require_acceleration(objective.prior());
  if (objective.prior().is_ml() && !objective.ml_estimate_exists()) {
    throw DivergenceSuspected(
        "no finite maximum-likelihood estimate: the graph of observed wins is not strongly connected");
  }

  SolverResult result;
  Params w = w0.empty() ? Params(n, 0.0) : Params(w0.begin(), w0.end());

  const bool gradient_based = config.algorithm == Algorithm::GD || config.algorithm == Algorithm::AccGD;
  if (gradient_based) {
    const double omega = std::max(config.omega_hint, max_abs(w));
    result.eta = config.eta ? *config.eta : auto_step_size(objective.model(), dataset, objective.prior(), omega);
    if (!config.eta) result.status_notes.push_back("automatic step size at omega = " + std::to_string(omega));
  }

  const auto step = [&](std::span<const double> x) -> Params {
    switch (config.algorithm) {
      case Algorithm::MM: return mm_step(objective, x);
      case Algorithm::AccMM: return acc_mm_step(objective, x);
      case Algorithm::GD: return gd_step(objective, x, result.eta);
      case Algorithm::AccGD: return acc_gd_step(objective, x, result.eta);
      case Algorithm::MMUnitNorm: return unit_norm_step(objective, x);
    }
    return Params(x.begin(), x.end());
  };

  if (config.record_trace) result.trace.push_back({0, objective.log_posterior(w), 0.0});

  std::size_t t = 0;
  while (t < config.max_iters) {
    ++t;
    Params next;
    try {
      next = step(w);
    } catch (NumericalError& e) {
      e.set_iteration(t);
      throw;
    }
    const double moved = max_abs_diff(next, w);
    w = std::move(next);
    if (config.record_trace) result.trace.push_back({t, objective.log_posterior(w), moved});
    if (moved <= config.xi) {
      result.converged = true;
      break;
    }
  }
  result.iterations = t;
  result.log_posterior = objective.log_posterior(w);
  result.w_hat = std::move(w);
  if (!result.converged) {
    result.status_notes.push_back("iteration limit reached before ||w(t) - w(t-1)||_inf <= xi");
  }
  return result;
}

double estimate_optimum(const Objective& objective, const ComparisonDataset& dataset, const SolverConfig& config,
                        const SolverResult& result) {
  double best = result.log_posterior;
  for (const auto& point : result.trace) best = std::max(best, point.log_posterior);

  SolverConfig extended = config;
  extended.xi = config.xi / 100.0;
  extended.max_iters = std::max<std::size_t>(10 * std::max<std::size_t>(result.iterations, 1), 100);
  extended.record_trace = true;
  if (result.eta > 0.0) extended.eta = result.eta;
  try {
    const auto longer = solve(objective, dataset, extended, result.w_hat);
    for (const auto& point : longer.trace) best = std::max(best, point.log_posterior);
  } catch (const NumericalError&) {
    // Keep the best value reached before the failure.
  }
  return best;
}

std::vector<double> trace_gaps(const std::vector<TracePoint>& trace, double optimum) {
  std::vector<double> gaps;
  gaps.reserve(trace.size());
  for (const auto& point : trace) gaps.push_back(optimum - point.log_posterior);
  return gaps;
}

TwoItemState two_item_closed_form(double m, double alpha, double beta, double s0, std::size_t t) {
  if (!(m >= 1.0)) throw InvalidArgument("two-item instance needs m >= 1 comparisons");
  if (!(alpha > 1.0)) throw InvalidArgument("two-item dynamics need alpha > 1");
  if (!(beta > 0.0)) throw InvalidArgument("two-item dynamics need beta > 0");
  if (!(s0 > 0.0)) throw InvalidArgument("initial mass s0 must be > 0");

  const double excess = alpha - 1.0;
  double s = s0;
  for (std::size_t step = 0; step < t; ++step) s = (m + 2.0 * excess) * s / (m + beta * s);
  const double s_star = 2.0 * excess / beta;
  const double a = s / s_star - 1.0;
  const double q = 1.0 + 2.0 * excess / m;
  return {s, 2.0 * excess * (a - std::log1p(a)), 1.0 / (q * q)};
}

}  // namespace mmrank
