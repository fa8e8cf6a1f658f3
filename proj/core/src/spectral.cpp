#include "mmrank/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include <Eigen/Eigenvalues>

#include "mmrank/errors.hpp"

namespace mmrank {

namespace {

void check_cooccurrence(const CooccurrenceMatrix& m) {
  if (m.rows() != m.cols()) throw InvalidArgument("co-occurrence matrix must be square");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (m(i, i) != 0.0) throw InvalidArgument("co-occurrence matrix must have a zero diagonal");
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (m(i, j) < 0.0 || !std::isfinite(m(i, j))) {
        throw InvalidArgument("co-occurrence matrix must be finite and nonnegative");
      }
      if (std::abs(m(i, j) - m(j, i)) > 1e-12 * scale) {
        throw InvalidArgument("co-occurrence matrix must be symmetric");
      }
    }
  }
}

// Largest finite BFS eccentricity over all vertices.
std::size_t unweighted_diameter(const std::vector<std::vector<std::size_t>>& adjacency) {
  const std::size_t n = adjacency.size();
  constexpr auto unseen = std::numeric_limits<std::size_t>::max();
  std::size_t diameter = 0;
  std::vector<std::size_t> dist(n);
  for (std::size_t source = 0; source < n; ++source) {
    std::fill(dist.begin(), dist.end(), unseen);
    std::queue<std::size_t> frontier;
    dist[source] = 0;
    frontier.push(source);
    while (!frontier.empty()) {
      const auto u = frontier.front();
      frontier.pop();
      diameter = std::max(diameter, dist[u]);
      for (auto v : adjacency[u]) {
        if (dist[v] == unseen) {
          dist[v] = dist[u] + 1;
          frontier.push(v);
        }
      }
    }
  }
  return diameter;
}

}  // namespace

LaplacianSummary laplacian_summary(const CooccurrenceMatrix& m) {
  check_cooccurrence(m);
  LaplacianSummary summary;
  const auto n = static_cast<std::size_t>(m.rows());
  summary.n = n;
  if (n == 0) return summary;

  const Eigen::VectorXd degree = m.rowwise().sum();
  summary.d_M = degree.maxCoeff();

  std::vector<std::vector<std::size_t>> adjacency(n);
  double largest = 0.0;
  double smallest = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double v = m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (v > 0.0) {
        adjacency[i].push_back(j);
        largest = std::max(largest, v);
        smallest = std::min(smallest, v);
      }
    }
    summary.max_degree = std::max(summary.max_degree, adjacency[i].size());
  }
  summary.r = largest > 0.0 ? largest / smallest : 1.0;
  summary.diameter = unweighted_diameter(adjacency);
  summary.connected = is_connected(m);

  if (n == 1) return summary;

  const Eigen::MatrixXd laplacian = Eigen::MatrixXd(degree.asDiagonal()) - m;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(laplacian, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw InvalidArgument("Laplacian eigendecomposition failed");
  const auto& eigenvalues = solver.eigenvalues();  // ascending
  summary.a_M = std::max(0.0, eigenvalues(1));
  summary.lambda_n = eigenvalues(eigenvalues.size() - 1);
  return summary;
}

ConvexityConstants convexity_constants(const ModelSpec& model, const LaplacianSummary& summary,
                                       const GammaPrior& prior, double omega, std::size_t k) {
  model.validate();
  prior.validate();
  if (!(omega >= 0.0) || !std::isfinite(omega)) throw InvalidArgument("omega must be finite and >= 0");
  if (k < 2) throw InvalidArgument("comparison-set size k must be >= 2");

  const double e_pos = std::exp(omega);
  const double e_neg = std::exp(-omega);
  const double d = summary.d_M;
  const double kk = static_cast<double>(k);
  ConvexityConstants c;

  switch (model.family) {
    case ModelFamily::BradleyTerry:
      if (k != 2) throw InvalidArgument("Bradley-Terry comparisons have k = 2");
      c.curvature_low = 1.0 / ((e_neg + e_pos) * (e_neg + e_pos));
      c.curvature_high = 0.25;
      c.delta = 0.5 * e_pos * e_pos * d;
      break;
    case ModelFamily::RaoKupper: {
      if (k != 2) throw InvalidArgument("Rao-Kupper comparisons have k = 2");
      const double theta = model.rk_theta;
      c.curvature_low = theta / ((theta * e_neg + e_pos) * (theta * e_neg + e_pos));
      c.curvature_high = 0.5;
      c.delta = e_pos * e_pos * d;
      break;
    }
    case ModelFamily::LuceChoice: {
      if (k == 2) {
        c.curvature_low = 1.0 / ((e_neg + e_pos) * (e_neg + e_pos));
      } else {
        const double denom = (kk - 2.0) * e_pos * e_pos + 2.0;
        c.curvature_low = 1.0 / (denom * denom);
      }
      const double denom = (kk - 2.0) * e_neg * e_neg + 2.0;
      c.curvature_high = 1.0 / (denom * denom);
      c.delta = e_pos * e_pos * d / (kk * (kk - 1.0));
      break;
    }
    case ModelFamily::PlackettLuce:
      c.curvature_low = std::exp(-4.0 * omega) / (kk * kk);
      c.curvature_high = (2.0 - 1.0 / kk) * std::exp(4.0 * omega);
      c.delta = 0.5 * e_pos * e_pos * d;
      break;
  }

  if (prior.beta > 0.0) {
    c.gamma = e_neg * prior.beta;
    c.mu = c.curvature_high * summary.lambda_n + e_pos * prior.beta;
  } else {
    c.gamma = c.curvature_low * summary.a_M;
    c.mu = c.curvature_high * summary.lambda_n;
  }
  return c;
}

ConvexityConstants convexity_constants(const ModelSpec& model, const CooccurrenceMatrix& m, const GammaPrior& prior,
                                       double omega, std::size_t k) {
  return convexity_constants(model, laplacian_summary(m), prior, omega, k);
}

ImprovementFactors improvement_factors(const ConvexityConstants& constants, const LaplacianSummary& summary,
                                       const GammaPrior& prior, double omega) {
  const auto ratio = [](double num, double den) { return den > 0.0 ? std::clamp(num / den, 0.0, 1.0) : 0.0; };
  // Smoothness expressed through d(M) via lambda_n <= 2 d(M).
  const double smooth = constants.curvature_high * 2.0 * summary.d_M;
  const double ml_curvature = constants.curvature_low * summary.a_M;
  const double prior_curvature = std::exp(-omega) * prior.beta;
  const double prior_smooth = std::exp(omega) * prior.beta;

  ImprovementFactors f;
  f.ml_gd = ratio(ml_curvature, smooth);
  f.ml_mm = ratio(ml_curvature, smooth + constants.delta);
  f.map_gd = ratio(prior_curvature, smooth + prior_smooth);
  f.map_mm = ratio(prior_curvature, smooth + constants.delta + prior_smooth);
  f.acc_gd = ratio(ml_curvature + prior_curvature, smooth + prior_smooth);
  f.acc_mm = ratio(ml_curvature + prior_curvature, smooth + constants.delta + prior_smooth);
  return f;
}

double predicted_iterations(double factor, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidArgument("epsilon must lie in (0, 1)");
  if (!(factor > 0.0)) return std::numeric_limits<double>::infinity();
  if (factor >= 1.0) return 0.0;
  return std::log(1.0 / epsilon) / -std::log1p(-factor);
}

double uniform_bound(const LaplacianSummary& summary, double epsilon) {
  if (!summary.connected || summary.n < 2) throw InvalidArgument("uniform bound needs a connected design");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidArgument("epsilon must lie in (0, 1)");
  return 0.25 * summary.r * static_cast<double>(summary.max_degree) * static_cast<double>(summary.diameter) *
         static_cast<double>(summary.n) * std::log(1.0 / epsilon);
}

BoundReport bound_report(const ModelSpec& model, const LaplacianSummary& summary, const GammaPrior& prior,
                         double omega, std::size_t k, double epsilon) {
  BoundReport report;
  report.omega = omega;
  report.epsilon = epsilon;
  report.k = k;
  report.constants = convexity_constants(model, summary, prior, omega, k);
  report.factors = improvement_factors(report.constants, summary, prior, omega);
  const auto& f = report.factors;
  report.predicted_iters = {
      {"ml_gd", predicted_iterations(f.ml_gd, epsilon)},   {"ml_mm", predicted_iterations(f.ml_mm, epsilon)},
      {"map_gd", predicted_iterations(f.map_gd, epsilon)}, {"map_mm", predicted_iterations(f.map_mm, epsilon)},
      {"acc_gd", predicted_iterations(f.acc_gd, epsilon)}, {"acc_mm", predicted_iterations(f.acc_mm, epsilon)},
  };
  report.uniform_bound = (summary.connected && summary.n >= 2) ? uniform_bound(summary, epsilon)
                                                               : std::numeric_limits<double>::quiet_NaN();
  return report;
}

}  // namespace mmrank
