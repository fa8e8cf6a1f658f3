#pragma once

#include <cstddef>
#include <map>
#include <string>

#include "mmrank/graph.hpp"
#include "mmrank/model.hpp"

namespace mmrank {

struct LaplacianSummary {
  std::size_t n = 0;
  double d_M = 0.0;       // max row sum of M
  double a_M = 0.0;       // second-smallest eigenvalue of L_M = D_M - M
  double lambda_n = 0.0;  // largest eigenvalue of L_M
  bool connected = false;
  // Unweighted diameter; for a disconnected graph, the largest finite
  // eccentricity over all components.
  std::size_t diameter = 0;
  // Max positive entry / min positive entry of M (1 when M has no edges).
  double r = 1.0;
  std::size_t max_degree = 0;
};

// Dense symmetric eigendecomposition plus BFS connectivity and diameter.
// Throws InvalidArgument for a non-square, asymmetric or negative M.
LaplacianSummary laplacian_summary(const CooccurrenceMatrix& m);

// Strong convexity gamma and smoothness mu of -rho, and the surrogate gap
// constant delta, on the box ||w||_inf <= omega. For a prior with beta > 0
// the MAP constants are returned, otherwise the ML ones.
struct ConvexityConstants {
  double gamma = 0.0;
  double mu = 0.0;
  double delta = 0.0;
  // Curvature coefficients of the likelihood: gamma_ML = curvature_low *
  // a(M), mu_ML = curvature_high * lambda_n.
  double curvature_low = 0.0;
  double curvature_high = 0.0;
};

// `k` is the comparison-set size; it must be 2 for pair models.
ConvexityConstants convexity_constants(const ModelSpec& model, const LaplacianSummary& summary,
                                       const GammaPrior& prior, double omega, std::size_t k = 2);
ConvexityConstants convexity_constants(const ModelSpec& model, const CooccurrenceMatrix& m, const GammaPrior& prior,
                                       double omega, std::size_t k = 2);

// Per-iteration improvement factors: a factor f bounds the objective gap
// contraction by 1 - f.
struct ImprovementFactors {
  double ml_gd = 0.0;
  double ml_mm = 0.0;
  double map_gd = 0.0;
  double map_mm = 0.0;
  double acc_gd = 0.0;
  double acc_mm = 0.0;
};

ImprovementFactors improvement_factors(const ConvexityConstants& constants, const LaplacianSummary& summary,
                                       const GammaPrior& prior, double omega);

// log(1 / epsilon) / -log(1 - factor); +inf for factor <= 0.
double predicted_iterations(double factor, double epsilon);

// (1/4) r max_degree diameter n log(1 / epsilon). Throws InvalidArgument
// for a disconnected summary.
double uniform_bound(const LaplacianSummary& summary, double epsilon);

struct BoundReport {
  double omega = 0.0;
  double epsilon = 0.0;
  std::size_t k = 2;
  ConvexityConstants constants;
  ImprovementFactors factors;
  std::map<std::string, double> predicted_iters;
  // Absent (NaN) for disconnected designs.
  double uniform_bound = 0.0;
};

BoundReport bound_report(const ModelSpec& model, const LaplacianSummary& summary, const GammaPrior& prior,
                         double omega, std::size_t k, double epsilon);

}  // namespace mmrank
