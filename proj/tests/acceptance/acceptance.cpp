// Acceptance gate: one PASS/FAIL line per criterion. Exit status is nonzero
// if any criterion fails. Set MMRANK_NASCAR to a NASCAR ranking file to run
// the optional full-data tier.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mmrank/csv.hpp"
#include "mmrank/errors.hpp"
#include "mmrank/graph.hpp"
#include "mmrank/model.hpp"
#include "mmrank/numeric.hpp"
#include "mmrank/solver.hpp"
#include "mmrank/spectral.hpp"
#include "mmrank/synth.hpp"
#include "oracles.hpp"

using namespace mmrank;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void report(const char* id, const char* title, const std::function<Outcome()>& body, double budget_s) {
  const auto start = std::chrono::steady_clock::now();
  Outcome out{false, ""};
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (budget_s > 0 && seconds > budget_s) {
    out.pass = false;
    out.detail += " (over the " + std::to_string(static_cast<int>(budget_s)) + " s budget)";
  }
  if (!out.pass) ++failures;
  std::printf("[%s] %s %s: %s [%.2f s]\n", out.pass ? "PASS" : "FAIL", id, title, out.detail.c_str(), seconds);
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double mass(const Params& w) {
  double s = 0.0;
  for (double v : w) s += std::exp(v);
  return s;
}

// n = 10, every distinct pair compared 10 times, scores -1/2 and +1/2.
ComparisonDataset round_robin_instance() {
  DesignSpec design;
  design.n = 10;
  design.comparisons_per_edge = 10;
  return synthesize(design, ModelSpec::bradley_terry(), two_level_scores(10, 0.5), 7);
}

ComparisonDataset ranking_corpus() {
  DesignSpec design;
  design.n = 30;
  design.set_size = 5;
  design.observations = 200;
  return synthesize(design, ModelSpec::plackett_luce(), two_level_scores(30, 0.5), 11);
}

std::size_t iterations(const ModelSpec& model, const ComparisonDataset& d, const GammaPrior& prior, Algorithm a,
                       double xi = 1e-4) {
  SolverConfig config;
  config.algorithm = a;
  config.xi = xi;
  const auto r = solve(model, d, prior, config);
  if (!r.converged) throw std::runtime_error("did not converge");
  return r.iterations;
}

// 1. Two-item instance: the gap ratio tends to (1 + 2(alpha-1)/m)^-2.
Outcome two_item_rate() {
  double worst_rate = 0.0, worst_mass = 0.0;
  for (Count m : {10, 100}) {
    for (double excess : {0.1, 0.5}) {
      for (double beta : {0.1, 1.0}) {
        const double alpha = 1.0 + excess;
        DatasetBuilder b(DatasetKind::PairWins);
        b.add_items({"a", "b"});
        b.add_win(0, 1, m / 2);
        b.add_win(1, 0, m / 2);
        const auto d = std::move(b).build();
        const Objective objective(ModelSpec::bradley_terry(), d, GammaPrior{alpha, beta});
        const double s_star = 2 * excess / beta;
        const double rho_star = objective.log_posterior(Params{std::log(s_star / 2), std::log(s_star / 2)});
        // Start at half the stationary mass; w0 = 0 would already sit on it
        // whenever alpha - 1 = beta.
        const double s0 = s_star / 2;
        Params w{std::log(s0 / 2), std::log(s0 / 2)};
        std::vector<double> gaps{rho_star - objective.log_posterior(w)};
        for (std::size_t t = 1; t <= 200000; ++t) {
          const auto next = mm_step(objective, w);
          const double moved = max_abs_diff(next, w);
          w = next;
          const auto closed = two_item_closed_form(static_cast<double>(m), alpha, beta, s0, t);
          worst_mass = std::max(worst_mass, std::abs(closed.mass - mass(w)));
          gaps.push_back(rho_star - objective.log_posterior(w));
          if (moved <= 1e-4) break;
        }
        const double limit = two_item_closed_form(static_cast<double>(m), alpha, beta, s0, 0).limit_rate;
        // Final 20 iterations before the stopping iteration.
        const std::size_t end = gaps.size() - 1;
        if (end < 21) return {false, "converged too quickly to measure a rate"};
        for (std::size_t t = end - 20; t < end; ++t) {
          worst_rate = std::max(worst_rate, std::abs(gaps[t + 1] / gaps[t] - limit));
        }
      }
    }
  }
  const bool pass = worst_rate <= 1e-3 && worst_mass <= 1e-10;
  return {pass, "max |ratio - limit| = " + fmt("%.2e", worst_rate) + ", max mass error = " + fmt("%.2e", worst_mass)};
}

// 2. MM and acc-MM never decrease the log-posterior.
Outcome monotone_ascent() {
  std::mt19937_64 rng(2024);
  const ModelSpec models[] = {ModelSpec::bradley_terry(), ModelSpec::rao_kupper(1.5), ModelSpec::luce_choice(),
                              ModelSpec::plackett_luce()};
  const double betas[] = {0.0, 0.1, 1.0};
  std::uniform_int_distribution<std::size_t> size(2, 20);
  double worst = 0.0;
  std::size_t runs = 0, steps = 0;
  for (int inst = 0; inst < 200; ++inst) {
    const auto& model = models[inst % 4];
    const double beta = betas[(inst / 4) % 3];
    const std::size_t n = size(rng);
    const auto d = oracle::random_dataset(model, n, rng, 3 * n, 5);
    const GammaPrior prior{1.0 + beta, beta};
    for (auto algorithm : {Algorithm::MM, Algorithm::AccMM}) {
      if (algorithm == Algorithm::AccMM && beta == 0.0) continue;
      SolverConfig config;
      config.algorithm = algorithm;
      config.record_trace = true;
      config.max_iters = 5000;
      const auto r = solve(model, d, prior, config);
      ++runs;
      for (std::size_t t = 1; t < r.trace.size(); ++t) {
        worst = std::max(worst, r.trace[t - 1].log_posterior - r.trace[t].log_posterior);
        ++steps;
      }
    }
  }
  return {worst <= 1e-10, std::to_string(runs) + " runs, " + std::to_string(steps) +
                              " steps, largest decrease = " + fmt("%.2e", std::max(worst, 0.0))};
}

// 3. Iterations of standard MM fall as beta grows.
Outcome beta_trend() {
  const auto d = round_robin_instance();
  std::vector<std::size_t> counts;
  for (double beta : {0.001, 0.01, 0.1, 1.0}) {
    counts.push_back(iterations(ModelSpec::bradley_terry(), d, GammaPrior{2.0, beta}, Algorithm::MM));
  }
  bool decreasing = true;
  for (std::size_t i = 1; i < counts.size(); ++i) decreasing = decreasing && counts[i] < counts[i - 1];
  std::string detail = "mm iterations (alpha = 2) at beta 0.001, 0.01, 0.1, 1:";
  for (auto c : counts) detail += " " + std::to_string(c);
  return {decreasing, detail};
}

// 4. Acceleration never needs more iterations, and halves them at beta = 0.01.
Outcome acceleration() {
  struct Case {
    const char* name;
    ModelSpec model;
    ComparisonDataset data;
  };
  const Case cases[] = {{"round robin", ModelSpec::bradley_terry(), round_robin_instance()},
                        {"rankings", ModelSpec::plackett_luce(), ranking_corpus()}};
  bool pass = true;
  std::string detail;
  for (const auto& c : cases) {
    detail += std::string(detail.empty() ? "" : "; ") + c.name + " mm/acc-mm:";
    for (double beta : {0.01, 0.1, 1.0, 10.0}) {
      const GammaPrior prior{2.0, beta};
      const auto mm = iterations(c.model, c.data, prior, Algorithm::MM);
      const auto acc = iterations(c.model, c.data, prior, Algorithm::AccMM);
      pass = pass && acc <= mm;
      if (beta == 0.01) pass = pass && 2 * acc < mm;
      detail += " " + std::to_string(mm) + "/" + std::to_string(acc);
    }
  }
  return {pass, detail + " (alpha = 2; beta 0.01, 0.1, 1, 10)"};
}

// Optional: published NASCAR iteration counts.
void nascar_tier() {
  const char* path = std::getenv("MMRANK_NASCAR");
  if (!path || !*path) {
    std::printf("[SKIP] 4b NASCAR table rows: set MMRANK_NASCAR to a ranking CSV to run\n");
    return;
  }
  report("4b", "NASCAR table rows", [&]() -> Outcome {
    std::ifstream in(path);
    if (!in) return {false, std::string("cannot read ") + path};
    std::stringstream text;
    text << in.rdbuf();
    const auto d = parse_ranking_csv(text.str());
    struct Row {
      double xi;
      std::size_t mm[5];
      std::size_t acc[5];
    };
    // beta = 0, 0.01, 0.1, 1, 10; acc-mm has no beta = 0 entry.
    const Row rows[] = {{1e-4, {11, 695, 971, 58, 10}, {0, 11, 11, 10, 6}},
                        {1e-5, {14, 1528, 2069, 105, 16}, {0, 14, 14, 12, 7}},
                        {1e-6, {17, 2362, 3223, 157, 23}, {0, 17, 16, 14, 8}},
                        {1e-8, {22, 4029, 5544, 261, 36}, {0, 22, 21, 18, 11}}};
    const double betas[] = {0.0, 0.01, 0.1, 1.0, 10.0};
    bool pass = true;
    std::string detail;
    for (const auto& row : rows) {
      for (int b = 0; b < 5; ++b) {
        const GammaPrior prior{1.0 + betas[b], betas[b]};
        const auto mm = iterations(ModelSpec::plackett_luce(), d, prior, Algorithm::MM, row.xi);
        const bool ok = std::abs(static_cast<double>(mm) - static_cast<double>(row.mm[b])) <= 2;
        pass = pass && ok;
        if (!ok) detail += " mm(xi=" + fmt("%g", row.xi) + ",beta=" + fmt("%g", betas[b]) + ")=" + std::to_string(mm);
        if (b == 0) continue;
        const auto acc = iterations(ModelSpec::plackett_luce(), d, prior, Algorithm::AccMM, row.xi);
        const bool ok_acc = std::abs(static_cast<double>(acc) - static_cast<double>(row.acc[b])) <= 2;
        pass = pass && ok_acc;
        if (!ok_acc) detail += " acc(xi=" + fmt("%g", row.xi) + ",beta=" + fmt("%g", betas[b]) + ")=" + std::to_string(acc);
      }
    }
    return {pass, pass ? "all 36 cells within +-2 iterations" : "mismatches:" + detail};
  }, 0);
}

// 5. Observed MM contraction never beats the predicted factor.
Outcome bound_validity() {
  std::mt19937_64 rng(55);
  std::uniform_real_distribution<double> score(-1.0, 1.0);
  std::uniform_int_distribution<std::size_t> size(4, 12);
  double worst_margin = -1.0;  // max of observed ratio - (1 - factor)
  std::size_t checked = 0, instances = 0;
  int attempts = 0;
  while (instances < 50 && attempts < 500) {
    ++attempts;
    DesignSpec design;
    design.n = size(rng);
    design.family = GraphFamily::ErdosRenyi;
    design.er_p = 0.6;
    design.comparisons_per_edge = 3;
    Params w_true(design.n);
    for (double& v : w_true) v = score(rng);
    const auto d = synthesize(design, ModelSpec::bradley_terry(), w_true, rng());
    const auto summary = laplacian_summary(cooccurrence_matrix(d));
    if (!summary.connected) continue;
    const bool map = instances % 2 == 1;
    const GammaPrior prior = map ? GammaPrior{2.0, 1.0} : GammaPrior::maximum_likelihood();
    const Objective objective(ModelSpec::bradley_terry(), d, prior);
    if (!map && !objective.ml_estimate_exists()) continue;

    // Optimum from a long accelerated (MAP) or plain (ML) run.
    SolverConfig precise;
    precise.xi = 1e-13;
    precise.max_iters = 200000;
    precise.algorithm = map ? Algorithm::AccMM : Algorithm::MM;
    const auto best = solve(objective, d, precise);
    const double rho_star = best.log_posterior;

    SolverConfig config;
    config.record_trace = true;
    config.xi = 1e-9;
    config.max_iters = 100000;
    std::vector<Params> path{Params(design.n, 0.0)};
    Params w = path.front();
    for (std::size_t t = 0; t < config.max_iters; ++t) {
      auto next = mm_step(objective, w);
      const double moved = max_abs_diff(next, w);
      w = std::move(next);
      path.push_back(w);
      if (moved <= config.xi) break;
    }
    double omega = max_abs(best.w_hat);
    for (const auto& p : path) omega = std::max(omega, max_abs(p));
    const auto constants = convexity_constants(ModelSpec::bradley_terry(), summary, prior, omega);
    const auto factors = improvement_factors(constants, summary, prior, omega);
    const double factor = map ? factors.map_mm : factors.ml_mm;
    const double floor = 1e-9 * std::max(1.0, std::abs(rho_star));
    for (std::size_t t = 0; t + 1 < path.size(); ++t) {
      const double g0 = rho_star - objective.log_posterior(path[t]);
      const double g1 = rho_star - objective.log_posterior(path[t + 1]);
      if (g0 <= floor || g1 <= floor) break;
      worst_margin = std::max(worst_margin, g1 / g0 - (1.0 - factor));
      ++checked;
    }
    ++instances;
  }
  const bool pass = instances == 50 && worst_margin <= 1e-6;
  return {pass, std::to_string(instances) + " instances (ML and MAP alternating), " + std::to_string(checked) +
                    " iterations, max(observed ratio - (1 - factor)) = " + fmt("%.3e", worst_margin)};
}

// 6. Rescaling invariants.
Outcome rescale_invariants() {
  std::mt19937_64 rng(66);
  double worst_mass = 0.0, worst_sum = 0.0, worst_drop = 0.0;
  const ModelSpec models[] = {ModelSpec::bradley_terry(), ModelSpec::rao_kupper(1.5), ModelSpec::luce_choice(),
                              ModelSpec::plackett_luce()};
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int inst = 0; inst < 40; ++inst) {
    const auto& model = models[inst % 4];
    const std::size_t n = 3 + inst % 10;
    const auto d = oracle::random_dataset(model, n, rng, 4 * n, 5);
    const double beta = 0.01 + 5.0 * unit(rng);
    const GammaPrior prior{1.0 + beta * (0.5 + unit(rng)), beta};
    const Objective objective(model, d, prior);
    const double target = n * (prior.alpha - 1.0) / prior.beta;
    Params w(n, 0.0);
    Params v(n, 0.0);
    const double eta = auto_step_size(model, d, prior, 1.0);
    for (int t = 0; t < 200; ++t) {
      w = acc_mm_step(objective, w);
      v = acc_gd_step(objective, v, eta);
      for (const auto* x : {&w, &v}) {
        worst_mass = std::max(worst_mass, std::abs(mass(*x) - target) / target);
        const auto g = objective.gradient(*x);
        worst_sum = std::max(worst_sum, std::abs(std::accumulate(g.begin(), g.end(), 0.0)));
      }
    }
  }
  for (int rep = 0; rep < 10000; ++rep) {
    const auto& model = models[rep % 4];
    const std::size_t n = 2 + rep % 9;
    if (rep % 100 == 0) rng.seed(rep);
    const auto d = oracle::random_dataset(model, n, rng, 2 * n, 4);
    const double beta = 0.01 + 3.0 * unit(rng);
    const GammaPrior prior{1.0 + 2.0 * unit(rng) + 1e-3, beta};
    const Objective objective(model, d, prior);
    const auto w = oracle::uniform_vector(rng, n, -4, 4);
    const double before = objective.log_posterior(w);
    const double after = objective.log_posterior(rescale_map(w, prior));
    worst_drop = std::max(worst_drop, (before - after) / std::max(1.0, std::abs(before)));
  }
  const bool pass = worst_mass <= 1e-9 && worst_sum <= 1e-8 && worst_drop <= 1e-13;
  return {pass, "max relative mass error = " + fmt("%.2e", worst_mass) + ", max |sum grad| = " + fmt("%.2e", worst_sum) +
                    ", max relative drop over 10^4 rescales = " + fmt("%.2e", std::max(worst_drop, 0.0))};
}

// 7. Spectral exactness, including every graph on at most 8 vertices.
using Edges = std::vector<std::pair<int, int>>;

CooccurrenceMatrix from_mask(int n, std::uint32_t mask) {
  CooccurrenceMatrix m = CooccurrenceMatrix::Zero(n, n);
  int bit = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j, ++bit)
      if (mask >> bit & 1u) m(i, j) = m(j, i) = 1.0;
  return m;
}

// Smallest edge mask over all vertex relabelings.
std::uint32_t canonical(int n, std::uint32_t mask) {
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
  int bit = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j, ++bit)
      if (mask >> bit & 1u) adj[i][j] = adj[j][i] = true;
  std::uint32_t best = ~0u;
  do {
    std::uint32_t m = 0;
    int b = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j, ++b)
        if (adj[perm[i]][perm[j]]) m |= 1u << b;
    best = std::min(best, m);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// Adds vertex n with neighbour set `subset` to an n-vertex mask.
std::uint32_t extend(int n, std::uint32_t mask, std::uint32_t subset) {
  std::uint32_t out = 0;
  int old_bit = 0, new_bit = 0;
  for (int i = 0; i < n + 1; ++i) {
    for (int j = i + 1; j < n + 1; ++j, ++new_bit) {
      if (j == n) {
        if (subset >> i & 1u) out |= 1u << new_bit;
      } else {
        if (mask >> old_bit & 1u) out |= 1u << new_bit;
        ++old_bit;
      }
    }
  }
  return out;
}

Outcome spectral_exactness() {
  double worst_complete = 0.0, worst_star = 0.0;
  for (int n = 2; n <= 50; ++n) {
    CooccurrenceMatrix k = CooccurrenceMatrix::Ones(n, n) - CooccurrenceMatrix::Identity(n, n);
    const auto s = laplacian_summary(k);
    worst_complete = std::max({worst_complete, std::abs(s.a_M - n), std::abs(s.d_M - (n - 1))});
    if (n >= 3) {
      CooccurrenceMatrix star = CooccurrenceMatrix::Zero(n, n);
      for (int j = 1; j < n; ++j) star(0, j) = star(j, 0) = 1;
      worst_star = std::max(worst_star, std::abs(laplacian_summary(star).a_M - 1.0));
    }
  }

  // Isomorphism classes for n <= 7 by canonical dedup; every 8-vertex
  // graph is some 7-vertex class plus one vertex.
  std::vector<std::vector<std::uint32_t>> classes(8);
  classes[1] = {0};
  for (int n = 1; n < 7; ++n) {
    std::set<std::uint32_t> next;
    for (auto g : classes[n])
      for (std::uint32_t s = 0; s < (1u << n); ++s) next.insert(canonical(n + 1, extend(n, g, s)));
    classes[n + 1].assign(next.begin(), next.end());
  }
  const std::size_t expected[] = {0, 1, 2, 4, 11, 34, 156, 1044};
  for (int n = 1; n <= 7; ++n) {
    if (classes[n].size() != expected[n]) {
      return {false, "graph enumeration found " + std::to_string(classes[n].size()) + " classes on " +
                         std::to_string(n) + " vertices"};
    }
  }
  double worst_brute = 0.0;
  std::size_t graphs = 0, bad_connectivity = 0;
  const auto check = [&](int n, std::uint32_t mask) {
    const auto m = from_mask(n, mask);
    const auto s = laplacian_summary(m);
    oracle::Matrix rows(n, std::vector<double>(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) rows[i][j] = m(i, j);
    const auto eig = oracle::jacobi_eigenvalues(oracle::laplacian(rows));
    worst_brute = std::max({worst_brute, std::abs(s.a_M - std::max(0.0, eig[1])), std::abs(s.lambda_n - eig.back())});
    if (s.connected != (s.a_M > 1e-9)) ++bad_connectivity;
    ++graphs;
  };
  for (int n = 2; n <= 7; ++n)
    for (auto g : classes[n]) check(n, g);
  for (auto g : classes[7])
    for (std::uint32_t s = 0; s < (1u << 7); ++s) check(8, extend(7, g, s));

  const bool pass = worst_complete <= 1e-9 && worst_star <= 1e-9 && worst_brute <= 1e-9 && bad_connectivity == 0;
  return {pass, "K_n error " + fmt("%.1e", worst_complete) + ", star error " + fmt("%.1e", worst_star) + ", " +
                    std::to_string(graphs) + " graphs (all classes n <= 8) vs Jacobi max error " +
                    fmt("%.1e", worst_brute) + ", connectivity mismatches " + std::to_string(bad_connectivity)};
}

// 8. Gradients against central finite differences.
Outcome gradient_check() {
  std::mt19937_64 rng(88);
  const ModelSpec models[] = {ModelSpec::bradley_terry(), ModelSpec::rao_kupper(1.8), ModelSpec::luce_choice(),
                              ModelSpec::plackett_luce()};
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  for (const auto& model : models) {
    for (int rep = 0; rep < 100; ++rep) {
      const std::size_t n = 2 + rep % 10;
      const auto d = oracle::random_dataset(model, n, rng, 3 * n, 5);
      const double beta = rep % 3 == 0 ? 0.0 : 2.0 * unit(rng);
      const GammaPrior prior{beta == 0.0 ? 1.0 : 1.0 + 2.0 * unit(rng), beta};
      const auto w = oracle::uniform_vector(rng, n, -2, 2);
      const auto g = gradient(model, d, prior, w);
      const auto fd = oracle::finite_difference_gradient(
          [&](const std::vector<double>& x) { return oracle::log_posterior(model, prior, d, x); }, w);
      double err = 0.0, scale = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        err = std::max(err, std::abs(g[i] - fd[i]));
        scale = std::max(scale, std::abs(fd[i]));
      }
      worst = std::max(worst, err / std::max(scale, 1.0));
    }
  }
  return {worst <= 1e-5, "400 triples, max relative error = " + fmt("%.2e", worst)};
}

// 9. Unit-mass normalization can decrease the objective; acc-MM cannot.
Outcome unit_norm_counterexample() {
  // Sparse, many-item design in the spirit of crowdsourced image comparisons.
  DesignSpec design;
  design.n = 60;
  design.family = GraphFamily::ErdosRenyi;
  design.er_p = 0.1;
  design.comparisons_per_edge = 2;
  std::mt19937_64 rng(9);
  Params w_true(design.n);
  std::uniform_real_distribution<double> score(-1.5, 1.5);
  for (double& v : w_true) v = score(rng);
  const auto d = synthesize(design, ModelSpec::bradley_terry(), w_true, 99);
  for (double beta : {1.0, 10.0}) {
    const GammaPrior prior{1.0 + beta, beta};
    SolverConfig config;
    config.record_trace = true;
    config.max_iters = 2000;
    config.algorithm = Algorithm::MMUnitNorm;
    const auto unit = solve(ModelSpec::bradley_terry(), d, prior, config);
    config.algorithm = Algorithm::AccMM;
    const auto acc = solve(ModelSpec::bradley_terry(), d, prior, config);
    std::size_t drops = 0, first = 0;
    double biggest = 0.0;
    for (std::size_t t = 1; t < unit.trace.size(); ++t) {
      const double drop = unit.trace[t - 1].log_posterior - unit.trace[t].log_posterior;
      if (drop > 1e-10) {
        if (drops++ == 0) first = t;
        biggest = std::max(biggest, drop);
      }
    }
    double acc_drop = 0.0;
    for (std::size_t t = 1; t < acc.trace.size(); ++t) {
      acc_drop = std::max(acc_drop, acc.trace[t - 1].log_posterior - acc.trace[t].log_posterior);
    }
    if (drops > 0 && acc_drop <= 1e-10) {
      return {true, "beta = " + fmt("%g", beta) + ": mm-unit-norm decreases rho at " + std::to_string(drops) +
                        " iterations (first t = " + std::to_string(first) + ", largest drop " + fmt("%.3g", biggest) +
                        "); acc-mm monotone over " + std::to_string(acc.iterations) + " iterations"};
    }
  }
  return {false, "no decrease found"};
}

// 10. The MM gap decays log-linearly.
Outcome linear_convergence() {
  const auto d = round_robin_instance();
  bool pass = true;
  std::string detail;
  for (double beta : {0.1, 1.0}) {
    const Objective objective(ModelSpec::bradley_terry(), d, GammaPrior{2.0, beta});
    SolverConfig config;
    config.record_trace = true;
    const auto r = solve(objective, d, config);
    const double best = estimate_optimum(objective, d, config, r);
    const auto gaps = trace_gaps(r.trace, best);
    const double floor = 1e-11 * std::max(1.0, std::abs(best));
    // Tail: second half of the run, above the rounding floor.
    std::vector<double> xs, ys;
    for (std::size_t t = gaps.size() / 2; t < gaps.size(); ++t) {
      if (gaps[t] <= floor) break;
      xs.push_back(static_cast<double>(t));
      ys.push_back(std::log(gaps[t]));
    }
    double r2 = 0.0;
    if (xs.size() >= 5) {
      const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
      const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / ys.size();
      double sxy = 0, sxx = 0, syy = 0;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
        syy += (ys[i] - my) * (ys[i] - my);
      }
      r2 = syy > 0 ? sxy * sxy / (sxx * syy) : 0.0;
    }
    pass = pass && r2 >= 0.99;
    detail += (detail.empty() ? "" : ", ") + std::string("beta ") + fmt("%g", beta) + ": R^2 = " + fmt("%.5f", r2) +
              " over " + std::to_string(xs.size()) + " points";
  }
  return {pass, detail + " (mm, alpha = 2)"};
}

}  // namespace

int main() {
  report("1", "two-item rate oracle", two_item_rate, 1);
  report("2", "MM monotone ascent", monotone_ascent, 30);
  report("3", "beta trend", beta_trend, 10);
  report("4", "acceleration", acceleration, 0);
  nascar_tier();
  report("5", "bound validity", bound_validity, 60);
  report("6", "rescaling invariants", rescale_invariants, 0);
  report("7", "spectral exactness", spectral_exactness, 0);
  report("8", "gradient correctness", gradient_check, 0);
  report("9", "non-monotone counterexample", unit_norm_counterexample, 0);
  report("10", "linear-convergence trace", linear_convergence, 0);
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
