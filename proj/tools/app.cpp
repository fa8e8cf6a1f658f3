#include "app.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <future>
#include <iostream>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mmrank/csv.hpp"
#include "mmrank/errors.hpp"
#include "mmrank/graph.hpp"
#include "mmrank/model.hpp"
#include "mmrank/numeric.hpp"
#include "mmrank/solver.hpp"
#include "mmrank/spectral.hpp"
#include "mmrank/synth.hpp"

namespace mmrank::cli {

namespace {

using json = nlohmann::ordered_json;

// Bad flags or files that are not library errors.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string input;
  std::string format;
  std::string out;
  std::string trace;
  std::string scores;
  std::string model = "bt";
  std::string algorithm = "mm";
  std::optional<double> rk_theta;
  std::optional<double> alpha;
  double beta = 0.0;
  double xi = 1e-4;
  std::size_t max_iters = 100000;
  std::string eta = "auto";
  std::uint64_t seed = 0;
  bool lcc = false;
  std::optional<double> omega;
  double epsilon = 1e-4;
  std::vector<double> betas = {0.0, 0.01, 0.1, 1.0, 10.0};
  std::vector<std::string> algorithms = {"mm", "acc-mm"};
  // synth
  std::size_t n = 10;
  std::optional<std::size_t> pairs;
  std::string graph = "complete";
  double p = 0.5;
  std::optional<std::size_t> per_edge;
  std::size_t k = 2;
  std::size_t observations = 0;
  std::string truth;
};

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc{} ? std::string(buf, end) : std::to_string(v);
}

// JSON has no inf/nan; both become null.
json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open input file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Writes to `path`, or to `fallback` when the path is empty.
void emit(const std::string& path, const std::string& text, std::ostream& fallback) {
  if (path.empty()) {
    fallback << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw UsageError("cannot write '" + path + "'");
  file << text;
}

ModelSpec model_from(const Options& o) {
  const auto family = parse_model_family(o.model);
  if (!family) throw UsageError("unknown model '" + o.model + "'");
  if (*family == ModelFamily::RaoKupper) {
    if (!o.rk_theta) throw UsageError("--rk-theta is required for the rao-kupper model");
    return ModelSpec::rao_kupper(*o.rk_theta);
  }
  if (o.rk_theta) throw UsageError("--rk-theta only applies to the rao-kupper model");
  return ModelSpec{*family, 1.0};
}

GammaPrior prior_from(const Options& o, double beta) {
  GammaPrior prior{o.alpha.value_or(1.0 + beta), beta};
  prior.validate();
  return prior;
}

Algorithm algorithm_from(const std::string& name) {
  const auto algorithm = parse_algorithm(name);
  if (!algorithm) throw UsageError("unknown algorithm '" + name + "'");
  return *algorithm;
}

SolverConfig config_from(const Options& o, Algorithm algorithm) {
  SolverConfig config;
  config.algorithm = algorithm;
  config.xi = o.xi;
  config.max_iters = o.max_iters;
  if (o.eta != "auto") {
    double eta = 0.0;
    const auto* first = o.eta.data();
    const auto* last = first + o.eta.size();
    auto [ptr, ec] = std::from_chars(first, last, eta);
    if (ec != std::errc{} || ptr != last) throw UsageError("--eta must be 'auto' or a positive number");
    config.eta = eta;
  }
  config.validate();
  return config;
}

std::string resolved_format(const Options& o, const ModelSpec& model) {
  if (!o.format.empty()) return o.format;
  switch (model.family) {
    case ModelFamily::LuceChoice: return "choice";
    case ModelFamily::PlackettLuce: return "ranking";
    default: return "pairwise";
  }
}

struct Loaded {
  ComparisonDataset dataset;
  std::size_t items_before_lcc = 0;
};

Loaded load_dataset(const Options& o, const std::string& format) {
  if (o.input.empty()) throw UsageError("--input is required");
  const auto text = read_file(o.input);
  ComparisonDataset dataset;
  if (format == "pairwise") dataset = parse_pairwise_csv(text);
  else if (format == "ranking") dataset = parse_ranking_csv(text);
  else if (format == "choice") dataset = parse_choice_csv(text);
  else throw UsageError("unknown format '" + format + "' (pairwise, ranking, choice)");
  Loaded loaded{dataset, dataset.n()};
  if (o.lcc) loaded.dataset = largest_connected_component(dataset).dataset;
  return loaded;
}

json config_json(const Options& o, const std::string& command, const ModelSpec& model, const std::string& format,
                 const GammaPrior& prior) {
  json c;
  c["input"] = o.input;
  c["format"] = format;
  c["model"] = std::string(to_string(model.family));
  if (model.family == ModelFamily::RaoKupper) c["rk_theta"] = model.rk_theta;
  if (command != "diag") {
    c["algorithm"] = o.algorithm;
    c["xi"] = o.xi;
    c["max_iters"] = o.max_iters;
    c["eta"] = o.eta;
  }
  c["alpha"] = prior.alpha;
  c["beta"] = prior.beta;
  c["seed"] = o.seed;
  c["lcc"] = o.lcc;
  c["epsilon"] = o.epsilon;
  if (o.omega) c["omega"] = *o.omega;
  return c;
}

json dataset_json(const Loaded& loaded, const LaplacianSummary& s) {
  json d;
  d["kind"] = std::string(to_string(loaded.dataset.kind()));
  d["n"] = s.n;
  d["items_in_file"] = loaded.items_before_lcc;
  d["observations"] = loaded.dataset.observation_count();
  d["max_set_size"] = loaded.dataset.max_set_size();
  d["d_M"] = s.d_M;
  d["a_M"] = s.a_M;
  d["lambda_n"] = s.lambda_n;
  d["connected"] = s.connected;
  d["diameter"] = s.diameter;
  d["r"] = s.r;
  d["max_degree"] = s.max_degree;
  return d;
}

std::size_t bound_set_size(const ModelSpec& model, const ComparisonDataset& dataset) {
  if (model.family == ModelFamily::BradleyTerry || model.family == ModelFamily::RaoKupper) return 2;
  return std::max<std::size_t>(2, dataset.max_set_size());
}

json bounds_json(const ModelSpec& model, const LaplacianSummary& summary, const GammaPrior& prior, double omega,
                 std::size_t k, double epsilon) {
  const auto r = bound_report(model, summary, prior, omega, k, epsilon);
  json b;
  b["omega"] = r.omega;
  b["epsilon"] = r.epsilon;
  b["k"] = r.k;
  b["gamma"] = r.constants.gamma;
  b["mu"] = r.constants.mu;
  b["delta"] = r.constants.delta;
  b["improvement_ml_gd"] = r.factors.ml_gd;
  b["improvement_ml_mm"] = r.factors.ml_mm;
  b["improvement_map_gd"] = r.factors.map_gd;
  b["improvement_map_mm"] = r.factors.map_mm;
  b["improvement_acc_gd"] = r.factors.acc_gd;
  b["improvement_acc_mm"] = r.factors.acc_mm;
  json predicted = json::object();
  for (const auto& [name, iters] : r.predicted_iters) predicted[name] = number_or_null(iters);
  b["predicted_iters"] = predicted;
  b["uniform_bound"] = number_or_null(r.uniform_bound);
  return b;
}

std::string trace_csv(const std::vector<TracePoint>& trace, double optimum) {
  std::string text = "iteration,log_posterior,gap_to_best\n";
  for (const auto& point : trace) {
    text += std::to_string(point.iteration) + "," + format_double(point.log_posterior) + "," +
            format_double(optimum - point.log_posterior) + "\n";
  }
  return text;
}

std::string scores_csv(const ComparisonDataset& dataset, const Params& w) {
  std::vector<std::size_t> order(w.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return w[a] > w[b]; });
  std::vector<std::size_t> rank(w.size());
  for (std::size_t r = 0; r < order.size(); ++r) rank[order[r]] = r + 1;
  std::string text = "item,w,theta,rank\n";
  for (std::size_t i = 0; i < w.size(); ++i) {
    text += dataset.name(i) + "," + format_double(w[i]) + "," + format_double(std::exp(w[i])) + "," +
            std::to_string(rank[i]) + "\n";
  }
  return text;
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

int cmd_fit(const Options& o, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  const auto model = model_from(o);
  const auto prior = prior_from(o, o.beta);
  auto config = config_from(o, algorithm_from(o.algorithm));
  config.record_trace = !o.trace.empty();
  const auto format = resolved_format(o, model);
  const auto loaded = load_dataset(o, format);
  const Objective objective(model, loaded.dataset, prior);
  const auto summary = laplacian_summary(cooccurrence_matrix(loaded.dataset));

  json report;
  report["schema_version"] = kSchemaVersion;
  report["command"] = "fit";
  report["config"] = config_json(o, "fit", model, format, prior);
  report["dataset"] = dataset_json(loaded, summary);

  int code = kExitOk;
  std::optional<SolverResult> result;
  json r;
  try {
    result = solve(objective, loaded.dataset, config);
  } catch (const AccelerationUnavailable&) {
    throw;
  } catch (const NumericalError& e) {
    code = kExitNumerical;
    r["status"] = "diverged";
    r["converged"] = false;
    r["error"] = {{"type", dynamic_cast<const NonconvergentItem*>(&e) ? "NonconvergentItem" : "DivergenceSuspected"},
                  {"message", e.what()}};
    if (e.iteration()) r["error"]["iteration"] = *e.iteration();
    err << "error: " << e.what() << "\n";
  }

  double omega = o.omega.value_or(1.0);
  if (result) {
    r["status"] = result->converged ? "converged" : "max_iters";
    r["converged"] = result->converged;
    r["iterations"] = result->iterations;
    r["log_posterior"] = result->log_posterior;
    if (result->eta > 0.0) r["eta"] = result->eta;
    const double w_norm = max_abs(result->w_hat);
    r["omega_hat"] = w_norm;
    if (!o.omega && w_norm > 0.0) omega = w_norm;
    json scores = json::array();
    for (std::size_t i = 0; i < result->w_hat.size(); ++i) {
      scores.push_back({{"item", loaded.dataset.name(i)}, {"w", result->w_hat[i]}});
    }
    r["w_hat"] = scores;
    r["notes"] = result->status_notes;
  }
  report["result"] = r;
  report["bounds"] = bounds_json(model, summary, prior, omega, bound_set_size(model, loaded.dataset), o.epsilon);

  if (result && !o.scores.empty()) emit(o.scores, scores_csv(loaded.dataset, result->w_hat), out);
  if (result && !o.trace.empty()) {
    const double best = estimate_optimum(objective, loaded.dataset, config, *result);
    emit(o.trace, trace_csv(result->trace, best), out);
  }
  report["wall_clock_ms"] = elapsed_ms(start);
  emit(o.out, report.dump(2) + "\n", out);
  return code;
}

int cmd_trace(const Options& o, std::ostream& out, std::ostream& err) {
  const auto model = model_from(o);
  const auto prior = prior_from(o, o.beta);
  auto config = config_from(o, algorithm_from(o.algorithm));
  config.record_trace = true;
  const auto loaded = load_dataset(o, resolved_format(o, model));
  const Objective objective(model, loaded.dataset, prior);
  try {
    const auto result = solve(objective, loaded.dataset, config);
    const double best = estimate_optimum(objective, loaded.dataset, config, result);
    emit(o.out.empty() ? o.trace : o.out, trace_csv(result.trace, best), out);
  } catch (const AccelerationUnavailable&) {
    throw;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitOk;
}

struct SweepCell {
  std::string algorithm;
  double beta = 0.0;
  double alpha = 1.0;
  std::string status;
  std::size_t iterations = 0;
  bool converged = false;
  double log_posterior = std::nan("");
};

SweepCell run_cell(const Options& o, const ModelSpec& model, const ComparisonDataset& dataset,
                   const std::string& algorithm_name, double beta) {
  SweepCell cell{algorithm_name, beta, o.alpha.value_or(1.0 + beta), "", 0, false, std::nan("")};
  try {
    const auto prior = prior_from(o, beta);
    const auto config = config_from(o, algorithm_from(algorithm_name));
    const auto result = solve(Objective(model, dataset, prior), dataset, config);
    cell.status = result.converged ? "converged" : "max_iters";
    cell.iterations = result.iterations;
    cell.converged = result.converged;
    cell.log_posterior = result.log_posterior;
  } catch (const AccelerationUnavailable&) {
    cell.status = "unavailable";
  } catch (const NumericalError&) {
    cell.status = "diverged";
  } catch (const Error&) {
    cell.status = "error";
  }
  return cell;
}

int cmd_sweep(const Options& o, std::ostream& out, std::ostream&) {
  const auto model = model_from(o);
  for (const auto& name : o.algorithms) algorithm_from(name);
  for (double beta : o.betas) prior_from(o, beta);
  config_from(o, Algorithm::MM);
  const auto loaded = load_dataset(o, resolved_format(o, model));
  Objective(model, loaded.dataset, prior_from(o, o.betas.empty() ? 0.0 : o.betas.front()));  // kind check

  std::vector<std::future<SweepCell>> cells;
  for (const auto& name : o.algorithms) {
    for (double beta : o.betas) {
      cells.push_back(std::async(std::launch::async, run_cell, std::cref(o), std::cref(model),
                                 std::cref(loaded.dataset), name, beta));
    }
  }
  std::string text = "algorithm,beta,alpha,status,iterations,converged,log_posterior\n";
  for (auto& future : cells) {
    const auto cell = future.get();
    const bool ran = cell.status == "converged" || cell.status == "max_iters";
    text += cell.algorithm + "," + format_double(cell.beta) + "," + format_double(cell.alpha) + "," + cell.status +
            "," + (ran ? std::to_string(cell.iterations) : "") + "," + (cell.converged ? "true" : "false") + "," +
            (ran ? format_double(cell.log_posterior) : "") + "\n";
  }
  emit(o.out, text, out);
  return kExitOk;
}

int cmd_diag(const Options& o, std::ostream& out, std::ostream&) {
  const auto start = std::chrono::steady_clock::now();
  const auto model = model_from(o);
  const auto prior = prior_from(o, o.beta);
  const auto format = resolved_format(o, model);
  const auto loaded = load_dataset(o, format);
  const auto summary = laplacian_summary(cooccurrence_matrix(loaded.dataset));

  json report;
  report["schema_version"] = kSchemaVersion;
  report["command"] = "diag";
  report["config"] = config_json(o, "diag", model, format, prior);
  report["dataset"] = dataset_json(loaded, summary);
  report["bounds"] =
      bounds_json(model, summary, prior, o.omega.value_or(1.0), bound_set_size(model, loaded.dataset), o.epsilon);
  report["wall_clock_ms"] = elapsed_ms(start);
  emit(o.out, report.dump(2) + "\n", out);
  return kExitOk;
}

Params read_truth(const std::string& path) {
  std::istringstream lines(read_file(path));
  Params w;
  std::string line;
  while (std::getline(lines, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto field = line.substr(line.find_last_of(',') == std::string::npos ? 0 : line.find_last_of(',') + 1);
    try {
      std::size_t used = 0;
      w.push_back(std::stod(field, &used));
    } catch (const std::exception&) {
      throw UsageError("bad value in truth file: '" + line + "'");
    }
  }
  return w;
}

int cmd_synth(const Options& o, std::ostream& out, std::ostream&) {
  const auto model = model_from(o);
  DesignSpec design;
  design.n = o.n;
  design.set_size = o.k;
  design.observations = o.observations;
  design.er_p = o.p;
  if (o.pairs && o.per_edge) throw UsageError("--pairs and --per-edge are mutually exclusive");
  if (o.pairs) {
    if (o.graph != "complete") throw UsageError("--pairs implies the complete graph");
    design.comparisons_per_edge = *o.pairs;
  } else {
    design.comparisons_per_edge = o.per_edge.value_or(1);
  }
  const auto family = parse_graph_family(o.graph);
  if (!family) throw UsageError("unknown graph family '" + o.graph + "'");
  design.family = *family;
  const Params w_true = o.truth.empty() ? two_level_scores(o.n, o.omega.value_or(0.5)) : read_truth(o.truth);

  const auto dataset = synthesize(design, model, w_true, o.seed);
  std::string text = "# seed," + std::to_string(o.seed) + "\n";
  for (std::size_t i = 0; i < dataset.n(); ++i) {
    text += "# w_true," + dataset.name(i) + "," + format_double(w_true[i]) + "\n";
  }
  text += serialize_csv(dataset);
  emit(o.out, text, out);
  return kExitOk;
}

void add_model_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--model", o.model, "bt, rao-kupper, luce or plackett-luce");
  cmd->add_option("--rk-theta", o.rk_theta, "Rao-Kupper tie parameter (>= 1)");
}

void add_input_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--input", o.input, "dataset file")->required();
  cmd->add_option("--format", o.format, "pairwise, ranking or choice (default follows --model)");
  cmd->add_flag("--lcc", o.lcc, "restrict to the largest connected component");
  cmd->add_option("--out", o.out, "output file (default stdout)");
  cmd->add_option("--seed", o.seed, "recorded in the report");
}

void add_prior_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--alpha", o.alpha, "Gamma shape (default 1 + beta)");
  cmd->add_option("--beta", o.beta, "Gamma rate (0 = maximum likelihood)");
}

void add_solver_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--algorithm", o.algorithm, "mm, acc-mm, gd, acc-gd or mm-unit-norm");
  cmd->add_option("--xi", o.xi, "stopping tolerance on ||w(t) - w(t-1)||_inf");
  cmd->add_option("--max-iters", o.max_iters, "iteration limit");
  cmd->add_option("--eta", o.eta, "gradient step size or 'auto'");
}

void add_bound_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--omega", o.omega, "box radius for the bounds (default ||w_hat||_inf, else 1)");
  cmd->add_option("--epsilon", o.epsilon, "target accuracy for predicted iteration counts");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"MM and accelerated MM estimation for generalized Bradley-Terry models", "mmrank"};
  app.require_subcommand(1);

  auto* fit = app.add_subcommand("fit", "fit scores and report diagnostics as JSON");
  add_model_flags(fit, o);
  add_input_flags(fit, o);
  add_prior_flags(fit, o);
  add_solver_flags(fit, o);
  add_bound_flags(fit, o);
  fit->add_option("--trace", o.trace, "write the objective trace CSV here");
  fit->add_option("--scores", o.scores, "write per-item scores CSV here");

  auto* sweep = app.add_subcommand("sweep", "iteration counts over a grid of beta and algorithms (CSV)");
  add_model_flags(sweep, o);
  add_input_flags(sweep, o);
  sweep->add_option("--alpha", o.alpha, "Gamma shape (default 1 + beta per cell)");
  sweep->add_option("--xi", o.xi, "stopping tolerance");
  sweep->add_option("--max-iters", o.max_iters, "iteration limit");
  sweep->add_option("--eta", o.eta, "gradient step size or 'auto'");
  sweep->add_option("--betas", o.betas, "comma-separated beta values")->delimiter(',');
  sweep->add_option("--algorithms", o.algorithms, "comma-separated algorithms")->delimiter(',');

  auto* trace = app.add_subcommand("trace", "objective trace CSV: iteration, log_posterior, gap_to_best");
  add_model_flags(trace, o);
  add_input_flags(trace, o);
  add_prior_flags(trace, o);
  add_solver_flags(trace, o);
  trace->add_option("--trace", o.trace, "alias for --out");

  auto* diag = app.add_subcommand("diag", "Laplacian diagnostics and convergence bounds without fitting");
  add_model_flags(diag, o);
  add_input_flags(diag, o);
  add_prior_flags(diag, o);
  add_bound_flags(diag, o);

  auto* synth = app.add_subcommand("synth", "sample a synthetic dataset");
  add_model_flags(synth, o);
  synth->add_option("--n", o.n, "number of items");
  synth->add_option("--pairs", o.pairs, "round robin: comparisons per distinct pair");
  synth->add_option("--graph", o.graph, "complete, star, path, circuit or erdos-renyi");
  synth->add_option("--p", o.p, "Erdos-Renyi edge probability");
  synth->add_option("--per-edge", o.per_edge, "comparisons per edge");
  synth->add_option("--k", o.k, "comparison-set size (choices and rankings)");
  synth->add_option("--observations", o.observations, "number of random k-subsets when k > 2");
  synth->add_option("--omega", o.omega, "true scores are -omega for the first half, +omega otherwise");
  synth->add_option("--truth", o.truth, "file with one true score per line (overrides --omega)");
  synth->add_option("--seed", o.seed, "random seed");
  synth->add_option("--out", o.out, "output file (default stdout)");

  std::vector<const char*> argv{"mmrank"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (fit->parsed()) return cmd_fit(o, out, err);
    if (sweep->parsed()) return cmd_sweep(o, out, err);
    if (trace->parsed()) return cmd_trace(o, out, err);
    if (diag->parsed()) return cmd_diag(o, out, err);
    if (synth->parsed()) return cmd_synth(o, out, err);
  } catch (const AccelerationUnavailable& e) {
    err << "error: AccelerationUnavailable: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace mmrank::cli
