#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mmrank/dataset.hpp"

namespace mmrank {

// Log-scores w; item strengths are theta_i = exp(w_i).
using Params = std::vector<double>;

enum class ModelFamily { BradleyTerry, RaoKupper, LuceChoice, PlackettLuce };

std::string_view to_string(ModelFamily family);
std::optional<ModelFamily> parse_model_family(std::string_view name);

struct ModelSpec {
  ModelFamily family = ModelFamily::BradleyTerry;
  // Tie parameter of the Rao-Kupper model; ignored by the other families.
  double rk_theta = 1.0;

  static ModelSpec bradley_terry() { return {ModelFamily::BradleyTerry, 1.0}; }
  static ModelSpec rao_kupper(double theta) { return {ModelFamily::RaoKupper, theta}; }
  static ModelSpec luce_choice() { return {ModelFamily::LuceChoice, 1.0}; }
  static ModelSpec plackett_luce() { return {ModelFamily::PlackettLuce, 1.0}; }

  // Throws InvalidArgument for rk_theta < 1.
  void validate() const;
};

// Product-form Gamma(alpha, beta) prior on theta. (alpha, beta) = (1, 0)
// reduces MAP estimation to maximum likelihood.
struct GammaPrior {
  double alpha = 1.0;
  double beta = 0.0;

  static GammaPrior maximum_likelihood() { return {1.0, 0.0}; }
  // The alpha - 1 = beta convention: prior mode of each theta_i is 1.
  static GammaPrior unit_mode(double beta) { return {1.0 + beta, beta}; }

  bool is_ml() const { return alpha == 1.0 && beta == 0.0; }
  // Throws InvalidArgument unless alpha >= 1 and beta >= 0.
  void validate() const;
};

struct ObjectiveEval {
  double log_likelihood = 0.0;
  double log_prior = 0.0;
  double log_posterior = 0.0;
  std::vector<double> gradient;
};

// Outcome descriptors for outcome_probability.
struct PairOutcome {
  ItemId winner;
  ItemId loser;
};
struct TieOutcome {
  ItemId a;
  ItemId b;
};
struct ChoiceOutcome {
  ItemId winner;
  std::vector<ItemId> set;  // includes winner
};
struct RankingOutcome {
  std::vector<ItemId> order;
};
using OutcomeDescriptor = std::variant<PairOutcome, TieOutcome, ChoiceOutcome, RankingOutcome>;

// Log-posterior rho(w) = l(w) + l0(w) for one model on one dataset.
//
// Every supported likelihood is a weighted sum of Luce-type terms
//   count * (w_winner - log sum_{j in S} c_j exp(w_j))
// plus a constant: Bradley-Terry pairs (c = 1), Rao-Kupper "i at least
// ties j" events (c_i = 1, c_j = rk_theta), Luce choices, and each stage of
// a Plackett-Luce ranking. The terms are compiled once at construction.
class Objective {
 public:
  // Throws ModelMismatch when the model cannot be evaluated on the dataset
  // kind, InvalidArgument for invalid model or prior parameters.
  Objective(const ModelSpec& model, const ComparisonDataset& dataset, const GammaPrior& prior);

  std::size_t n() const { return n_; }
  const ModelSpec& model() const { return model_; }
  const GammaPrior& prior() const { return prior_; }
  const std::vector<std::string>& names() const { return names_; }

  double log_likelihood(std::span<const double> w) const;
  double log_prior(std::span<const double> w) const;
  double log_posterior(std::span<const double> w) const;
  std::vector<double> gradient(std::span<const double> w) const;
  ObjectiveEval evaluate(std::span<const double> w) const;

  // Minorant rho_(x; y) <= rho(x), with equality at x == y.
  double surrogate(std::span<const double> x, std::span<const double> y) const;

  // Closed-form maximizer of surrogate(.; w):
  //   theta_i <- (alpha - 1 + wins_i) / (beta + sum_terms count c_i / sum_S c_j theta_j)
  // Throws NonconvergentItem when an item's numerator or denominator is 0.
  Params mm_update(std::span<const double> w) const;

  // Number of terms in which each item is the winner (MM numerator without
  // the prior).
  const std::vector<double>& win_counts() const { return wins_; }

  // True when the directed "beats" graph is strongly connected, which is
  // the condition for a finite maximum-likelihood estimate to exist.
  bool ml_estimate_exists() const;

 private:
  struct Term {
    double count;
    ItemId winner;
    std::size_t begin;  // range into members_/log_weights_
    std::size_t end;
  };

  void add_term(double count, ItemId winner, std::span<const ItemId> members, std::span<const double> weights);
  double term_log_normalizer(const Term& term, std::span<const double> w) const;
  void check_size(std::span<const double> w) const;

  ModelSpec model_;
  GammaPrior prior_;
  std::size_t n_ = 0;
  std::vector<std::string> names_;
  std::vector<Term> terms_;
  std::vector<ItemId> members_;
  std::vector<double> weights_;
  std::vector<double> log_weights_;
  std::vector<double> wins_;
  double constant_ = 0.0;
};

double log_likelihood(const ModelSpec& model, const ComparisonDataset& dataset, std::span<const double> w);

// sum_i ((alpha - 1) w_i - beta exp(w_i)); normalizing constants dropped.
double prior_log_density(const GammaPrior& prior, std::span<const double> w);

std::vector<double> gradient(const ModelSpec& model, const ComparisonDataset& dataset, const GammaPrior& prior,
                             std::span<const double> w);

ObjectiveEval evaluate(const ModelSpec& model, const ComparisonDataset& dataset, const GammaPrior& prior,
                       std::span<const double> w);

double surrogate_value(const ModelSpec& model, const ComparisonDataset& dataset, const GammaPrior& prior,
                       std::span<const double> x, std::span<const double> y);

// Probability of one outcome under the model. Pair outcomes are accepted by
// every family (Luce and Plackett-Luce treat them as size-2 sets); ties only
// by Rao-Kupper; choices only by Luce; rankings only by Plackett-Luce.
double outcome_probability(const ModelSpec& model, std::span<const double> w, const OutcomeDescriptor& outcome);

}  // namespace mmrank
