#include "mmrank/model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>

#include "mmrank/errors.hpp"
#include "mmrank/numeric.hpp"

namespace mmrank {

std::string_view to_string(ModelFamily family) {
  switch (family) {
    case ModelFamily::BradleyTerry: return "bt";
    case ModelFamily::RaoKupper: return "rao-kupper";
    case ModelFamily::LuceChoice: return "luce";
    case ModelFamily::PlackettLuce: return "plackett-luce";
  }
  return "unknown";
}

std::optional<ModelFamily> parse_model_family(std::string_view name) {
  if (name == "bt") return ModelFamily::BradleyTerry;
  if (name == "rao-kupper") return ModelFamily::RaoKupper;
  if (name == "luce") return ModelFamily::LuceChoice;
  if (name == "plackett-luce") return ModelFamily::PlackettLuce;
  return std::nullopt;
}

void ModelSpec::validate() const {
  if (family == ModelFamily::RaoKupper && !(rk_theta >= 1.0 && std::isfinite(rk_theta))) {
    throw InvalidArgument("rk_theta must be >= 1");
  }
}

void GammaPrior::validate() const {
  if (!(alpha >= 1.0) || !std::isfinite(alpha)) throw InvalidArgument("prior shape alpha must be >= 1");
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw InvalidArgument("prior rate beta must be >= 0");
}

Objective::Objective(const ModelSpec& model, const ComparisonDataset& dataset, const GammaPrior& prior)
    : model_(model), prior_(prior), n_(dataset.n()), names_(dataset.names()), wins_(dataset.n(), 0.0) {
  model.validate();
  prior.validate();

  const bool pairwise = dataset.kind() == DatasetKind::PairWins || dataset.kind() == DatasetKind::PairWinsTies;
  const bool has_ties = !dataset.tie_counts().empty();
  const auto mismatch = [&]() {
    return ModelMismatch("model '" + std::string(to_string(model.family)) + "' cannot be fitted to " +
                         std::string(to_string(dataset.kind())) + " data");
  };

  switch (model.family) {
    case ModelFamily::BradleyTerry:
      if (!pairwise || has_ties) throw mismatch();
      break;
    case ModelFamily::RaoKupper:
      if (!pairwise) throw mismatch();
      if (has_ties && model.rk_theta == 1.0) {
        throw InvalidArgument("tie outcomes have zero probability under Rao-Kupper with rk_theta = 1");
      }
      break;
    case ModelFamily::LuceChoice:
      if (!(dataset.kind() == DatasetKind::Choices || (pairwise && !has_ties))) throw mismatch();
      break;
    case ModelFamily::PlackettLuce:
      if (!(dataset.kind() == DatasetKind::Rankings || (pairwise && !has_ties))) throw mismatch();
      break;
  }

  const double opponent_weight = model.family == ModelFamily::RaoKupper ? model.rk_theta : 1.0;
  if (model.family == ModelFamily::RaoKupper) {
    // "i at least ties j" events: d-bar_{i,j} = d_{i,j} + t_{i,j}.
    std::map<std::pair<ItemId, ItemId>, Count> at_least(dataset.pair_wins());
    for (const auto& [key, c] : dataset.tie_counts()) {
      at_least[key] += c;
      at_least[{key.second, key.first}] += c;
      constant_ += static_cast<double>(c) * std::log(model.rk_theta * model.rk_theta - 1.0);
    }
    for (const auto& [key, c] : at_least) {
      const std::array<ItemId, 2> members{key.first, key.second};
      const std::array<double, 2> weights{1.0, opponent_weight};
      add_term(static_cast<double>(c), key.first, members, weights);
    }
  } else {
    for (const auto& [key, c] : dataset.pair_wins()) {
      const std::array<ItemId, 2> members{key.first, key.second};
      const std::array<double, 2> weights{1.0, 1.0};
      add_term(static_cast<double>(c), key.first, members, weights);
    }
  }

  for (const auto& obs : dataset.choices()) {
    const std::vector<double> weights(obs.set.size(), 1.0);
    add_term(static_cast<double>(obs.count), obs.winner, obs.set, weights);
  }
  for (const auto& obs : dataset.rankings()) {
    const std::vector<double> weights(obs.order.size(), 1.0);
    const std::span<const ItemId> order(obs.order);
    for (std::size_t r = 0; r + 1 < order.size(); ++r) {
      add_term(static_cast<double>(obs.count), order[r], order.subspan(r),
               std::span<const double>(weights).subspan(r));
    }
  }
}

void Objective::add_term(double count, ItemId winner, std::span<const ItemId> members,
                         std::span<const double> weights) {
  Term term{count, winner, members_.size(), members_.size() + members.size()};
  for (std::size_t k = 0; k < members.size(); ++k) {
    members_.push_back(members[k]);
    weights_.push_back(weights[k]);
    log_weights_.push_back(std::log(weights[k]));
  }
  wins_[winner] += count;
  terms_.push_back(term);
}

void Objective::check_size(std::span<const double> w) const {
  if (w.size() != n_) {
    throw InvalidArgument("parameter vector has length " + std::to_string(w.size()) + ", expected " +
                          std::to_string(n_));
  }
}

double Objective::term_log_normalizer(const Term& term, std::span<const double> w) const {
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t k = term.begin; k < term.end; ++k) top = std::max(top, w[members_[k]] + log_weights_[k]);
  double acc = 0.0;
  for (std::size_t k = term.begin; k < term.end; ++k) acc += std::exp(w[members_[k]] + log_weights_[k] - top);
  return top + std::log(acc);
}

double Objective::log_likelihood(std::span<const double> w) const {
  check_size(w);
  CompensatedSum total;
  total += constant_;
  for (const auto& term : terms_) total += term.count * (w[term.winner] - term_log_normalizer(term, w));
  return total.value();
}

double Objective::log_prior(std::span<const double> w) const {
  check_size(w);
  return prior_log_density(prior_, w);
}

double Objective::log_posterior(std::span<const double> w) const { return log_likelihood(w) + log_prior(w); }

std::vector<double> Objective::gradient(std::span<const double> w) const {
  check_size(w);
  std::vector<double> g(n_, 0.0);
  for (const auto& term : terms_) {
    const double log_z = term_log_normalizer(term, w);
    g[term.winner] += term.count;
    for (std::size_t k = term.begin; k < term.end; ++k) {
      g[members_[k]] -= term.count * std::exp(w[members_[k]] + log_weights_[k] - log_z);
    }
  }
  for (std::size_t i = 0; i < n_; ++i) g[i] += (prior_.alpha - 1.0) - prior_.beta * std::exp(w[i]);
  return g;
}

ObjectiveEval Objective::evaluate(std::span<const double> w) const {
  ObjectiveEval eval;
  eval.log_likelihood = log_likelihood(w);
  eval.log_prior = log_prior(w);
  eval.log_posterior = eval.log_likelihood + eval.log_prior;
  eval.gradient = gradient(w);
  return eval;
}

double Objective::surrogate(std::span<const double> x, std::span<const double> y) const {
  check_size(x);
  check_size(y);
  CompensatedSum total;
  total += constant_;
  for (const auto& term : terms_) {
    const double log_zx = term_log_normalizer(term, x);
    const double log_zy = term_log_normalizer(term, y);
    total += term.count * (x[term.winner] - std::exp(log_zx - log_zy) - log_zy + 1.0);
  }
  return total.value() + prior_log_density(prior_, x);
}

Params Objective::mm_update(std::span<const double> w) const {
  check_size(w);
  std::vector<double> theta(n_);
  for (std::size_t i = 0; i < n_; ++i) theta[i] = std::exp(w[i]);

  std::vector<CompensatedSum> denominators(n_);
  for (const auto& term : terms_) {
    CompensatedSum mass;
    for (std::size_t k = term.begin; k < term.end; ++k) mass += weights_[k] * theta[members_[k]];
    const double scale = term.count / mass.value();
    for (std::size_t k = term.begin; k < term.end; ++k) denominators[members_[k]] += scale * weights_[k];
  }

  Params next(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    const double numerator = prior_.alpha - 1.0 + wins_[i];
    const double denominator = prior_.beta + denominators[i].value();
    if (numerator <= 0.0) {
      throw NonconvergentItem(i, "item '" + names_[i] + "' has no wins and alpha = 1; its score diverges to -inf");
    }
    if (denominator <= 0.0) {
      throw NonconvergentItem(i, "item '" + names_[i] + "' is never compared and beta = 0");
    }
    next[i] = std::log(numerator) - std::log(denominator);
  }
  return next;
}

bool Objective::ml_estimate_exists() const {
  if (n_ <= 1) return true;
  std::vector<std::vector<ItemId>> forward(n_);
  std::vector<std::vector<ItemId>> backward(n_);
  for (const auto& term : terms_) {
    for (std::size_t k = term.begin; k < term.end; ++k) {
      const ItemId loser = members_[k];
      if (loser == term.winner) continue;
      forward[loser].push_back(term.winner);
      backward[term.winner].push_back(loser);
    }
  }
  const auto reaches_all = [&](const std::vector<std::vector<ItemId>>& adjacency) {
    std::vector<bool> seen(n_, false);
    std::queue<ItemId> frontier;
    frontier.push(0);
    seen[0] = true;
    std::size_t visited = 1;
    while (!frontier.empty()) {
      const ItemId u = frontier.front();
      frontier.pop();
      for (ItemId v : adjacency[u]) {
        if (!seen[v]) {
          seen[v] = true;
          ++visited;
          frontier.push(v);
        }
      }
    }
    return visited == n_;
  };
  return reaches_all(forward) && reaches_all(backward);
}

double log_likelihood(const ModelSpec& model, const ComparisonDataset& dataset, std::span<const double> w) {
  return Objective(model, dataset, GammaPrior::maximum_likelihood()).log_likelihood(w);
}

double prior_log_density(const GammaPrior& prior, std::span<const double> w) {
  if (prior.is_ml()) return 0.0;
  CompensatedSum total;
  for (double wi : w) total += (prior.alpha - 1.0) * wi - prior.beta * std::exp(wi);
  return total.value();
}

std::vector<double> gradient(const ModelSpec& model, const ComparisonDataset& dataset, const GammaPrior& prior,
                             std::span<const double> w) {
  return Objective(model, dataset, prior).gradient(w);
}

ObjectiveEval evaluate(const ModelSpec& model, const ComparisonDataset& dataset, const GammaPrior& prior,
                       std::span<const double> w) {
  return Objective(model, dataset, prior).evaluate(w);
}

double surrogate_value(const ModelSpec& model, const ComparisonDataset& dataset, const GammaPrior& prior,
                       std::span<const double> x, std::span<const double> y) {
  return Objective(model, dataset, prior).surrogate(x, y);
}

namespace {

void check_index(std::span<const double> w, ItemId i) {
  if (i >= w.size()) throw InvalidArgument("outcome refers to item " + std::to_string(i) + " outside the model");
}

void check_distinct(std::span<const double> w, std::vector<ItemId> items, std::size_t min_size) {
  for (ItemId i : items) check_index(w, i);
  std::sort(items.begin(), items.end());
  if (std::adjacent_find(items.begin(), items.end()) != items.end()) {
    throw InvalidArgument("outcome lists an item twice");
  }
  if (items.size() < min_size) throw InvalidArgument("outcome needs at least two items");
}

// log Pr[winner chosen from set] under Luce's rule.
double log_choice(std::span<const double> w, ItemId winner, std::span<const ItemId> set) {
  std::vector<double> scores;
  scores.reserve(set.size());
  for (ItemId j : set) scores.push_back(w[j]);
  return w[winner] - log_sum_exp(scores);
}

}  // namespace

double outcome_probability(const ModelSpec& model, std::span<const double> w, const OutcomeDescriptor& outcome) {
  model.validate();
  const double log_theta = std::log(model.rk_theta);
  const auto invalid = [&](const char* what) {
    return InvalidArgument(std::string(what) + " outcomes are not defined for model '" +
                           std::string(to_string(model.family)) + "'");
  };

  if (const auto* pair = std::get_if<PairOutcome>(&outcome)) {
    check_distinct(w, {pair->winner, pair->loser}, 2);
    if (model.family == ModelFamily::RaoKupper) {
      const std::array<double, 2> terms{w[pair->winner], w[pair->loser] + log_theta};
      return std::exp(w[pair->winner] - log_sum_exp(terms));
    }
    const std::array<ItemId, 2> set{pair->winner, pair->loser};
    return std::exp(log_choice(w, pair->winner, set));
  }
  if (const auto* tie = std::get_if<TieOutcome>(&outcome)) {
    if (model.family != ModelFamily::RaoKupper) throw invalid("tie");
    check_distinct(w, {tie->a, tie->b}, 2);
    if (model.rk_theta == 1.0) return 0.0;
    const std::array<double, 2> first{w[tie->a], w[tie->b] + log_theta};
    const std::array<double, 2> second{w[tie->a] + log_theta, w[tie->b]};
    const double log_p = std::log(model.rk_theta * model.rk_theta - 1.0) + w[tie->a] + w[tie->b] -
                         log_sum_exp(first) - log_sum_exp(second);
    return std::exp(log_p);
  }
  if (const auto* choice = std::get_if<ChoiceOutcome>(&outcome)) {
    if (model.family != ModelFamily::LuceChoice) throw invalid("choice");
    check_distinct(w, choice->set, 2);
    if (std::find(choice->set.begin(), choice->set.end(), choice->winner) == choice->set.end()) {
      throw InvalidArgument("chosen item is not in the choice set");
    }
    return std::exp(log_choice(w, choice->winner, choice->set));
  }
  const auto& ranking = std::get<RankingOutcome>(outcome);
  if (model.family != ModelFamily::PlackettLuce) throw invalid("ranking");
  check_distinct(w, ranking.order, 2);
  const std::span<const ItemId> order(ranking.order);
  double log_p = 0.0;
  for (std::size_t r = 0; r + 1 < order.size(); ++r) log_p += log_choice(w, order[r], order.subspan(r));
  return std::exp(log_p);
}

}  // namespace mmrank
