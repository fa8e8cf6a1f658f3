#include "mmrank/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "mmrank/errors.hpp"

namespace mmrank {

std::string_view to_string(GraphFamily family) {
  switch (family) {
    case GraphFamily::Complete: return "complete";
    case GraphFamily::Star: return "star";
    case GraphFamily::Path: return "path";
    case GraphFamily::Circuit: return "circuit";
    case GraphFamily::ErdosRenyi: return "erdos-renyi";
  }
  return "unknown";
}

std::optional<GraphFamily> parse_graph_family(std::string_view name) {
  if (name == "complete") return GraphFamily::Complete;
  if (name == "star") return GraphFamily::Star;
  if (name == "path") return GraphFamily::Path;
  if (name == "circuit" || name == "cycle") return GraphFamily::Circuit;
  if (name == "erdos-renyi" || name == "erdos_renyi" || name == "er") return GraphFamily::ErdosRenyi;
  return std::nullopt;
}

void DesignSpec::validate() const {
  if (n < 2) throw InvalidArgument("design needs n >= 2 items");
  if (set_size < 2) throw InvalidArgument("set size k must be >= 2");
  if (set_size > n) throw InvalidArgument("set size k cannot exceed n");
  if (set_size == 2) {
    if (comparisons_per_edge < 1) throw InvalidArgument("comparisons per edge must be >= 1");
    if (family == GraphFamily::ErdosRenyi && !(er_p > 0.0 && er_p <= 1.0)) {
      throw InvalidArgument("Erdos-Renyi edge probability must lie in (0, 1]");
    }
    if (family == GraphFamily::Circuit && n < 3) throw InvalidArgument("a circuit needs n >= 3");
  } else if (observations < 1) {
    throw InvalidArgument("set size k > 2 needs observations >= 1");
  }
}

Params two_level_scores(std::size_t n, double omega) {
  Params w(n, omega);
  std::fill(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(n / 2), -omega);
  return w;
}

namespace {

// std::uniform_real_distribution is implementation-defined; this is not.
class Uniform {
 public:
  explicit Uniform(std::uint64_t seed) : engine_(seed) {}
  double operator()() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  std::size_t below(std::size_t bound) { return std::min(bound - 1, static_cast<std::size_t>((*this)() * bound)); }

 private:
  std::mt19937_64 engine_;
};

std::vector<std::pair<ItemId, ItemId>> design_edges(const DesignSpec& design, Uniform& uniform) {
  const std::size_t n = design.n;
  std::vector<std::pair<ItemId, ItemId>> edges;
  switch (design.family) {
    case GraphFamily::Complete:
      for (ItemId i = 0; i < n; ++i)
        for (ItemId j = i + 1; j < n; ++j) edges.emplace_back(i, j);
      break;
    case GraphFamily::Star:
      for (ItemId j = 1; j < n; ++j) edges.emplace_back(0, j);
      break;
    case GraphFamily::Path:
      for (ItemId i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
      break;
    case GraphFamily::Circuit:
      for (ItemId i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
      edges.emplace_back(0, n - 1);
      break;
    case GraphFamily::ErdosRenyi:
      for (ItemId i = 0; i < n; ++i)
        for (ItemId j = i + 1; j < n; ++j)
          if (uniform() < design.er_p) edges.emplace_back(i, j);
      break;
  }
  return edges;
}

// Sequential choice without replacement; the last item needs no draw.
std::vector<ItemId> sample_order(std::vector<ItemId> remaining, const Params& w, Uniform& uniform) {
  std::vector<ItemId> order;
  order.reserve(remaining.size());
  while (remaining.size() > 1) {
    double total = 0.0;
    for (auto i : remaining) total += std::exp(w[i]);
    const double u = uniform() * total;
    double acc = 0.0;
    std::size_t pick = remaining.size() - 1;
    for (std::size_t r = 0; r < remaining.size(); ++r) {
      acc += std::exp(w[remaining[r]]);
      if (u < acc) {
        pick = r;
        break;
      }
    }
    order.push_back(remaining[pick]);
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  order.push_back(remaining.front());
  return order;
}

std::vector<ItemId> random_subset(std::size_t n, std::size_t k, Uniform& uniform) {
  std::vector<ItemId> pool(n);
  std::iota(pool.begin(), pool.end(), ItemId{0});
  for (std::size_t r = 0; r < k; ++r) std::swap(pool[r], pool[r + uniform.below(n - r)]);
  pool.resize(k);
  return pool;
}

DatasetKind kind_for(ModelFamily family) {
  switch (family) {
    case ModelFamily::BradleyTerry: return DatasetKind::PairWins;
    case ModelFamily::RaoKupper: return DatasetKind::PairWinsTies;
    case ModelFamily::LuceChoice: return DatasetKind::Choices;
    case ModelFamily::PlackettLuce: return DatasetKind::Rankings;
  }
  return DatasetKind::PairWins;
}

std::string item_name(std::size_t i, std::size_t n) {
  const auto width = std::to_string(n - 1).size() < 2 ? 2 : std::to_string(n - 1).size();
  auto s = std::to_string(i);
  return "item" + std::string(width - s.size(), '0') + s;
}

}  // namespace

ComparisonDataset synthesize(const DesignSpec& design, const ModelSpec& model, const Params& w_true,
                             std::uint64_t seed) {
  design.validate();
  model.validate();
  if (w_true.size() != design.n) throw InvalidArgument("w_true length does not match design n");
  for (double v : w_true)
    if (!std::isfinite(v)) throw InvalidArgument("w_true must be finite");
  const bool pair_model = model.family == ModelFamily::BradleyTerry || model.family == ModelFamily::RaoKupper;
  if (pair_model && design.set_size != 2) throw InvalidArgument("pair models need set size k = 2");

  Uniform uniform(seed);
  DatasetBuilder builder(kind_for(model.family));
  for (std::size_t i = 0; i < design.n; ++i) builder.add_item(item_name(i, design.n));

  const auto record = [&](std::vector<ItemId> set) {
    switch (model.family) {
      case ModelFamily::BradleyTerry: {
        const auto i = set[0], j = set[1];
        const double p = 1.0 / (1.0 + std::exp(w_true[j] - w_true[i]));
        if (uniform() < p) builder.add_win(i, j);
        else builder.add_win(j, i);
        break;
      }
      case ModelFamily::RaoKupper: {
        const auto i = set[0], j = set[1];
        const double p_i = outcome_probability(model, w_true, PairOutcome{i, j});
        const double p_j = outcome_probability(model, w_true, PairOutcome{j, i});
        const double u = uniform();
        if (u < p_i) builder.add_win(i, j);
        else if (u < p_i + p_j) builder.add_win(j, i);
        else builder.add_tie(i, j);
        break;
      }
      case ModelFamily::LuceChoice: {
        const auto winner = sample_order(set, w_true, uniform).front();
        builder.add_choice(winner, std::move(set));
        break;
      }
      case ModelFamily::PlackettLuce:
        builder.add_ranking(sample_order(std::move(set), w_true, uniform));
        break;
    }
  };

  if (design.set_size == 2) {
    for (const auto& [i, j] : design_edges(design, uniform))
      for (std::size_t c = 0; c < design.comparisons_per_edge; ++c) record({i, j});
  } else {
    for (std::size_t o = 0; o < design.observations; ++o) record(random_subset(design.n, design.set_size, uniform));
  }
  return builder.build();
}

}  // namespace mmrank
