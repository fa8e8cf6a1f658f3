#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

#include "mmrank/dataset.hpp"
#include "mmrank/model.hpp"

namespace mmrank {

enum class GraphFamily { Complete, Star, Path, Circuit, ErdosRenyi };

std::string_view to_string(GraphFamily family);
std::optional<GraphFamily> parse_graph_family(std::string_view name);

// Comparison design. With set_size == 2 every edge of the chosen graph gets
// comparisons_per_edge independent outcomes (complete graph = round robin).
// With set_size > 2 the generator draws `observations` uniform random
// k-subsets instead and the graph family is ignored.
struct DesignSpec {
  std::size_t n = 10;
  GraphFamily family = GraphFamily::Complete;
  double er_p = 0.5;
  std::size_t comparisons_per_edge = 1;
  std::size_t set_size = 2;
  std::size_t observations = 0;

  void validate() const;
};

// Half the items at -omega, the rest at +omega (the lower half first).
Params two_level_scores(std::size_t n, double omega);

// Samples outcomes from the model's law; the dataset kind follows the
// model (BT: PairWins, RK: PairWinsTies, Luce: Choices, PL: Rankings).
// Items are named item00, item01, ... and every item is registered, so
// isolated vertices survive. Deterministic given the seed on every platform.
ComparisonDataset synthesize(const DesignSpec& design, const ModelSpec& model, const Params& w_true,
                             std::uint64_t seed);

}  // namespace mmrank
