#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace mmrank {

// Dense item index in [0, n).
using ItemId = std::size_t;
using Count = std::uint64_t;

enum class DatasetKind { PairWins, PairWinsTies, Choices, Rankings };

std::string_view to_string(DatasetKind kind);

// `set` is sorted ascending and contains `winner`.
struct ChoiceObservation {
  ItemId winner = 0;
  std::vector<ItemId> set;
  Count count = 1;

  friend bool operator==(const ChoiceObservation&, const ChoiceObservation&) = default;
};

// `order[0]` finished first.
struct RankingObservation {
  std::vector<ItemId> order;
  Count count = 1;

  friend bool operator==(const RankingObservation&, const RankingObservation&) = default;
};

// Aggregated comparison outcomes over n named items. Only the field group
// matching `kind` is populated. Immutable once built; construct through
// DatasetBuilder.
class ComparisonDataset {
 public:
  using PairMap = std::map<std::pair<ItemId, ItemId>, Count>;

  ComparisonDataset() = default;

  std::size_t n() const { return names_.size(); }
  DatasetKind kind() const { return kind_; }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(ItemId i) const { return names_.at(i); }

  // d_{i,j}: wins of i over j.
  Count wins(ItemId i, ItemId j) const;
  // t_{i,j} = t_{j,i}.
  Count ties(ItemId i, ItemId j) const;

  // Keys (i, j) with i winning.
  const PairMap& pair_wins() const { return pair_wins_; }
  // Keys (i, j) with i < j.
  const PairMap& tie_counts() const { return tie_counts_; }
  const std::vector<ChoiceObservation>& choices() const { return choices_; }
  const std::vector<RankingObservation>& rankings() const { return rankings_; }

  // Total number of observed outcomes (pair comparisons, ties, choices or
  // rankings), counting multiplicities.
  Count observation_count() const;
  // Largest comparison-set size present (2 for pair data, 0 when empty).
  std::size_t max_set_size() const;

  bool empty() const { return observation_count() == 0; }

  friend bool operator==(const ComparisonDataset&, const ComparisonDataset&) = default;

 private:
  friend class DatasetBuilder;

  DatasetKind kind_ = DatasetKind::PairWins;
  std::vector<std::string> names_;
  PairMap pair_wins_;
  PairMap tie_counts_;
  std::vector<ChoiceObservation> choices_;
  std::vector<RankingObservation> rankings_;
};

// Accumulates observations, assigning dense indices to item names in
// first-appearance order and merging identical observations.
class DatasetBuilder {
 public:
  explicit DatasetBuilder(DatasetKind kind);

  ItemId add_item(std::string_view name);
  // Registers items 0..n-1 with the given names, in order.
  void add_items(const std::vector<std::string>& names);

  void add_win(ItemId winner, ItemId loser, Count count = 1);
  // Promotes a PairWins builder to PairWinsTies.
  void add_tie(ItemId a, ItemId b, Count count = 1);
  void add_choice(ItemId winner, std::vector<ItemId> set, Count count = 1);
  void add_ranking(std::vector<ItemId> order, Count count = 1);

  std::size_t size() const { return dataset_.names_.size(); }
  DatasetKind kind() const { return dataset_.kind_; }

  ComparisonDataset build() &&;
  ComparisonDataset build() const&;

 private:
  void check_item(ItemId i) const;

  ComparisonDataset dataset_;
  std::unordered_map<std::string, ItemId> index_;
  std::map<std::pair<ItemId, std::vector<ItemId>>, std::size_t> choice_slot_;
  std::map<std::vector<ItemId>, std::size_t> ranking_slot_;
};

// Re-indexes items in lexicographic order of their names; observations are
// re-sorted accordingly. Two datasets describing the same outcomes over the
// same names have equal canonical forms.
ComparisonDataset canonicalize(const ComparisonDataset& dataset);

// Keeps only the given items (by original index, in the order given) and the
// observations entirely inside that set.
ComparisonDataset restrict_to(const ComparisonDataset& dataset, const std::vector<ItemId>& keep);

// Reinterprets size-2 choices or size-2 rankings as pairwise wins. Throws
// InvalidArgument if any observation involves more than two items.
ComparisonDataset to_pairwise(const ComparisonDataset& dataset);

}  // namespace mmrank
