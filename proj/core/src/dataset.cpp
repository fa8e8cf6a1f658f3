#include "mmrank/dataset.hpp"

#include <algorithm>
#include <numeric>
#include <tuple>

#include "mmrank/errors.hpp"

namespace mmrank {

std::string_view to_string(DatasetKind kind) {
  switch (kind) {
    case DatasetKind::PairWins: return "pair_wins";
    case DatasetKind::PairWinsTies: return "pair_wins_ties";
    case DatasetKind::Choices: return "choices";
    case DatasetKind::Rankings: return "rankings";
  }
  return "unknown";
}

Count ComparisonDataset::wins(ItemId i, ItemId j) const {
  auto it = pair_wins_.find({i, j});
  return it == pair_wins_.end() ? 0 : it->second;
}

Count ComparisonDataset::ties(ItemId i, ItemId j) const {
  auto it = tie_counts_.find({std::min(i, j), std::max(i, j)});
  return it == tie_counts_.end() ? 0 : it->second;
}

Count ComparisonDataset::observation_count() const {
  Count total = 0;
  for (const auto& [key, c] : pair_wins_) total += c;
  for (const auto& [key, c] : tie_counts_) total += c;
  for (const auto& obs : choices_) total += obs.count;
  for (const auto& obs : rankings_) total += obs.count;
  return total;
}

std::size_t ComparisonDataset::max_set_size() const {
  std::size_t k = (pair_wins_.empty() && tie_counts_.empty()) ? 0 : 2;
  for (const auto& obs : choices_) k = std::max(k, obs.set.size());
  for (const auto& obs : rankings_) k = std::max(k, obs.order.size());
  return k;
}

DatasetBuilder::DatasetBuilder(DatasetKind kind) { dataset_.kind_ = kind; }

ItemId DatasetBuilder::add_item(std::string_view name) {
  std::string key(name);
  auto [it, inserted] = index_.try_emplace(key, dataset_.names_.size());
  if (inserted) dataset_.names_.push_back(std::move(key));
  return it->second;
}

void DatasetBuilder::add_items(const std::vector<std::string>& names) {
  for (const auto& name : names) {
    const ItemId before = size();
    if (add_item(name) != before) throw InvalidArgument("duplicate item name '" + name + "'");
  }
}

void DatasetBuilder::check_item(ItemId i) const {
  if (i >= size()) throw InvalidArgument("item index " + std::to_string(i) + " out of range");
}

void DatasetBuilder::add_win(ItemId winner, ItemId loser, Count count) {
  if (dataset_.kind_ != DatasetKind::PairWins && dataset_.kind_ != DatasetKind::PairWinsTies) {
    throw InvalidArgument("pair wins require a pairwise dataset");
  }
  check_item(winner);
  check_item(loser);
  if (winner == loser) throw InvalidArgument("self-comparison of item " + dataset_.names_[winner]);
  if (count == 0) return;
  dataset_.pair_wins_[{winner, loser}] += count;
}

void DatasetBuilder::add_tie(ItemId a, ItemId b, Count count) {
  if (dataset_.kind_ == DatasetKind::PairWins) dataset_.kind_ = DatasetKind::PairWinsTies;
  if (dataset_.kind_ != DatasetKind::PairWinsTies) {
    throw InvalidArgument("ties require a pairwise dataset");
  }
  check_item(a);
  check_item(b);
  if (a == b) throw InvalidArgument("self-comparison of item " + dataset_.names_[a]);
  if (count == 0) return;
  dataset_.tie_counts_[{std::min(a, b), std::max(a, b)}] += count;
}

void DatasetBuilder::add_choice(ItemId winner, std::vector<ItemId> set, Count count) {
  if (dataset_.kind_ != DatasetKind::Choices) throw InvalidArgument("choices require a choice dataset");
  check_item(winner);
  for (ItemId i : set) check_item(i);
  std::sort(set.begin(), set.end());
  if (std::adjacent_find(set.begin(), set.end()) != set.end()) {
    throw InvalidArgument("choice set contains a duplicate item");
  }
  if (set.size() < 2) throw InvalidArgument("choice set needs at least two items");
  if (!std::binary_search(set.begin(), set.end(), winner)) {
    throw InvalidArgument("chosen item is not a member of the choice set");
  }
  if (count == 0) return;
  auto key = std::make_pair(winner, set);
  auto it = choice_slot_.find(key);
  if (it != choice_slot_.end()) {
    dataset_.choices_[it->second].count += count;
    return;
  }
  choice_slot_.emplace(std::move(key), dataset_.choices_.size());
  dataset_.choices_.push_back({winner, std::move(set), count});
}

void DatasetBuilder::add_ranking(std::vector<ItemId> order, Count count) {
  if (dataset_.kind_ != DatasetKind::Rankings) throw InvalidArgument("rankings require a ranking dataset");
  for (ItemId i : order) check_item(i);
  if (order.size() < 2) throw InvalidArgument("ranking needs at least two items");
  std::vector<ItemId> sorted = order;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw InvalidArgument("ranking contains a duplicate item");
  }
  if (count == 0) return;
  auto it = ranking_slot_.find(order);
  if (it != ranking_slot_.end()) {
    dataset_.rankings_[it->second].count += count;
    return;
  }
  ranking_slot_.emplace(order, dataset_.rankings_.size());
  dataset_.rankings_.push_back({std::move(order), count});
}

ComparisonDataset DatasetBuilder::build() && { return std::move(dataset_); }
ComparisonDataset DatasetBuilder::build() const& { return dataset_; }

namespace {

// Rebuilds `dataset` through `remap` (old index -> new index, or npos to
// drop the item), with `names` as the new item table.
ComparisonDataset remap_dataset(const ComparisonDataset& dataset, const std::vector<std::size_t>& remap,
                                const std::vector<std::string>& names) {
  constexpr auto npos = static_cast<std::size_t>(-1);
  auto inside = [&](ItemId i) { return remap[i] != npos; };

  DatasetBuilder builder(dataset.kind());
  builder.add_items(names);
  for (const auto& [key, c] : dataset.pair_wins()) {
    if (inside(key.first) && inside(key.second)) builder.add_win(remap[key.first], remap[key.second], c);
  }
  for (const auto& [key, c] : dataset.tie_counts()) {
    if (inside(key.first) && inside(key.second)) builder.add_tie(remap[key.first], remap[key.second], c);
  }

  std::vector<ChoiceObservation> choices;
  for (const auto& obs : dataset.choices()) {
    if (!std::all_of(obs.set.begin(), obs.set.end(), inside)) continue;
    ChoiceObservation mapped{remap[obs.winner], {}, obs.count};
    for (ItemId i : obs.set) mapped.set.push_back(remap[i]);
    std::sort(mapped.set.begin(), mapped.set.end());
    choices.push_back(std::move(mapped));
  }
  std::sort(choices.begin(), choices.end(), [](const auto& a, const auto& b) {
    return std::tie(a.set, a.winner) < std::tie(b.set, b.winner);
  });
  for (auto& obs : choices) builder.add_choice(obs.winner, obs.set, obs.count);

  std::vector<RankingObservation> rankings;
  for (const auto& obs : dataset.rankings()) {
    if (!std::all_of(obs.order.begin(), obs.order.end(), inside)) continue;
    RankingObservation mapped{{}, obs.count};
    for (ItemId i : obs.order) mapped.order.push_back(remap[i]);
    rankings.push_back(std::move(mapped));
  }
  std::sort(rankings.begin(), rankings.end(), [](const auto& a, const auto& b) { return a.order < b.order; });
  for (auto& obs : rankings) builder.add_ranking(obs.order, obs.count);

  // Kind is preserved even when every tie was dropped.
  return std::move(builder).build();
}

}  // namespace

ComparisonDataset canonicalize(const ComparisonDataset& dataset) {
  std::vector<ItemId> order(dataset.n());
  std::iota(order.begin(), order.end(), ItemId{0});
  std::sort(order.begin(), order.end(),
            [&](ItemId a, ItemId b) { return dataset.name(a) < dataset.name(b); });
  std::vector<std::size_t> remap(dataset.n());
  std::vector<std::string> names;
  names.reserve(dataset.n());
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    remap[order[pos]] = pos;
    names.push_back(dataset.name(order[pos]));
  }
  return remap_dataset(dataset, remap, names);
}

ComparisonDataset restrict_to(const ComparisonDataset& dataset, const std::vector<ItemId>& keep) {
  std::vector<std::size_t> remap(dataset.n(), static_cast<std::size_t>(-1));
  std::vector<std::string> names;
  for (std::size_t pos = 0; pos < keep.size(); ++pos) {
    if (keep[pos] >= dataset.n()) throw InvalidArgument("restrict_to: item index out of range");
    remap[keep[pos]] = pos;
    names.push_back(dataset.name(keep[pos]));
  }
  return remap_dataset(dataset, remap, names);
}

ComparisonDataset to_pairwise(const ComparisonDataset& dataset) {
  if (dataset.kind() == DatasetKind::PairWins || dataset.kind() == DatasetKind::PairWinsTies) return dataset;
  DatasetBuilder builder(DatasetKind::PairWins);
  builder.add_items(dataset.names());
  for (const auto& obs : dataset.choices()) {
    if (obs.set.size() != 2) throw InvalidArgument("to_pairwise: choice set larger than two items");
    const ItemId loser = obs.set[0] == obs.winner ? obs.set[1] : obs.set[0];
    builder.add_win(obs.winner, loser, obs.count);
  }
  for (const auto& obs : dataset.rankings()) {
    if (obs.order.size() != 2) throw InvalidArgument("to_pairwise: ranking longer than two items");
    builder.add_win(obs.order[0], obs.order[1], obs.count);
  }
  return std::move(builder).build();
}

}  // namespace mmrank
