#include "mmrank/graph.hpp"

#include <algorithm>
#include <numeric>
#include <queue>

namespace mmrank {

CooccurrenceMatrix cooccurrence_matrix(const ComparisonDataset& dataset) {
  const auto n = static_cast<Eigen::Index>(dataset.n());
  CooccurrenceMatrix m = CooccurrenceMatrix::Zero(n, n);
  auto add = [&](ItemId a, ItemId b, double c) {
    m(a, b) += c;
    m(b, a) += c;
  };
  for (const auto& [key, c] : dataset.pair_wins()) add(key.first, key.second, static_cast<double>(c));
  for (const auto& [key, c] : dataset.tie_counts()) add(key.first, key.second, static_cast<double>(c));
  auto add_set = [&](const std::vector<ItemId>& items, Count c) {
    for (std::size_t a = 0; a < items.size(); ++a) {
      for (std::size_t b = a + 1; b < items.size(); ++b) add(items[a], items[b], static_cast<double>(c));
    }
  };
  for (const auto& obs : dataset.choices()) add_set(obs.set, obs.count);
  for (const auto& obs : dataset.rankings()) add_set(obs.order, obs.count);
  return m;
}

std::vector<std::size_t> connected_components(const CooccurrenceMatrix& m) {
  const auto n = static_cast<std::size_t>(m.rows());
  constexpr auto unset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> label(n, unset);
  std::size_t next = 0;
  for (std::size_t root = 0; root < n; ++root) {
    if (label[root] != unset) continue;
    std::queue<std::size_t> frontier;
    frontier.push(root);
    label[root] = next;
    while (!frontier.empty()) {
      const auto u = frontier.front();
      frontier.pop();
      for (std::size_t v = 0; v < n; ++v) {
        if (label[v] == unset && m(u, v) > 0.0) {
          label[v] = next;
          frontier.push(v);
        }
      }
    }
    ++next;
  }
  return label;
}

bool is_connected(const CooccurrenceMatrix& m) {
  const auto labels = connected_components(m);
  return std::all_of(labels.begin(), labels.end(), [](std::size_t l) { return l == 0; });
}

ComponentRestriction largest_connected_component(const ComparisonDataset& dataset) {
  const auto labels = connected_components(cooccurrence_matrix(dataset));
  if (labels.empty()) return {dataset, {}};
  const std::size_t count = *std::max_element(labels.begin(), labels.end()) + 1;
  std::vector<std::size_t> sizes(count, 0);
  for (auto l : labels) ++sizes[l];
  // Labels follow smallest member index, so the first maximum wins ties.
  const auto best = static_cast<std::size_t>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
  if (count == 1) {
    std::vector<ItemId> identity(dataset.n());
    std::iota(identity.begin(), identity.end(), ItemId{0});
    return {dataset, std::move(identity)};
  }
  std::vector<ItemId> keep;
  for (ItemId i = 0; i < labels.size(); ++i) {
    if (labels[i] == best) keep.push_back(i);
  }
  return {restrict_to(dataset, keep), keep};
}

}  // namespace mmrank
