#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "mmrank/dataset.hpp"

namespace mmrank {

// Symmetric, nonnegative, zero-diagonal matrix of item-pair co-occurrence
// counts m_{i,j}.
using CooccurrenceMatrix = Eigen::MatrixXd;

// Pair data: m_{i,j} = d_{i,j} + d_{j,i} + t_{i,j}.
// Choices and rankings: m_{u,v} = sum of counts of observations containing
// both u and v.
CooccurrenceMatrix cooccurrence_matrix(const ComparisonDataset& dataset);

// Component label per item; labels are numbered in order of each
// component's smallest item index.
std::vector<std::size_t> connected_components(const CooccurrenceMatrix& m);

bool is_connected(const CooccurrenceMatrix& m);

struct ComponentRestriction {
  ComparisonDataset dataset;
  // original_index[new_index] is the item's index in the input dataset.
  std::vector<ItemId> original_index;
};

// Restriction to the largest connected component of the co-occurrence
// graph. Ties in size go to the component holding the smallest original
// index. A connected dataset comes back unchanged with the identity mapping.
ComponentRestriction largest_connected_component(const ComparisonDataset& dataset);

}  // namespace mmrank
