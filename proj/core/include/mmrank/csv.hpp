#pragma once

#include <string>
#include <string_view>

#include "mmrank/dataset.hpp"

namespace mmrank {

// Text formats. Blank lines and lines starting with '#' are ignored; LF or
// CRLF line endings; fields are trimmed of surrounding whitespace.
//
//   pairwise:  item_a,item_b,outcome[,count]   outcome in {win, loss, tie}
//   ranking:   id1,id2,...,idk                 finish order, k >= 2
//   choice:    chosen,other1,...,otherk        chosen item first, k >= 2
//
// Item names are mapped to dense indices in first-appearance order.

ComparisonDataset parse_pairwise_csv(std::string_view text);
ComparisonDataset parse_ranking_csv(std::string_view text);
ComparisonDataset parse_choice_csv(std::string_view text);

// Writers emit lines sorted lexicographically by item names. Pairwise lines
// always carry the count column; ranking and choice lines are repeated
// `count` times. Items without observations are not represented.
std::string serialize_pairwise_csv(const ComparisonDataset& dataset);
std::string serialize_ranking_csv(const ComparisonDataset& dataset);
std::string serialize_choice_csv(const ComparisonDataset& dataset);

// Dispatches on dataset.kind().
std::string serialize_csv(const ComparisonDataset& dataset);

}  // namespace mmrank
