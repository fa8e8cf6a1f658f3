#include "mmrank/csv.hpp"

#include <algorithm>
#include <charconv>
#include <tuple>
#include <vector>

#include "mmrank/errors.hpp"

namespace mmrank {

namespace {

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

struct Line {
  std::size_t number;
  std::vector<std::string_view> fields;
};

// Splits text into data lines, skipping blanks and comments.
std::vector<Line> data_lines(std::string_view text) {
  std::vector<Line> lines;
  std::size_t number = 0;
  while (!text.empty()) {
    ++number;
    const auto eol = text.find('\n');
    std::string_view raw = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    raw = trim(raw);
    if (raw.empty() || raw.front() == '#') continue;

    Line line{number, {}};
    std::size_t start = 0;
    while (true) {
      const auto comma = raw.find(',', start);
      line.fields.push_back(trim(raw.substr(start, comma == std::string_view::npos ? raw.npos : comma - start)));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    for (auto field : line.fields) {
      if (field.empty()) throw ParseError(number, "empty field");
    }
    lines.push_back(std::move(line));
  }
  return lines;
}

Count parse_count(const Line& line, std::string_view field) {
  if (!field.empty() && field.front() == '-') throw ParseError(line.number, "negative count");
  Count value = 0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw ParseError(line.number, "invalid count '" + std::string(field) + "'");
  }
  return value;
}

std::vector<ItemId> register_distinct(DatasetBuilder& builder, const Line& line, const char* what) {
  if (line.fields.size() < 2) throw ParseError(line.number, std::string(what) + " needs at least two items");
  std::vector<std::string_view> sorted(line.fields.begin(), line.fields.end());
  std::sort(sorted.begin(), sorted.end());
  if (auto dup = std::adjacent_find(sorted.begin(), sorted.end()); dup != sorted.end()) {
    throw ParseError(line.number, "duplicate item '" + std::string(*dup) + "' in " + what);
  }
  std::vector<ItemId> ids;
  ids.reserve(line.fields.size());
  for (auto field : line.fields) ids.push_back(builder.add_item(field));
  return ids;
}

void check_name(const std::string& name) {
  if (name.find_first_of(",\n\r") != std::string::npos || name.empty() || name.front() == '#' ||
      trim(name).size() != name.size()) {
    throw InvalidArgument("item name '" + name + "' cannot be written to CSV");
  }
}

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ',';
    out += parts[i];
  }
  return out;
}

}  // namespace

ComparisonDataset parse_pairwise_csv(std::string_view text) {
  DatasetBuilder builder(DatasetKind::PairWins);
  for (const auto& line : data_lines(text)) {
    if (line.fields.size() != 3 && line.fields.size() != 4) {
      throw ParseError(line.number, "expected item_a,item_b,outcome[,count]");
    }
    const auto a_name = line.fields[0];
    const auto b_name = line.fields[1];
    const auto outcome = line.fields[2];
    if (a_name == b_name) throw ParseError(line.number, "self-comparison of '" + std::string(a_name) + "'");
    if (outcome != "win" && outcome != "loss" && outcome != "tie") {
      throw ParseError(line.number, "unknown outcome '" + std::string(outcome) + "'");
    }
    const Count count = line.fields.size() == 4 ? parse_count(line, line.fields[3]) : 1;
    const ItemId a = builder.add_item(a_name);
    const ItemId b = builder.add_item(b_name);
    if (outcome == "win") {
      builder.add_win(a, b, count);
    } else if (outcome == "loss") {
      builder.add_win(b, a, count);
    } else {
      builder.add_tie(a, b, count);
    }
  }
  return std::move(builder).build();
}

ComparisonDataset parse_ranking_csv(std::string_view text) {
  DatasetBuilder builder(DatasetKind::Rankings);
  for (const auto& line : data_lines(text)) {
    builder.add_ranking(register_distinct(builder, line, "ranking"));
  }
  return std::move(builder).build();
}

ComparisonDataset parse_choice_csv(std::string_view text) {
  DatasetBuilder builder(DatasetKind::Choices);
  for (const auto& line : data_lines(text)) {
    auto ids = register_distinct(builder, line, "choice set");
    const ItemId winner = ids.front();
    builder.add_choice(winner, std::move(ids));
  }
  return std::move(builder).build();
}

std::string serialize_pairwise_csv(const ComparisonDataset& dataset) {
  using Row = std::tuple<std::string, std::string, std::string, Count>;
  std::vector<Row> rows;
  for (const auto& [key, c] : dataset.pair_wins()) {
    rows.emplace_back(dataset.name(key.first), dataset.name(key.second), "win", c);
  }
  for (const auto& [key, c] : dataset.tie_counts()) {
    auto a = dataset.name(key.first);
    auto b = dataset.name(key.second);
    if (b < a) std::swap(a, b);
    rows.emplace_back(std::move(a), std::move(b), "tie", c);
  }
  std::sort(rows.begin(), rows.end());
  std::string out;
  for (const auto& [a, b, outcome, c] : rows) {
    check_name(a);
    check_name(b);
    out += a + ',' + b + ',' + outcome + ',' + std::to_string(c) + '\n';
  }
  return out;
}

std::string serialize_ranking_csv(const ComparisonDataset& dataset) {
  std::vector<std::pair<std::vector<std::string>, Count>> rows;
  for (const auto& obs : dataset.rankings()) {
    std::vector<std::string> names;
    for (ItemId i : obs.order) {
      check_name(dataset.name(i));
      names.push_back(dataset.name(i));
    }
    rows.emplace_back(std::move(names), obs.count);
  }
  std::sort(rows.begin(), rows.end());
  std::string out;
  for (const auto& [names, c] : rows) {
    const std::string line = join(names) + '\n';
    for (Count r = 0; r < c; ++r) out += line;
  }
  return out;
}

std::string serialize_choice_csv(const ComparisonDataset& dataset) {
  std::vector<std::pair<std::vector<std::string>, Count>> rows;
  for (const auto& obs : dataset.choices()) {
    std::vector<std::string> others;
    for (ItemId i : obs.set) {
      check_name(dataset.name(i));
      if (i != obs.winner) others.push_back(dataset.name(i));
    }
    std::sort(others.begin(), others.end());
    std::vector<std::string> names{dataset.name(obs.winner)};
    names.insert(names.end(), others.begin(), others.end());
    rows.emplace_back(std::move(names), obs.count);
  }
  std::sort(rows.begin(), rows.end());
  std::string out;
  for (const auto& [names, c] : rows) {
    const std::string line = join(names) + '\n';
    for (Count r = 0; r < c; ++r) out += line;
  }
  return out;
}

std::string serialize_csv(const ComparisonDataset& dataset) {
  switch (dataset.kind()) {
    case DatasetKind::PairWins:
    case DatasetKind::PairWinsTies: return serialize_pairwise_csv(dataset);
    case DatasetKind::Choices: return serialize_choice_csv(dataset);
    case DatasetKind::Rankings: return serialize_ranking_csv(dataset);
  }
  return {};
}

}  // namespace mmrank
