// Copyright 2026 The Dogwhistle Pipeline Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dogwhistle/analysis.h"

#include <fstream>
#include <ostream>

#include "dogwhistle/error.h"
#include "dogwhistle/table.h"

namespace dogwhistle {

std::string_view to_string(GroupBy group_by) {
  switch (group_by) {
    case GroupBy::kInGroup:
      return "in_group";
    case GroupBy::kYear:
      return "year";
    case GroupBy::kInGroupYear:
      return "in_group_year";
  }
  return "in_group";
}

std::optional<GroupBy> parse_group_by(std::string_view text) {
  for (GroupBy g : {GroupBy::kInGroup, GroupBy::kYear, GroupBy::kInGroupYear}) {
    if (text == to_string(g)) return g;
  }
  if (text == "in_group,year" || text == "in_groupxyear") return GroupBy::kInGroupYear;
  return std::nullopt;
}

bool RecordFilter::accepts(const SilentSignalRecord& r) const {
  if (type && r.type != *type) return false;
  if (!in_groups.empty() && !in_groups.contains(r.in_group)) return false;
  if (!terms.empty() && !terms.contains(r.dog_whistle)) return false;
  if (year_range &&
      (r.date.year < year_range->first || r.date.year > year_range->last)) {
    return false;
  }
  return true;
}

AggregateTable aggregate(const std::vector<SilentSignalRecord>& records,
                         const AggregationQuery& query) {
  const auto& range = query.filter.year_range;
  if (range && range->first > range->last) {
    throw Error(ErrorKind::kUsage, "year range " + std::to_string(range->first) +
                                       "-" + std::to_string(range->last) +
                                       " is not well-ordered");
  }
  const bool by_group = query.group_by != GroupBy::kYear;
  const bool by_year = query.group_by != GroupBy::kInGroup;

  using Key = std::pair<std::string, int>;
  std::map<Key, std::set<std::string>> terms;
  std::map<Key, std::size_t> counts;
  std::set<std::string> groups;
  int lo = 0;
  int hi = -1;

  AggregateTable table;
  table.group_by = query.group_by;
  for (const auto& r : records) {
    if (!query.filter.accepts(r)) continue;
    ++table.filtered_total;
    Key key{by_group ? r.in_group : std::string(), by_year ? r.date.year : 0};
    ++counts[key];
    if (query.distinct_terms) terms[key].insert(r.dog_whistle);
    groups.insert(key.first);
    if (hi < lo) {
      lo = hi = r.date.year;
    } else {
      lo = std::min(lo, r.date.year);
      hi = std::max(hi, r.date.year);
    }
  }
  if (by_year) {
    if (range) {
      lo = range->first;
      hi = range->last;
    }
    // A year-only table with a range but no records is still a full series.
    if (!by_group && groups.empty() && range) groups.insert(std::string());
    for (const auto& g : groups) {
      for (int y = lo; y <= hi; ++y) counts.try_emplace(Key{g, y}, 0);
    }
  }
  for (const auto& [key, count] : counts) {
    AggregateRow row;
    row.in_group = key.first;
    if (by_year) row.year = key.second;
    row.count = query.distinct_terms ? terms[key].size() : count;
    table.rows.push_back(std::move(row));
  }
  return table;
}

TypeSplit type_split(const std::vector<SilentSignalRecord>& records) {
  TypeSplit s;
  for (const auto& r : records) {
    ++(r.type == DocumentKind::kFormal ? s.formal : s.informal);
  }
  if (!records.empty()) {
    const double n = static_cast<double>(records.size());
    s.formal_fraction = static_cast<double>(s.formal) / n;
    s.informal_fraction = static_cast<double>(s.informal) / n;
  }
  return s;
}

std::map<int, std::vector<std::string>> load_event_overlay(
    const std::filesystem::path& path) {
  const CsvTable table = load_csv(path);
  const int year = table.column("year");
  const int label = table.column("label");
  if (year < 0 || label < 0) {
    throw ParseError(1, "overlay header must contain 'year' and 'label'");
  }
  std::map<int, std::vector<std::string>> out;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    int y = 0;
    try {
      std::size_t used = 0;
      y = std::stoi(row[year], &used);
      if (used != row[year].size()) throw std::invalid_argument("year");
    } catch (const std::exception&) {
      throw ParseError(r + 2, "bad year '" + row[year] + "'");
    }
    out[y].push_back(row[label]);
  }
  return out;
}

void emit_plot_table(const AggregateTable& table, std::ostream& out,
                     const std::map<int, std::vector<std::string>>* events) {
  const bool by_group = table.group_by != GroupBy::kYear;
  const bool by_year = table.group_by != GroupBy::kInGroup;
  const bool with_events = events != nullptr && by_year;
  std::vector<std::string> header;
  if (by_group) header.push_back("in_group");
  if (by_year) header.push_back("year");
  header.push_back("count");
  if (with_events) header.push_back("events");
  write_csv_row(out, header);
  for (const auto& row : table.rows) {
    std::vector<std::string> cells;
    if (by_group) cells.push_back(row.in_group);
    if (by_year) cells.push_back(std::to_string(row.year.value_or(0)));
    cells.push_back(std::to_string(row.count));
    if (with_events) {
      std::string joined;
      if (auto it = events->find(row.year.value_or(0)); it != events->end()) {
        for (const auto& label : it->second) {
          if (!joined.empty()) joined += "; ";
          joined += label;
        }
      }
      cells.push_back(std::move(joined));
    }
    write_csv_row(out, cells);
  }
}

void emit_plot_table(const AggregateTable& table, const std::filesystem::path& path,
                     const std::map<int, std::vector<std::string>>* events) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  emit_plot_table(table, out, events);
  if (!out) throw Error(ErrorKind::kIo, "write failed for " + path.string());
}

}  // namespace dogwhistle
