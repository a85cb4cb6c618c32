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

#ifndef DOGWHISTLE_ANALYSIS_H_
#define DOGWHISTLE_ANALYSIS_H_

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dogwhistle/dataset.h"

namespace dogwhistle {

enum class GroupBy { kInGroup, kYear, kInGroupYear };

std::string_view to_string(GroupBy group_by);
std::optional<GroupBy> parse_group_by(std::string_view text);

struct YearRange {
  int first = 0;
  int last = 0;
};

struct RecordFilter {
  std::optional<DocumentKind> type;
  std::set<std::string> in_groups;  // empty = any
  std::set<std::string> terms;      // entry ids; empty = any
  std::optional<YearRange> year_range;

  bool accepts(const SilentSignalRecord& record) const;
};

struct AggregationQuery {
  GroupBy group_by = GroupBy::kInGroup;
  RecordFilter filter;
  // Count distinct dog whistles per key instead of records.
  bool distinct_terms = false;
};

struct AggregateRow {
  std::string in_group;           // empty unless grouped by in-group
  std::optional<int> year;        // set when grouped by year
  std::size_t count = 0;

  bool operator==(const AggregateRow&) const = default;
};

struct AggregateTable {
  GroupBy group_by = GroupBy::kInGroup;
  std::vector<AggregateRow> rows;  // sorted by (in_group, year)
  std::size_t filtered_total = 0;  // records passing the filter
};

// Exact counts per key. With a year dimension every year in year_range
// (or, without one, between the first and last observed year) appears,
// zero-filled; for in-group x year that holds for every observed in-group.
// Throws Error(kUsage) when year_range is not well-ordered.
AggregateTable aggregate(const std::vector<SilentSignalRecord>& records,
                         const AggregationQuery& query);

// Fraction of records of each type; both 0 for an empty set.
struct TypeSplit {
  std::size_t formal = 0;
  std::size_t informal = 0;
  double formal_fraction = 0;
  double informal_fraction = 0;
};

TypeSplit type_split(const std::vector<SilentSignalRecord>& records);

// Event overlay: delimiter-separated "year,label" rows with a header.
std::map<int, std::vector<std::string>> load_event_overlay(
    const std::filesystem::path& path);

// CSV with a header naming the key columns and "count"; when events are
// given and the table has a year column, an "events" column joins their
// labels with "; ".
void emit_plot_table(const AggregateTable& table, std::ostream& out,
                     const std::map<int, std::vector<std::string>>* events = nullptr);
void emit_plot_table(const AggregateTable& table, const std::filesystem::path& path,
                     const std::map<int, std::vector<std::string>>* events = nullptr);

}  // namespace dogwhistle

#endif  // DOGWHISTLE_ANALYSIS_H_
