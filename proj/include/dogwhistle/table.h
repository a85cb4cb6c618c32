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

#ifndef DOGWHISTLE_TABLE_H_
#define DOGWHISTLE_TABLE_H_

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace dogwhistle {

// RFC 4180 CSV. Fields containing a comma, quote, CR or LF are quoted.
std::string csv_escape(std::string_view field);
void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Index of a header column, or -1.
  int column(std::string_view name) const;
};

// Parses quoted fields with embedded separators, doubled quotes and line
// breaks. The first row is the header. Rows are padded or rejected to the
// header width: a longer row is a ParseError.
CsvTable read_csv(std::istream& in);
CsvTable load_csv(const std::filesystem::path& path);

}  // namespace dogwhistle

#endif  // DOGWHISTLE_TABLE_H_
