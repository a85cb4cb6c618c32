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

#include "dogwhistle/table.h"

#include <gtest/gtest.h>

#include <sstream>

#include "dogwhistle/error.h"

namespace dogwhistle {
namespace {

TEST(Csv, EscapesOnlyWhenNeeded) {
  EXPECT_EQ(csv_escape("plain"), "plain");
  EXPECT_EQ(csv_escape("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_escape("say \"hi\""), "\"say \"\"hi\"\"\"");
  EXPECT_EQ(csv_escape("two\nlines"), "\"two\nlines\"");
}

TEST(Csv, RoundTripsAwkwardFields) {
  std::ostringstream out;
  write_csv_row(out, {"id", "text"});
  write_csv_row(out, {"1", "comma, quote \" and\r\nbreak"});
  write_csv_row(out, {"2", ""});
  std::istringstream in(out.str());
  const CsvTable t = read_csv(in);
  ASSERT_EQ(t.header, (std::vector<std::string>{"id", "text"}));
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.rows[0][1], "comma, quote \" and\r\nbreak");
  EXPECT_EQ(t.rows[1][1], "");
  EXPECT_EQ(t.column("text"), 1);
  EXPECT_EQ(t.column("missing"), -1);
}

TEST(Csv, PadsShortRowsAndRejectsLongOnes) {
  std::istringstream ok("a,b,c\n1\n\n2,3\n");
  const CsvTable t = read_csv(ok);
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.rows[0], (std::vector<std::string>{"1", "", ""}));
  std::istringstream bad("a\n1,2\n");
  EXPECT_THROW(read_csv(bad), ParseError);
  std::istringstream open_quote("a\n\"x\n");
  EXPECT_THROW(read_csv(open_quote), ParseError);
}

TEST(Csv, EmptyInputHasNoHeader) {
  std::istringstream in("");
  EXPECT_TRUE(read_csv(in).header.empty());
}

}  // namespace
}  // namespace dogwhistle
