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

#include "dogwhistle/text.h"

#include <gtest/gtest.h>

namespace dogwhistle {
namespace {

TEST(FoldCase, LowersAsciiAndKeepsByteLength) {
  EXPECT_EQ(fold_case("Welfare QUEEN"), "welfare queen");
  const std::string mixed = "ÉCOLE Straße ΔΕΛΤΑ ПРИВЕТ";
  const std::string folded = fold_case(mixed);
  EXPECT_EQ(folded, "école straße δελτα привет");
  EXPECT_EQ(folded.size(), mixed.size());
}

TEST(FoldCase, LeavesMalformedBytesAlone) {
  const std::string bad = "A\xC3";
  EXPECT_EQ(fold_case(bad), "a\xC3");
}

TEST(Normalize, CollapsesAndTrimsWhitespace) {
  EXPECT_EQ(normalize("  Soy \t\n  Boy  "), "soy boy");
  EXPECT_EQ(normalize("Soy Boy", /*fold=*/false), "Soy Boy");
  EXPECT_EQ(normalize(" \t "), "");
}

TEST(Normalize, OffsetsPointBackIntoSource) {
  const std::string src = "  ab \t cd";
  const NormalizedText n = normalize_with_offsets(src, true);
  ASSERT_EQ(n.text, "ab cd");
  ASSERT_EQ(n.source_offset.size(), n.text.size());
  EXPECT_EQ(n.source_offset[0], 2u);
  EXPECT_EQ(n.source_offset[2], 4u);  // collapsed run maps to its first byte
  EXPECT_EQ(n.source_offset[3], 7u);
  for (std::size_t i = 0; i < n.text.size(); ++i) {
    if (n.text[i] != ' ') {
      EXPECT_EQ(n.text[i], src[n.source_offset[i]]);
    }
  }
}

TEST(WordChars, ApostropheCountsOnlyBetweenWordBytes) {
  const std::string s = "dog's 'x' _9";
  EXPECT_TRUE(is_word_char_at(s, 0));
  EXPECT_TRUE(is_word_char_at(s, 3));   // dog's
  EXPECT_FALSE(is_word_char_at(s, 6));  // leading quote
  EXPECT_FALSE(is_word_char_at(s, 8));  // trailing quote
  EXPECT_TRUE(is_word_char_at(s, 10));  // underscore
  EXPECT_FALSE(is_word_char_at(s, 99));
}

TEST(WordBoundaries, RequireNonWordNeighbours) {
  const std::string s = "based, unbased 'based' dog's";
  EXPECT_TRUE(on_word_boundaries(s, 0, 5));
  EXPECT_FALSE(on_word_boundaries(s, 9, 14));  // inside "unbased"
  EXPECT_TRUE(on_word_boundaries(s, 16, 21));
  EXPECT_FALSE(on_word_boundaries(s, 23, 26));  // "dog" in "dog's"
  EXPECT_FALSE(on_word_boundaries(s, 4, 4));
}

TEST(Trim, StripsAsciiWhitespace) {
  EXPECT_EQ(trim("\t a b \n"), "a b");
  EXPECT_EQ(trim(""), "");
}

}  // namespace
}  // namespace dogwhistle
