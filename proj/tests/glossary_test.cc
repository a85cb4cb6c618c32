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

#include "dogwhistle/glossary.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "dogwhistle/error.h"
#include "dogwhistle/text.h"

namespace dogwhistle {
namespace {

const char* kHeader = R"({"schema":"dogwhistle-glossary","version":1})";

GlossaryEntry make(std::string id, std::vector<std::string> forms,
                   Sphere sphere = Sphere::kInformal) {
  return {id, forms.front(), forms, "meaning of " + id, "racist", sphere};
}

std::string line(const std::string& id, const std::string& forms_json,
                 const std::string& sphere = "informal") {
  return R"({"id":")" + id + R"(","term":"t","surface_forms":)" + forms_json +
         R"(,"coded_meaning":"m","in_group":"g","sphere":")" + sphere + "\"}";
}

TEST(ReadGlossary, SharedSurfaceFormIndexesBothEntries) {
  std::istringstream in(std::string(kHeader) + "\n" + line("a", R"(["based"])") +
                        "\n" + line("b", R"(["Based", "based af"])") + "\n");
  const Glossary g = read_glossary(in);
  EXPECT_EQ(g.size(), 2u);
  EXPECT_EQ(g.ids_for_surface("based"), (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(g.ids_for_surface("  BASED  AF "), (std::vector<std::string>{"b"}));
  EXPECT_TRUE(g.ids_for_surface("unknown").empty());
}

TEST(ReadGlossary, EmptyFileHasNoEntries) {
  std::istringstream in("");
  try {
    read_glossary(in);
    FAIL() << "expected an error";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("no entries"), std::string::npos);
  }
}

TEST(ReadGlossary, ParseErrorsCarryLineNumbers) {
  std::istringstream bad_json(std::string(kHeader) + "\n" + line("a", R"(["x"])") +
                              "\n{oops\n");
  try {
    read_glossary(bad_json);
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  std::istringstream no_header(line("a", R"(["x"])") + "\n");
  EXPECT_THROW(read_glossary(no_header), ParseError);
  std::istringstream bad_sphere(std::string(kHeader) + "\n" +
                                line("a", R"(["x"])", "secret") + "\n");
  EXPECT_THROW(read_glossary(bad_sphere), ParseError);
}

TEST(ReadGlossary, DuplicateIdAndEmptyFormsAreValidationErrors) {
  std::istringstream dup(std::string(kHeader) + "\n" + line("a", R"(["x"])") + "\n" +
                         line("a", R"(["y"])") + "\n");
  EXPECT_THROW(read_glossary(dup), ValidationError);
  std::istringstream empty(std::string(kHeader) + "\n" + line("a", "[]") + "\n");
  EXPECT_THROW(read_glossary(empty), ValidationError);
}

TEST(ValidateGlossary, CleanFixtureHasEmptyReport) {
  const Glossary g({make("a", {"soy boy", "soyboy"}), make("b", {"jogger"})});
  EXPECT_TRUE(validate_glossary(g).empty());
}

TEST(ValidateGlossary, DuplicatedIdIsOneError) {
  const Glossary g({make("a", {"x"}), make("a", {"y"})});
  const ValidationReport r = validate_glossary(g);
  ASSERT_EQ(r.errors.size(), 1u);
  EXPECT_EQ(r.errors[0].code, "duplicate_id");
}

TEST(ValidateGlossary, CrossEntryCollisionIsOneWarning) {
  const Glossary g({make("single_a", {"single"}), make("single_b", {"single", "singles"})});
  const ValidationReport r = validate_glossary(g);
  EXPECT_TRUE(r.ok());
  ASSERT_EQ(r.warnings.size(), 1u);
  EXPECT_EQ(r.warnings[0].code, "surface_collision");
}

TEST(ValidateGlossary, WithinEntryDuplicateAfterNormalization) {
  const Glossary g({make("a", {"Soy  Boy", "soy boy"})});
  const ValidationReport r = validate_glossary(g);
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.errors[0].code, "duplicate_surface_form");
}

TEST(ValidateGlossary, EmptyMeaningIsAnError) {
  GlossaryEntry e = make("a", {"x"});
  e.coded_meaning = "";
  const ValidationReport r = validate_glossary(Glossary({e}));
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.errors[0].code, "empty_field");
}

TEST(Glossary, SphereCountsIncludeBothInEach) {
  const Glossary g({make("a", {"a"}, Sphere::kFormal), make("b", {"b"}, Sphere::kInformal),
                    make("c", {"c"}, Sphere::kBoth)});
  EXPECT_EQ(g.formal_count(), 2u);
  EXPECT_EQ(g.informal_count(), 2u);
  EXPECT_GT(g.formal_count() + g.informal_count(), g.size());
}

TEST(Glossary, FullFixtureComposition) {
  const Glossary g = load_glossary(DOGWHISTLE_FIXTURES "/glossary_full.jsonl");
  EXPECT_EQ(g.size(), 340u);
  EXPECT_EQ(g.formal_count(), 193u);
  EXPECT_EQ(g.informal_count(), 147u);
  EXPECT_EQ(g.formal_count() + g.informal_count(), g.size());  // no "both"
  EXPECT_GT(g.surface_index().size(), 1000u);
}

// Every surface form is indexed under its entry, and the index holds
// nothing else.
TEST(GlossaryProperty, IndexCoversExactlyTheSurfaceForms) {
  for (const char* file : {"/glossary.jsonl", "/glossary_full.jsonl"}) {
    const Glossary g = load_glossary(std::string(DOGWHISTLE_FIXTURES) + file);
    std::set<std::string> forms;
    for (const auto& e : g.entries()) {
      for (const auto& s : e.surface_forms) {
        const auto ids = g.ids_for_surface(s);
        EXPECT_NE(std::find(ids.begin(), ids.end(), e.id), ids.end()) << s;
        forms.insert(normalize(s));
      }
    }
    std::set<std::string> indexed;
    for (const auto& [form, ids] : g.surface_index()) {
      indexed.insert(form);
      for (const auto& id : ids) EXPECT_NE(g.find(id), nullptr);
    }
    EXPECT_EQ(forms, indexed);
  }
}

TEST(GlossaryProperty, WriteThenReadIsIdentity) {
  const Glossary g = load_glossary(DOGWHISTLE_FIXTURES "/glossary.jsonl");
  std::ostringstream out;
  write_glossary(g, out);
  std::istringstream in(out.str());
  const Glossary again = read_glossary(in);
  EXPECT_EQ(again.entries(), g.entries());
  std::ostringstream out2;
  write_glossary(again, out2);
  EXPECT_EQ(out.str(), out2.str());
}

TEST(LoadGlossary, MissingFileIsIoError) {
  try {
    load_glossary("/nonexistent/glossary.jsonl");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kIo);
  }
}

}  // namespace
}  // namespace dogwhistle
