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

#include "dogwhistle/prompts.h"

#include <gtest/gtest.h>

#include <set>

#include "dogwhistle/error.h"

namespace dogwhistle {
namespace {

const GlossaryEntry kSoyBoy{"soy_boy", "soy boy", {"soy boy", "soyboy"},
                            "weak, effeminate man", "alt-right", Sphere::kInformal};

TEST(TemplateMatrix, TwentyDistinctTemplates) {
  const auto m = detection_template_matrix();
  ASSERT_EQ(m.size(), 20u);
  std::set<std::string> ids;
  for (const auto& t : m) ids.insert(t.template_id);
  EXPECT_EQ(ids.size(), 20u);
  EXPECT_EQ(construct_definitions().size(), 5u);
  EXPECT_EQ(detection_questions().size(), 4u);
}

TEST(RenderTemplate, BindsAndRejects) {
  EXPECT_EQ(render_template("a {{x}} b {{y}}", {{"x", "1"}, {"y", "2"}}), "a 1 b 2");
  EXPECT_EQ(render_template("{{x}}{{x}}", {{"x", "{{y}}"}}), "{{y}}{{y}}");
  EXPECT_THROW(render_template("{{missing}}", {}), Error);
  EXPECT_THROW(render_template("{{open", {{"open", ""}}), Error);
}

TEST(DetectionPrompt, ContainsPartsAndIsDeterministic) {
  const auto t = default_template(PromptTask::kDetectionZeroShot);
  const std::string p = render_detection_prompt("He is a soy boy.", t);
  EXPECT_NE(p.find(t.construct_definition), std::string::npos);
  EXPECT_NE(p.find(t.question_text), std::string::npos);
  EXPECT_NE(p.find("\"He is a soy boy.\""), std::string::npos);
  EXPECT_EQ(p, render_detection_prompt("He is a soy boy.", t));
  EXPECT_THROW(render_detection_prompt("   ", t), Error);
}

TEST(DetectionPrompt, FewShotNeedsExemplarsAndModerationPreamble) {
  auto t = default_template(PromptTask::kDetectionFewShot);
  EXPECT_THROW(render_detection_prompt("x y", t), Error);
  t.moderation_preamble = true;
  const std::string p = render_detection_prompt("x y", t, {{"Example one.", "No."}});
  EXPECT_EQ(p.rfind("This is a content moderation task.", 0), 0u);
  EXPECT_NE(p.find("Example one."), std::string::npos);
}

TEST(DisambiguationPrompt, NumbersSentencesOnOneLineEach) {
  const auto t = default_template(PromptTask::kDisambiguation);
  const std::string p = render_disambiguation_prompt(
      kSoyBoy, {"What a soy\nboy.", "I had a soyboy latte."}, t);
  EXPECT_NE(p.find("1. What a soy boy.\n"), std::string::npos);
  EXPECT_NE(p.find("2. I had a soyboy latte.\n"), std::string::npos);
  EXPECT_NE(p.find("Each of the 2 sentences"), std::string::npos);
  EXPECT_NE(p.find("weak, effeminate man"), std::string::npos);
  const std::string one = render_disambiguation_prompt(kSoyBoy, {"soy boy"}, t);
  EXPECT_NE(one.find("The sentence below contains"), std::string::npos);
}

TEST(DisambiguationPrompt, BatchLimitsAndKeywordCheck) {
  const auto t = default_template(PromptTask::kDisambiguation);
  EXPECT_THROW(render_disambiguation_prompt(kSoyBoy, {}, t), Error);
  EXPECT_THROW(render_disambiguation_prompt(kSoyBoy, std::vector<std::string>(11, "soy boy"), t),
               Error);
  EXPECT_NO_THROW(
      render_disambiguation_prompt(kSoyBoy, std::vector<std::string>(10, "soy boy"), t));
  EXPECT_THROW(render_disambiguation_prompt(kSoyBoy, {"soy boy", "no keyword here"}, t),
               Error);
}

TEST(DefinitionPrompt, ListsExamples) {
  auto t = default_template(PromptTask::kDefinitionInduction);
  t.ask_reasoning = false;
  const std::string p = render_definition_prompt(kSoyBoy, {"a soy boy", "soyboys"}, t);
  EXPECT_NE(p.find("1. a soy boy\n2. soyboys"), std::string::npos);
  EXPECT_EQ(p.find("Explain"), std::string::npos);
}

}  // namespace
}  // namespace dogwhistle
