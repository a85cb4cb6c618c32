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

#include "dogwhistle/mock_provider.h"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "dogwhistle/error.h"

namespace dogwhistle {
namespace {

namespace fs = std::filesystem;

fs::path write_file(const std::string& name, const std::string& content) {
  const fs::path p = fs::temp_directory_path() / name;
  std::ofstream(p) << content;
  return p;
}

const std::string kPrompt = "Intro line\n1. a soy latte please\n2. what a soy boy\n";

TEST(PromptSentences, ExtractsConsecutiveNumberedLines) {
  EXPECT_EQ(prompt_sentences(kPrompt),
            (std::vector<std::string>{"a soy latte please", "what a soy boy"}));
  EXPECT_EQ(prompt_sentences("2. skipped\n1. first\n3. gap\n2. second"),
            (std::vector<std::string>{"first", "second"}));
  EXPECT_TRUE(prompt_sentences("1.5 no").empty());
}

TEST(ScriptedProvider, RulesFromFile) {
  const auto path = write_file("dogwhistle_script_test.jsonl",
      R"({"sentence":"soy latte","labels":["not_coded"]})" "\n"
      R"({"sentence":"soy boy","labels":["coded","not_coded"],"explanation":"insult"})" "\n"
      R"({"refuse":"forbidden","kind":"blocked","runs":[1]})" "\n"
      R"({"default_label":"coded"})" "\n");
  auto p = ScriptedProvider::from_file(path);
  const auto r0 = p->complete({kPrompt, 0});
  EXPECT_EQ(r0.status, CompletionStatus::kOk);
  EXPECT_EQ(r0.text, "1. not coded - scripted verdict\n2. coded - insult\n");
  EXPECT_EQ(p->complete({kPrompt, 1}).text,
            "1. not coded - scripted verdict\n2. not coded - insult\n");
  EXPECT_EQ(p->complete({"1. other\n", 0}).text, "1. coded - no scripted rule\n");
  EXPECT_EQ(p->complete({"1. forbidden\n", 0}).status, CompletionStatus::kOk);
  EXPECT_EQ(p->complete({"1. forbidden\n", 1}).status, CompletionStatus::kBlocked);
  EXPECT_EQ(p->complete({"no numbered lines", 0}).text, "No.");
  EXPECT_EQ(p->calls(), 6u);
}

TEST(ScriptedProvider, ReplayTakesPrecedence) {
  ScriptedProvider p;
  p.add_replay(prompt_hash(kPrompt), 1, {CompletionStatus::kOk, "run one", ""});
  p.add_replay(prompt_hash(kPrompt), std::nullopt, {CompletionStatus::kOk, "any run", ""});
  EXPECT_EQ(p.complete({kPrompt, 1}).text, "run one");
  EXPECT_EQ(p.complete({kPrompt, 2}).text, "any run");
}

TEST(ScriptedProvider, MalformedScriptReportsLine) {
  const auto path = write_file("dogwhistle_bad_script.jsonl",
      R"({"sentence":"x","labels":["coded"]})" "\n" R"({"sentence":"y","labels":["purple"]})" "\n");
  try {
    ScriptedProvider::from_file(path);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(ScriptedProvider::from_file("/nonexistent/script.jsonl"), Error);
}

TEST(StochasticProvider, DeterministicAndFlipRateMatches) {
  auto truth = [](std::string_view s) -> std::optional<Label> {
    return s.find("coded") != std::string_view::npos && s.find("not") == std::string_view::npos
               ? Label::kCoded
               : Label::kNotCoded;
  };
  StochasticProvider p("s", truth, 0.3, 17);
  std::size_t flips = 0;
  std::size_t total = 0;
  for (int b = 0; b < 400; ++b) {
    std::string prompt;
    std::vector<SentenceVerdict> expected;
    for (int i = 0; i < 10; ++i) {
      const bool coded = (b + i) % 2;
      prompt += std::to_string(i + 1) + ". item " + std::to_string(b) + " " +
                (coded ? "coded" : "not coded") + "\n";
    }
    const auto r = p.complete({prompt, static_cast<std::size_t>(b % 3)});
    EXPECT_EQ(r.text, p.complete({prompt, static_cast<std::size_t>(b % 3)}).text);
    const auto parsed = parse_disambiguation_response(r.text, 10);
    const auto& verdicts = std::get<std::vector<SentenceVerdict>>(parsed);
    for (int i = 0; i < 10; ++i) {
      const bool coded = (b + i) % 2;
      flips += (verdicts[i].label == Label::kCoded) != coded;
      ++total;
    }
  }
  EXPECT_NEAR(double(flips) / total, 0.3, 0.03);
}

TEST(FormatVerdicts, ParsesBack) {
  const std::vector<SentenceVerdict> v = {{0, Label::kCoded, "x"}, {1, Label::kNotCoded, "y"}};
  EXPECT_EQ(std::get<std::vector<SentenceVerdict>>(
                parse_disambiguation_response(format_verdicts(v), 2)),
            v);
}

}  // namespace
}  // namespace dogwhistle
