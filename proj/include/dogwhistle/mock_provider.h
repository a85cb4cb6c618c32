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

#ifndef DOGWHISTLE_MOCK_PROVIDER_H_
#define DOGWHISTLE_MOCK_PROVIDER_H_

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dogwhistle/provider.h"
#include "dogwhistle/responses.h"

namespace dogwhistle {

// The numbered sentences ("<n>. text" lines) of a disambiguation prompt.
std::vector<std::string> prompt_sentences(std::string_view prompt);

// Offline provider answering from a script. Lookup order for each request:
//   1. exact replay by (prompt hash, run), then by prompt hash alone;
//   2. refusal rules whose substring occurs in a prompt sentence;
//   3. label rules, synthesizing a numbered answer for disambiguation
//      prompts (sentences without a rule get the default label);
//   4. the fallback response.
//
// Script files are newline-delimited JSON, one rule per line:
//   {"prompt_hash": "...", "run": 0, "status": "ok", "response": "..."}
//   {"sentence": "soy latte", "labels": ["coded", "not_coded", "coded"]}
//   {"refuse": "groomers", "kind": "blocked", "runs": [3]}
//   {"default_label": "not_coded"}
// Audit logs are valid replay scripts.
class ScriptedProvider : public ProviderClient {
 public:
  struct LabelRule {
    std::string sentence;
    std::vector<Label> labels;  // labels[run % size]
    std::string explanation;
  };
  struct RefusalRule {
    std::string contains;
    RefusalKind kind = RefusalKind::kDeclined;
    std::optional<std::set<std::size_t>> runs;  // all runs when unset
  };

  explicit ScriptedProvider(std::string name = "mock-scripted")
      : name_(std::move(name)) {}

  // Throws ParseError with the line number on a malformed script.
  static std::unique_ptr<ScriptedProvider> from_file(
      const std::filesystem::path& path, std::string name = "mock-scripted");

  void add_replay(std::string prompt_hash, std::optional<std::size_t> run,
                  CompletionResponse response);
  void add_label_rule(LabelRule rule) { label_rules_.push_back(std::move(rule)); }
  void add_refusal_rule(RefusalRule rule) {
    refusal_rules_.push_back(std::move(rule));
  }
  void set_default_label(Label label) { default_label_ = label; }
  void set_fallback_response(std::string text) { fallback_ = std::move(text); }

  const std::string& name() const override { return name_; }
  CompletionResponse complete(const CompletionRequest& request) override;

  std::size_t calls() const { return calls_.load(); }

 private:
  std::string name_;
  std::map<std::pair<std::string, std::optional<std::size_t>>, CompletionResponse>
      replays_;
  std::vector<LabelRule> label_rules_;
  std::vector<RefusalRule> refusal_rules_;
  Label default_label_ = Label::kNotCoded;
  std::string fallback_ = "No.";
  std::atomic<std::size_t> calls_{0};
};

// Answers disambiguation prompts with the true label of each sentence,
// flipped independently with probability flip_probability. Draws depend
// only on (seed, prompt, run, sentence), never on call order.
class StochasticProvider : public ProviderClient {
 public:
  using Truth = std::function<std::optional<Label>(std::string_view sentence)>;

  StochasticProvider(std::string name, Truth truth, double flip_probability,
                     std::uint64_t seed)
      : name_(std::move(name)), truth_(std::move(truth)),
        flip_probability_(flip_probability), seed_(seed) {}

  const std::string& name() const override { return name_; }
  CompletionResponse complete(const CompletionRequest& request) override;

 private:
  std::string name_;
  Truth truth_;
  double flip_probability_;
  std::uint64_t seed_;
};

// Renders verdicts in the layout the disambiguation prompt asks for.
std::string format_verdicts(const std::vector<SentenceVerdict>& verdicts);

}  // namespace dogwhistle

#endif  // DOGWHISTLE_MOCK_PROVIDER_H_
