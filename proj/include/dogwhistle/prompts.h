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

#ifndef DOGWHISTLE_PROMPTS_H_
#define DOGWHISTLE_PROMPTS_H_

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "dogwhistle/glossary.h"

namespace dogwhistle {

enum class PromptTask {
  kDetectionZeroShot,
  kDetectionFewShot,
  kDisambiguation,
  kDefinitionInduction,
};

// A candidate construct definition or question from the prompt matrix.
struct PromptVariant {
  std::string id;
  std::string text;
};

// Construct definitions compared during prompt engineering; "wikipedia"
// is the default.
const std::vector<PromptVariant>& construct_definitions();
// Detection questions. "identify" is the default.
const std::vector<PromptVariant>& detection_questions();

struct PromptTemplate {
  std::string template_id;
  PromptTask task = PromptTask::kDetectionZeroShot;
  std::string construct_definition;
  std::string question_text;
  bool ask_reasoning = true;
  bool moderation_preamble = false;
};

PromptTemplate default_template(PromptTask task);

// Every definition x question combination for detection, ids of the form
// "detection/<definition>/<question>".
std::vector<PromptTemplate> detection_template_matrix();

// Substitutes {{name}} placeholders in one pass; substituted values are not
// rescanned. Throws Error(kData) naming the first unbound placeholder.
std::string render_template(std::string_view body,
                            const std::map<std::string, std::string>& vars);

struct LabeledExemplar {
  std::string text;
  std::string answer;
};

// Zero-shot when exemplars is empty. A few-shot template requires at least
// one exemplar. Throws Error(kData) on an empty sentence.
std::string render_detection_prompt(
    std::string_view sentence, const PromptTemplate& tmpl,
    const std::vector<LabeledExemplar>& exemplars = {});

inline constexpr std::size_t kMaxDisambiguationBatch = 10;

// Numbered list of 1..10 sentences, each of which must contain one of the
// entry's surface forms (Error(kData) otherwise). Sentences are rendered on
// one line each.
std::string render_disambiguation_prompt(const GlossaryEntry& entry,
                                         const std::vector<std::string>& sentences,
                                         const PromptTemplate& tmpl);

// Asks for the coded meaning and targeted group of a term, optionally
// showing coded examples of its use.
std::string render_definition_prompt(const GlossaryEntry& entry,
                                     const std::vector<std::string>& examples,
                                     const PromptTemplate& tmpl);

}  // namespace dogwhistle

#endif  // DOGWHISTLE_PROMPTS_H_
