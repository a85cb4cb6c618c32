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

#include "dogwhistle/error.h"
#include "dogwhistle/matcher.h"
#include "dogwhistle/text.h"

namespace dogwhistle {

const std::vector<PromptVariant>& construct_definitions() {
  static const std::vector<PromptVariant> kDefinitions = {
      {"albertson",
       "A dogwhistle is an expression that has different meanings to "
       "different audiences."},
      {"bhat",
       "A dogwhistle is a word or phrase that means one thing to the public "
       "at large, but that carry an additional, implicit meaning only "
       "recognized by a specific subset of the audience."},
      {"henderson",
       "A dogwhistle is a term that sends one message to an outgroup while "
       "at the same time sending a second (often taboo, controversial, or "
       "inflammatory) message to an ingroup."},
      {"merriam_webster",
       "A dogwhistle is a coded message communicated through words or "
       "phrases commonly understood by a particular group of people, but not "
       "by others."},
      {"wikipedia",
       "A dogwhistle is the use of coded or suggestive language in political "
       "messaging to garner support from a particular group without "
       "provoking opposition."},
  };
  return kDefinitions;
}

const std::vector<PromptVariant>& detection_questions() {
  static const std::vector<PromptVariant> kQuestions = {
      {"identify",
       "Does this sentence contain a dog whistle? If so, please identify it."},
      {"presence", "Does the following sentence contain a dog whistle?"},
      {"identify_following",
       "Does the following sentence contain a dog whistle? If it does, please "
       "identify the dog whistle."},
      {"identify_and_define",
       "Does the following sentence contain a dog whistle? If it does, please "
       "identify the dog whistle and describe what it secretly means."},
  };
  return kQuestions;
}

namespace {

const std::string& variant_text(const std::vector<PromptVariant>& variants,
                                std::string_view id) {
  for (const auto& v : variants) {
    if (v.id == id) return v.text;
  }
  throw Error(ErrorKind::kConfig, "unknown prompt variant '" +
                                      std::string(id) + "'");
}

std::string_view task_name(PromptTask task) {
  switch (task) {
    case PromptTask::kDetectionZeroShot:
      return "detection_zero";
    case PromptTask::kDetectionFewShot:
      return "detection_few";
    case PromptTask::kDisambiguation:
      return "disambiguation";
    case PromptTask::kDefinitionInduction:
      return "definition_induction";
  }
  return "detection_zero";
}

constexpr std::string_view kModerationPreamble =
    "This is a content moderation task.\n\n";

constexpr std::string_view kDetectionBody =
    "{{preamble}}{{definition}}\n\n{{question}}{{reasoning}}\n\n"
    "{{examples}}Sentence: \"{{sentence}}\"";

constexpr std::string_view kDisambiguationBody =
    "{{preamble}}{{definition}}\n\n"
    "The term \"{{term}}\" can be used as a dog whistle with the following "
    "coded meaning: {{coded_meaning}}\n\n"
    "{{count_phrase}} the term \"{{term}}\". "
    "For each sentence, decide whether the term is used with its coded dog "
    "whistle meaning or in its ordinary, innocuous sense, and give a label "
    "and an explanation.{{reasoning}}\n\n"
    "{{sentences}}\n"
    "Answer with exactly one line per sentence, in the form:\n"
    "<number>. <coded or not coded> - <explanation>";

constexpr std::string_view kDefinitionBody =
    "{{preamble}}{{definition}}\n\n"
    "The term \"{{term}}\" is a dog whistle.{{examples}}\n\n"
    "What is the coded meaning of \"{{term}}\", and which group does it "
    "target?{{reasoning}}";

std::string one_line(std::string_view text) { return normalize(text, false); }

}  // namespace

PromptTemplate default_template(PromptTask task) {
  PromptTemplate t;
  t.task = task;
  const std::string_view name = task_name(task);
  constexpr std::string_view kSuffix = "/wikipedia/identify";
  t.template_id.reserve(name.size() + kSuffix.size());
  t.template_id.append(name).append(kSuffix);
  t.construct_definition = variant_text(construct_definitions(), "wikipedia");
  t.question_text = variant_text(detection_questions(), "identify");
  return t;
}

std::vector<PromptTemplate> detection_template_matrix() {
  std::vector<PromptTemplate> out;
  for (const auto& def : construct_definitions()) {
    for (const auto& q : detection_questions()) {
      PromptTemplate t;
      t.task = PromptTask::kDetectionZeroShot;
      t.template_id = "detection/" + def.id + "/" + q.id;
      t.construct_definition = def.text;
      t.question_text = q.text;
      out.push_back(std::move(t));
    }
  }
  return out;
}

std::string render_template(std::string_view body,
                            const std::map<std::string, std::string>& vars) {
  std::string out;
  out.reserve(body.size() * 2);
  std::size_t pos = 0;
  while (pos < body.size()) {
    const std::size_t open = body.find("{{", pos);
    if (open == std::string_view::npos) {
      out.append(body.substr(pos));
      break;
    }
    const std::size_t close = body.find("}}", open + 2);
    if (close == std::string_view::npos) {
      throw Error(ErrorKind::kData, "unterminated placeholder in template");
    }
    out.append(body.substr(pos, open - pos));
    const std::string name(body.substr(open + 2, close - open - 2));
    auto it = vars.find(name);
    if (it == vars.end()) {
      throw Error(ErrorKind::kData, "unbound placeholder {{" + name + "}}");
    }
    out.append(it->second);
    pos = close + 2;
  }
  return out;
}

std::string render_detection_prompt(
    std::string_view sentence, const PromptTemplate& tmpl,
    const std::vector<LabeledExemplar>& exemplars) {
  if (trim(sentence).empty()) {
    throw Error(ErrorKind::kData, "empty instance text");
  }
  if (tmpl.task == PromptTask::kDetectionFewShot && exemplars.empty()) {
    throw Error(ErrorKind::kData, "few-shot prompt requires exemplars");
  }
  std::string examples;
  if (!exemplars.empty()) {
    examples = "Here are some labeled examples.\n\n";
    for (const auto& ex : exemplars) {
      examples += "Sentence: \"" + ex.text + "\"\nAnswer: " + ex.answer + "\n\n";
    }
    examples += "Now answer for this sentence.\n\n";
  }
  return render_template(
      kDetectionBody,
      {{"preamble", tmpl.moderation_preamble ? std::string(kModerationPreamble)
                                             : ""},
       {"definition", tmpl.construct_definition},
       {"question", tmpl.question_text},
       {"reasoning", tmpl.ask_reasoning ? " Explain your reasoning." : ""},
       {"examples", examples},
       {"sentence", std::string(sentence)}});
}

std::string render_disambiguation_prompt(
    const GlossaryEntry& entry, const std::vector<std::string>& sentences,
    const PromptTemplate& tmpl) {
  if (sentences.empty() || sentences.size() > kMaxDisambiguationBatch) {
    throw Error(ErrorKind::kData,
                "disambiguation batch must hold 1 to 10 sentences, got " +
                    std::to_string(sentences.size()));
  }
  std::vector<std::pair<std::string, std::string>> forms;
  for (const auto& f : entry.surface_forms) forms.emplace_back(entry.id, f);
  const PatternSet keyword = PatternSet::compile(forms);

  std::string list;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    if (keyword.scan(sentences[i]).empty()) {
      throw Error(ErrorKind::kData, "sentence " + std::to_string(i + 1) +
                                        " does not contain a surface form of '" +
                                        entry.term + "'");
    }
    list += std::to_string(i + 1) + ". " + one_line(sentences[i]) + "\n";
  }
  return render_template(
      kDisambiguationBody,
      {{"preamble", tmpl.moderation_preamble ? std::string(kModerationPreamble)
                                             : ""},
       {"definition", tmpl.construct_definition},
       {"term", entry.term},
       {"coded_meaning", one_line(entry.coded_meaning)},
       {"count_phrase", sentences.size() == 1
                            ? std::string("The sentence below contains")
                            : "Each of the " + std::to_string(sentences.size()) +
                                  " sentences below contains"},
       {"reasoning", tmpl.ask_reasoning
                         ? " Explain the reasoning behind each label."
                         : ""},
       {"sentences", list}});
}

std::string render_definition_prompt(const GlossaryEntry& entry,
                                     const std::vector<std::string>& examples,
                                     const PromptTemplate& tmpl) {
  std::string block;
  if (!examples.empty()) {
    block = "\n\nHere are examples of its coded use:\n";
    for (std::size_t i = 0; i < examples.size(); ++i) {
      block += std::to_string(i + 1) + ". " + one_line(examples[i]) + "\n";
    }
    block.pop_back();
  }
  return render_template(
      kDefinitionBody,
      {{"preamble", tmpl.moderation_preamble ? std::string(kModerationPreamble)
                                             : ""},
       {"definition", tmpl.construct_definition},
       {"term", entry.term},
       {"examples", block},
       {"reasoning", tmpl.ask_reasoning ? " Explain your reasoning." : ""}});
}

}  // namespace dogwhistle
