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

#include <fstream>
#include <random>

#include "dogwhistle/error.h"
#include "dogwhistle/hash.h"
#include "dogwhistle/text.h"
#include "json.hpp"

namespace dogwhistle {

using nlohmann::json;

std::vector<std::string> prompt_sentences(std::string_view prompt) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < prompt.size()) {
    std::size_t nl = prompt.find('\n', pos);
    if (nl == std::string_view::npos) nl = prompt.size();
    std::string_view line = prompt.substr(pos, nl - pos);
    pos = nl + 1;
    std::size_t d = 0;
    std::size_t number = 0;
    while (d < line.size() && line[d] >= '0' && line[d] <= '9') {
      number = number * 10 + static_cast<std::size_t>(line[d] - '0');
      ++d;
    }
    if (d == 0 || line.substr(d, 2) != ". " || number != out.size() + 1) continue;
    out.emplace_back(line.substr(d + 2));
  }
  return out;
}

std::string format_verdicts(const std::vector<SentenceVerdict>& verdicts) {
  std::string out;
  for (const auto& v : verdicts) {
    out += std::to_string(v.sentence_index + 1) + ". " +
           (v.label == Label::kCoded ? "coded" : "not coded") + " - " +
           v.explanation + "\n";
  }
  return out;
}

namespace {

CompletionResponse refusal_response(RefusalKind kind) {
  switch (kind) {
    case RefusalKind::kBlocked:
      return {CompletionStatus::kBlocked, "", "block reason: other"};
    case RefusalKind::kTransport:
      return {CompletionStatus::kTransportError, "", "simulated timeout"};
    case RefusalKind::kMalformed:
      return {CompletionStatus::kOk, "Here are my thoughts on the sentences.", ""};
    case RefusalKind::kDeclined:
      break;
  }
  return {CompletionStatus::kOk, "I cannot assist with this request.", ""};
}

Label label_or_throw(const json& j, std::size_t line) {
  auto label = j.is_string() ? parse_label(j.get<std::string>()) : std::nullopt;
  if (!label) throw ParseError(line, "label must be 'coded' or 'not_coded'");
  return *label;
}

}  // namespace

void ScriptedProvider::add_replay(std::string hash,
                                  std::optional<std::size_t> run,
                                  CompletionResponse response) {
  replays_[{std::move(hash), run}] = std::move(response);
}

std::unique_ptr<ScriptedProvider> ScriptedProvider::from_file(
    const std::filesystem::path& path, std::string name) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kConfig, "cannot open mock script " + path.string());
  auto provider = std::make_unique<ScriptedProvider>(std::move(name));
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    json j = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded() || !j.is_object()) throw ParseError(line_no, "invalid JSON");
    try {
      if (j.contains("prompt_hash")) {
        std::optional<std::size_t> run;
        if (j.contains("run") && !j["run"].is_null()) run = j["run"].get<std::size_t>();
        auto status = parse_completion_status(j.value("status", "ok"));
        if (!status) throw ParseError(line_no, "bad status");
        provider->add_replay(j["prompt_hash"].get<std::string>(), run,
                             {*status, j.value("response", ""), j.value("detail", "")});
      } else if (j.contains("sentence")) {
        LabelRule rule;
        rule.sentence = j["sentence"].get<std::string>();
        if (!j.contains("labels") || !j["labels"].is_array() || j["labels"].empty()) {
          throw ParseError(line_no, "label rule needs a non-empty 'labels' array");
        }
        for (const json& l : j["labels"]) rule.labels.push_back(label_or_throw(l, line_no));
        rule.explanation = j.value("explanation", "scripted verdict");
        provider->add_label_rule(std::move(rule));
      } else if (j.contains("refuse")) {
        RefusalRule rule;
        rule.contains = j["refuse"].get<std::string>();
        auto kind = parse_refusal_kind(j.value("kind", "declined"));
        if (!kind) throw ParseError(line_no, "bad refusal kind");
        rule.kind = *kind;
        if (j.contains("runs")) {
          rule.runs.emplace();
          for (const json& r : j["runs"]) rule.runs->insert(r.get<std::size_t>());
        }
        provider->add_refusal_rule(std::move(rule));
      } else if (j.contains("default_label")) {
        provider->set_default_label(label_or_throw(j["default_label"], line_no));
      } else if (j.contains("fallback")) {
        provider->set_fallback_response(j["fallback"].get<std::string>());
      } else {
        throw ParseError(line_no, "unrecognized script rule");
      }
    } catch (const json::exception& e) {
      throw ParseError(line_no, e.what());
    }
  }
  return provider;
}

CompletionResponse ScriptedProvider::complete(const CompletionRequest& request) {
  ++calls_;
  const std::string hash = prompt_hash(request.prompt);
  if (auto it = replays_.find({hash, request.run_index}); it != replays_.end()) {
    return it->second;
  }
  if (auto it = replays_.find({hash, std::nullopt}); it != replays_.end()) {
    return it->second;
  }

  const std::vector<std::string> sentences = prompt_sentences(request.prompt);
  for (const RefusalRule& rule : refusal_rules_) {
    if (rule.runs && !rule.runs->count(request.run_index)) continue;
    bool hit = rule.contains.empty();
    for (const auto& s : sentences) {
      if (s.find(rule.contains) != std::string::npos) hit = true;
    }
    if (hit) return refusal_response(rule.kind);
  }
  if (sentences.empty()) return {CompletionStatus::kOk, fallback_, ""};

  std::vector<SentenceVerdict> verdicts;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    SentenceVerdict v{i, default_label_, "no scripted rule"};
    for (const LabelRule& rule : label_rules_) {
      if (sentences[i].find(rule.sentence) != std::string::npos) {
        v.label = rule.labels[request.run_index % rule.labels.size()];
        v.explanation = rule.explanation;
        break;
      }
    }
    verdicts.push_back(std::move(v));
  }
  return {CompletionStatus::kOk, format_verdicts(verdicts), ""};
}

CompletionResponse StochasticProvider::complete(const CompletionRequest& request) {
  const std::vector<std::string> sentences = prompt_sentences(request.prompt);
  if (sentences.empty()) return {CompletionStatus::kOk, "No.", ""};
  const std::uint64_t base =
      seed_ ^ fnv1a64(request.prompt) ^ splitmix64(request.run_index + 1);
  std::vector<SentenceVerdict> verdicts;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    Label label = truth_(sentences[i]).value_or(Label::kNotCoded);
    std::mt19937_64 rng(splitmix64(base + 0x9e3779b97f4a7c15ULL * (i + 1)));
    if (unit_interval(rng) < flip_probability_) {
      label = label == Label::kCoded ? Label::kNotCoded : Label::kCoded;
    }
    verdicts.push_back({i, label, "simulated verdict"});
  }
  return {CompletionStatus::kOk, format_verdicts(verdicts), ""};
}

}  // namespace dogwhistle
