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

#ifndef DOGWHISTLE_EVALUATION_H_
#define DOGWHISTLE_EVALUATION_H_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dogwhistle/ensemble.h"
#include "dogwhistle/glossary.h"
#include "dogwhistle/responses.h"
#include "json.hpp"

namespace dogwhistle {

struct ChoiceOption {
  std::string term;
  std::string definition;
};

inline constexpr std::size_t kChoiceSetSize = 7;

struct DetectionGold {
  std::string text;
  bool has_dw = false;
  std::optional<std::string> gold_entry_id;  // required when has_dw
  // Multiple-choice options, one of them a "not sure / not present"
  // sentinel; empty when the item has no choice set.
  std::vector<ChoiceOption> choice_set;
  std::optional<int> correct_choice;
};

struct DisambiguationGold {
  std::string entry_id;
  std::vector<std::string> sentences;
  std::vector<Label> labels;
};

struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;
  std::size_t discarded = 0;
  std::size_t refused = 0;

  std::size_t scored() const { return tp + fp + tn + fn; }
  std::size_t total() const { return scored() + discarded + refused; }
};

// Rates are in [0, 1]; a rate with an empty denominator is 0.
struct MetricsReport {
  double accuracy = 0;
  double f1 = 0;
  double precision_1 = 0;
  double recall_1 = 0;
  double retention = 0;
  ConfusionCounts counts;
};

double f1_score(double precision, double recall);

// Binary presence scoring, positive = dog whistle present. Refused
// predictions are counted separately and left out of every denominator
// except retention. Throws Error(kData) when the lists differ in length.
MetricsReport score_presence(const std::vector<DetectionGold>& gold,
                             const std::vector<DetectionPrediction>& preds);

// Correct iff presence is correct and, for positives, the identified span
// normalizes to the gold entry's term or one of its surface forms. A gold
// positive predicted present but misidentified counts as a false negative.
MetricsReport score_identification(const std::vector<DetectionGold>& gold,
                                   const std::vector<DetectionPrediction>& preds,
                                   const Glossary& glossary);

enum class DefinitionMode { kChoice, kGraded };

// Definition scoring on top of identification. Choice mode compares the
// chosen option with correct_choice. Graded mode takes human grades aligned
// with gold (2 correct, 1 incomplete, 0 incorrect); a grade is required for
// every gold positive whose identification is correct. Incomplete counts
// as correct only when lenient is set.
MetricsReport score_definition(const std::vector<DetectionGold>& gold,
                               const std::vector<DetectionPrediction>& preds,
                               const Glossary& glossary, DefinitionMode mode,
                               const std::vector<std::optional<int>>& grades = {},
                               bool lenient = false);

// Positive class = coded. Precision is over retained predictions; recall is
// over every gold-coded sentence, so discarded and refused coded sentences
// count as misses.
MetricsReport score_disambiguation(
    const std::vector<DisambiguationGold>& gold,
    const std::vector<std::vector<EnsembleOutcome>>& outcomes);

// True when span names the entry (term or surface form, normalized, with
// surrounding quotes and punctuation ignored).
bool span_names_entry(std::string_view span, const GlossaryEntry& entry);

// ---------------------------------------------------------------------------
// File formats.

std::vector<DetectionGold> load_detection_gold(const std::filesystem::path& path);
std::vector<DisambiguationGold> load_disambiguation_gold(
    const std::filesystem::path& path);

// Interprets one detection completion; non-ok statuses and bare declines
// become refusals.
DetectionPrediction prediction_from_response(const CompletionResponse& response);

// Stored responses: {"raw": "...", "status": "ok", "choice": 2}, one per
// gold item. Non-ok statuses and bare declines become refusals.
DetectionPrediction prediction_from_record(const nlohmann::json& record);
std::vector<DetectionPrediction> load_detection_responses(
    const std::filesystem::path& path);

// Grades file: delimiter-separated with header "index,grade"; rows may be
// in any order, blank grades mean "not graded".
std::vector<std::optional<int>> load_grades(const std::filesystem::path& path,
                                            std::size_t count);

nlohmann::json to_json(const MetricsReport& report);

struct DetectionReport {
  MetricsReport presence;
  MetricsReport identification;
  std::optional<MetricsReport> definition;
};

// Tier rows (Acc / F1, in percent) in the layout of the detection results
// table.
std::string format_detection_table(const DetectionReport& report,
                                   const std::string& column);
nlohmann::json to_json(const DetectionReport& report);

struct EnsembleReportRow {
  int n = 1;
  MetricsReport metrics;
};

// One row per ensemble size: precision-1, recall-1, retention.
std::string format_ensemble_table(const std::vector<EnsembleReportRow>& rows);
nlohmann::json to_json(const std::vector<EnsembleReportRow>& rows);

}  // namespace dogwhistle

#endif  // DOGWHISTLE_EVALUATION_H_
