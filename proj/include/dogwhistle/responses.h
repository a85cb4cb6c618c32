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

#ifndef DOGWHISTLE_RESPONSES_H_
#define DOGWHISTLE_RESPONSES_H_

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dogwhistle/provider.h"

namespace dogwhistle {

enum class Label { kCoded, kNotCoded };

std::string_view to_string(Label label);
std::optional<Label> parse_label(std::string_view text);

enum class RefusalKind { kBlocked, kDeclined, kMalformed, kTransport };

std::string_view to_string(RefusalKind kind);
std::optional<RefusalKind> parse_refusal_kind(std::string_view text);

enum class ParseConfidence { kHigh, kMedium, kLow };

std::string_view to_string(ParseConfidence confidence);

struct DetectionPrediction {
  bool presence = false;
  // Only set when presence is true.
  std::optional<std::string> identified_span;
  std::optional<std::string> definition_text;
  std::string raw;
  ParseConfidence confidence = ParseConfidence::kLow;
  // Multiple-choice answers (index into the gold choice set).
  std::optional<int> choice_index;
  // Set when the provider refused instead of answering.
  std::optional<RefusalKind> refusal;
};

// Reads a free-text detection answer. Never throws; an answer without a
// usable yes/no cue comes back with confidence kLow.
DetectionPrediction parse_detection_response(std::string_view raw);

struct SentenceVerdict {
  std::size_t sentence_index = 0;  // 0-based within the batch
  Label label = Label::kNotCoded;
  std::string explanation;

  bool operator==(const SentenceVerdict&) const = default;
};

struct RefusalSignal {
  RefusalKind kind = RefusalKind::kMalformed;
  std::string detail;
};

using DisambiguationParse = std::variant<std::vector<SentenceVerdict>, RefusalSignal>;

// Expects one "<n>. <label> - <explanation>" item per sentence. Anything
// other than exactly items 1..expected_count, each labeled once, is a
// refusal: kDeclined when the text reads as a refusal, else kMalformed.
// Never throws.
DisambiguationParse parse_disambiguation_response(std::string_view raw,
                                                  std::size_t expected_count);

// Decline phrasing such as "I cannot assist with this request".
bool reads_as_decline(std::string_view raw);

// Provider blocks -> kBlocked, transport failures -> kTransport, decline
// phrasing -> kDeclined, anything else -> kMalformed.
RefusalKind classify_refusal(const CompletionResponse& response);

}  // namespace dogwhistle

#endif  // DOGWHISTLE_RESPONSES_H_
