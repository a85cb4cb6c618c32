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

#include "dogwhistle/responses.h"

#include <algorithm>
#include <array>
#include <set>

#include "dogwhistle/text.h"

namespace dogwhistle {

std::string_view to_string(Label label) {
  return label == Label::kCoded ? "coded" : "not_coded";
}

std::optional<Label> parse_label(std::string_view text) {
  if (text == "coded") return Label::kCoded;
  if (text == "not_coded") return Label::kNotCoded;
  return std::nullopt;
}

std::string_view to_string(RefusalKind kind) {
  switch (kind) {
    case RefusalKind::kBlocked:
      return "blocked";
    case RefusalKind::kDeclined:
      return "declined";
    case RefusalKind::kMalformed:
      return "malformed";
    case RefusalKind::kTransport:
      return "transport";
  }
  return "malformed";
}

std::optional<RefusalKind> parse_refusal_kind(std::string_view text) {
  if (text == "blocked") return RefusalKind::kBlocked;
  if (text == "declined") return RefusalKind::kDeclined;
  if (text == "malformed") return RefusalKind::kMalformed;
  if (text == "transport") return RefusalKind::kTransport;
  return std::nullopt;
}

std::string_view to_string(ParseConfidence confidence) {
  switch (confidence) {
    case ParseConfidence::kHigh:
      return "high";
    case ParseConfidence::kMedium:
      return "medium";
    case ParseConfidence::kLow:
      return "low";
  }
  return "low";
}

namespace {

// ASCII lowercase; byte length preserved so offsets line up with raw.
std::string lower_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c + 32);
  }
  return out;
}

// Lowercase with U+2019 folded to an ASCII apostrophe, for phrase lookup.
std::string phrase_key(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s.substr(i, 3) == "\xE2\x80\x99") {
      out.push_back('\'');
      i += 2;
      continue;
    }
    char c = s[i];
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c + 32);
    out.push_back(c);
  }
  return out;
}

bool is_alnum(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9');
}

bool starts_with_word(std::string_view text, std::string_view word) {
  return text.substr(0, word.size()) == word &&
         (text.size() == word.size() || !is_alnum(text[word.size()]));
}

std::size_t find_earliest(std::string_view haystack,
                          std::initializer_list<std::string_view> needles,
                          std::size_t from, std::size_t* length) {
  std::size_t best = std::string_view::npos;
  for (std::string_view n : needles) {
    const std::size_t p = haystack.find(n, from);
    if (p < best) {
      best = p;
      if (length) *length = n.size();
    }
  }
  return best;
}

struct Quoted {
  std::size_t begin;  // content start
  std::size_t end;    // content end
  std::size_t after;  // first byte after the closing quote
};

std::optional<Quoted> find_quoted(std::string_view raw, std::size_t from) {
  constexpr std::size_t kMaxSpan = 120;
  const std::size_t n = raw.size();
  for (std::size_t i = from; i < n; ++i) {
    std::string_view open;
    std::string_view close;
    bool apostrophe_like = false;
    if (raw[i] == '"') {
      open = "\"";
      close = "\"";
    } else if (raw.substr(i, 3) == "\xE2\x80\x9C") {
      open = "\xE2\x80\x9C";
      close = "\xE2\x80\x9D";
    } else if (raw[i] == '\'' && (i == 0 || !is_alnum(raw[i - 1]))) {
      open = "'";
      close = "'";
      apostrophe_like = true;
    } else if (raw.substr(i, 3) == "\xE2\x80\x98") {
      open = "\xE2\x80\x98";
      close = "\xE2\x80\x99";
      apostrophe_like = true;
    } else {
      continue;
    }
    const std::size_t begin = i + open.size();
    std::size_t j = begin;
    while (true) {
      j = raw.find(close, j);
      if (j == std::string_view::npos) break;
      const std::size_t after = j + close.size();
      if (!apostrophe_like || after >= n || !is_alnum(raw[after])) break;
      j = after;
    }
    if (j == std::string_view::npos) continue;
    const std::string_view content = raw.substr(begin, j - begin);
    if (content.empty() || content.size() > kMaxSpan ||
        content.find('\n') != std::string_view::npos) {
      continue;
    }
    return Quoted{begin, j, j + close.size()};
  }
  return std::nullopt;
}

std::string strip_leading(std::string_view s, std::string_view chars) {
  std::size_t b = 0;
  while (b < s.size() &&
         (chars.find(s[b]) != std::string_view::npos ||
          is_space(static_cast<unsigned char>(s[b])))) {
    ++b;
  }
  // En/em dashes.
  while (s.substr(b, 3) == "\xE2\x80\x93" || s.substr(b, 3) == "\xE2\x80\x94") {
    b += 3;
    while (b < s.size() && is_space(static_cast<unsigned char>(s[b]))) ++b;
  }
  return std::string(trim(s.substr(b)));
}

}  // namespace

bool reads_as_decline(std::string_view raw) {
  static constexpr std::array<std::string_view, 22> kPhrases = {
      "i cannot",          "i can't",           "i can not",
      "i'm unable",        "i am unable",       "i'm not able",
      "i am not able",     "i won't",           "i will not",
      "unable to assist",  "unable to help",    "cannot assist",
      "can't assist",      "can't help",        "cannot help",
      "not comfortable",   "i apologize",       "i'm sorry, but",
      "i am sorry, but",   "as an ai",          "unable to comply",
      "cannot comply"};
  const std::string key = phrase_key(raw);
  return std::any_of(kPhrases.begin(), kPhrases.end(), [&](std::string_view p) {
    return key.find(p) != std::string::npos;
  });
}

RefusalKind classify_refusal(const CompletionResponse& response) {
  switch (response.status) {
    case CompletionStatus::kBlocked:
      return RefusalKind::kBlocked;
    case CompletionStatus::kTransportError:
      return RefusalKind::kTransport;
    case CompletionStatus::kOk:
      break;
  }
  return reads_as_decline(response.text) ? RefusalKind::kDeclined
                                         : RefusalKind::kMalformed;
}

DetectionPrediction parse_detection_response(std::string_view raw) {
  DetectionPrediction pred;
  pred.raw = std::string(raw);
  const std::string lower = lower_ascii(raw);
  std::string_view head = trim(lower);
  while (!head.empty() && (head.front() == '*' || head.front() == '#' ||
                           head.front() == '>')) {
    head.remove_prefix(1);
  }
  head = trim(head);
  if (head.substr(0, 7) == "answer:") head = trim(head.substr(7));
  if (head.empty()) {
    pred.confidence = ParseConfidence::kLow;
    return pred;
  }

  if (starts_with_word(head, "yes")) {
    pred.presence = true;
    pred.confidence = ParseConfidence::kHigh;
  } else if (starts_with_word(head, "no")) {
    pred.presence = false;
    pred.confidence = ParseConfidence::kHigh;
  } else {
    const std::string key = phrase_key(raw);
    const std::size_t neg = find_earliest(
        key,
        {"does not contain", "doesn't contain", "no dog whistle",
         "no dogwhistle", "not contain a dog", "there is no", "not present",
         "no coded"},
        0, nullptr);
    const std::size_t pos = find_earliest(
        key,
        {"contains a dog whistle", "contains a dogwhistle", "dog whistle is",
         "dogwhistle is", "is a dog whistle", "is a dogwhistle",
         "dog whistle here", "dog whistle present", "contains the dog whistle"},
        0, nullptr);
    if (neg == std::string::npos && pos == std::string::npos) {
      pred.confidence = ParseConfidence::kLow;
      return pred;
    }
    pred.presence = pos < neg;
    pred.confidence = ParseConfidence::kMedium;
  }
  if (!pred.presence) return pred;

  std::size_t cue_len = 0;
  std::size_t cue = find_earliest(
      lower, {"dog whistle is", "dogwhistle is", "dog whistle here is",
              "dog whistle in this sentence is", "the dog whistle"},
      0, &cue_len);
  std::optional<Quoted> quoted =
      find_quoted(raw, cue == std::string::npos ? 0 : cue + cue_len);
  if (!quoted && cue != std::string::npos) quoted = find_quoted(raw, 0);
  if (!quoted) return pred;
  pred.identified_span =
      std::string(trim(raw.substr(quoted->begin, quoted->end - quoted->begin)));

  std::size_t def_len = 0;
  const std::size_t def = find_earliest(
      lower, {"meaning", "means", "refers to", "which is", "implies",
              "is used to", "signals", "suggests"},
      quoted->after, &def_len);
  std::string definition;
  if (def != std::string::npos) {
    definition = strip_leading(raw.substr(def + def_len), ",:;-");
    if (definition.substr(0, 5) == "that ") definition = definition.substr(5);
  } else {
    definition = strip_leading(raw.substr(quoted->after), ",.:;-");
  }
  if (!definition.empty()) pred.definition_text = std::move(definition);
  return pred;
}

namespace {

struct ItemBlock {
  std::size_t number;
  std::string text;
};

// "<n>." / "<n>)" / "<n>:" / "[<n>]" / "Sentence <n>:" at line start.
std::optional<ItemBlock> parse_item_line(std::string_view line) {
  std::string cleaned;
  cleaned.reserve(line.size());
  for (char c : line) {
    if (c != '*') cleaned.push_back(c);
  }
  std::string_view s = trim(cleaned);
  while (!s.empty() && (s.front() == '>' || s.front() == '#')) s.remove_prefix(1);
  s = trim(s);
  const std::string lower = lower_ascii(s.substr(0, 9));
  if (lower.substr(0, 8) == "sentence") s = trim(s.substr(8));
  bool bracket = false;
  if (!s.empty() && (s.front() == '[' || s.front() == '(')) {
    bracket = true;
    s.remove_prefix(1);
  }
  std::size_t digits = 0;
  std::size_t number = 0;
  while (digits < s.size() && digits < 4 && s[digits] >= '0' && s[digits] <= '9') {
    number = number * 10 + static_cast<std::size_t>(s[digits] - '0');
    ++digits;
  }
  if (digits == 0 || digits > 3) return std::nullopt;
  s.remove_prefix(digits);
  if (s.empty()) return std::nullopt;
  const char sep = s.front();
  if (bracket ? (sep != ']' && sep != ')')
              : (sep != '.' && sep != ')' && sep != ':' && sep != '-')) {
    return std::nullopt;
  }
  s.remove_prefix(1);
  if (!s.empty() && (s.front() == '.' || s.front() == ':')) s.remove_prefix(1);
  return ItemBlock{number, std::string(trim(s))};
}

std::optional<SentenceVerdict> verdict_from_block(const ItemBlock& block) {
  const std::string lower = lower_ascii(block.text);
  std::size_t from = 0;
  if (const std::size_t label = lower.find("label"); label != std::string::npos) {
    from = label + 5;
  }
  std::size_t neg_len = 0;
  const std::size_t neg = find_earliest(
      lower,
      {"not coded", "not_coded", "not-coded", "non-coded", "noncoded",
       "non coded", "uncoded", "not a dog whistle", "innocuous"},
      from, &neg_len);
  const std::size_t pos = lower.find("coded", from);
  if (neg == std::string::npos && pos == std::string::npos) return std::nullopt;

  SentenceVerdict v;
  v.sentence_index = block.number - 1;
  std::size_t cut;
  if (neg != std::string::npos && neg <= pos) {
    v.label = Label::kNotCoded;
    cut = neg + neg_len;
  } else {
    v.label = Label::kCoded;
    cut = pos + 5;
  }
  v.explanation = strip_leading(std::string_view(block.text).substr(cut), "-:|.,)]");
  return v;
}

}  // namespace

DisambiguationParse parse_disambiguation_response(std::string_view raw,
                                                  std::size_t expected_count) {
  auto refuse = [&](std::string detail) -> DisambiguationParse {
    return RefusalSignal{reads_as_decline(raw) ? RefusalKind::kDeclined
                                               : RefusalKind::kMalformed,
                         std::move(detail)};
  };
  if (trim(raw).empty()) return refuse("empty response");

  std::vector<ItemBlock> blocks;
  std::size_t pos = 0;
  while (pos <= raw.size()) {
    std::size_t nl = raw.find('\n', pos);
    if (nl == std::string_view::npos) nl = raw.size();
    const std::string_view line = raw.substr(pos, nl - pos);
    if (auto item = parse_item_line(line)) {
      blocks.push_back(std::move(*item));
    } else if (!blocks.empty() && !trim(line).empty()) {
      blocks.back().text += "\n";
      blocks.back().text += std::string(trim(line));
    }
    pos = nl + 1;
  }

  if (blocks.size() != expected_count) {
    return refuse("expected " + std::to_string(expected_count) +
                  " items, found " + std::to_string(blocks.size()));
  }
  std::vector<SentenceVerdict> verdicts(expected_count);
  std::set<std::size_t> seen;
  for (const ItemBlock& b : blocks) {
    if (b.number < 1 || b.number > expected_count || !seen.insert(b.number).second) {
      return refuse("bad or repeated item number " + std::to_string(b.number));
    }
    auto v = verdict_from_block(b);
    if (!v) return refuse("item " + std::to_string(b.number) + " has no label");
    verdicts[b.number - 1] = std::move(*v);
  }
  return verdicts;
}

}  // namespace dogwhistle
