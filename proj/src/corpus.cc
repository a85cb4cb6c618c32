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

#include "dogwhistle/corpus.h"

#include <algorithm>
#include <array>

#include "dogwhistle/error.h"
#include "dogwhistle/text.h"
#include "json.hpp"

namespace dogwhistle {

using nlohmann::json;

std::string_view to_string(DocumentKind kind) {
  return kind == DocumentKind::kFormal ? "formal" : "informal";
}

std::optional<DocumentKind> parse_document_kind(std::string_view text) {
  if (text == "formal") return DocumentKind::kFormal;
  if (text == "informal") return DocumentKind::kInformal;
  return std::nullopt;
}

std::string_view to_string(Chamber chamber) {
  return chamber == Chamber::kHouse ? "House" : "Senate";
}

std::optional<Chamber> parse_chamber(std::string_view text) {
  if (text == "House") return Chamber::kHouse;
  if (text == "Senate") return Chamber::kSenate;
  return std::nullopt;
}

namespace {

constexpr std::size_t kMaxWarnings = 20;

std::optional<std::string> optional_string(const json& record,
                                           const char* field, bool* bad) {
  auto it = record.find(field);
  if (it == record.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) {
    *bad = true;
    return std::nullopt;
  }
  return it->get<std::string>();
}

}  // namespace

std::optional<Document> parse_document(std::string_view line,
                                       DocumentKind kind,
                                       const ReaderOptions& options,
                                       std::string* why) {
  auto reject = [why](const char* reason) -> std::optional<Document> {
    if (why) *why = reason;
    return std::nullopt;
  };
  json record = json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (record.is_discarded()) return reject("invalid JSON");
  if (!record.is_object()) return reject("record is not an object");

  Document doc;
  doc.kind = kind;
  auto id = record.find("doc_id");
  if (id == record.end() || !id->is_string() || id->get<std::string>().empty())
    return reject("missing doc_id");
  doc.doc_id = id->get<std::string>();

  auto k = record.find("kind");
  if (k != record.end()) {
    if (!k->is_string()) return reject("bad kind");
    auto parsed = parse_document_kind(k->get<std::string>());
    if (!parsed || *parsed != kind) return reject("kind mismatch");
  }

  auto text = record.find("text");
  if (text == record.end() || !text->is_string()) return reject("missing text");
  doc.text = text->get<std::string>();

  auto date = record.find("date");
  if (date == record.end() || !date->is_string()) return reject("missing date");
  auto parsed_date = Date::parse(date->get<std::string>());
  if (!parsed_date) return reject("unparseable date");
  if (*parsed_date < options.min_date || *parsed_date > options.max_date)
    return reject("date out of range");
  doc.date = *parsed_date;

  bool bad = false;
  doc.speaker = optional_string(record, "speaker", &bad);
  doc.party = optional_string(record, "party", &bad);
  doc.community = optional_string(record, "community", &bad);
  auto chamber = optional_string(record, "chamber", &bad);
  if (bad) return reject("non-string metadata field");
  if (chamber) {
    doc.chamber = parse_chamber(*chamber);
    if (!doc.chamber) return reject("unknown chamber");
  }

  if (kind == DocumentKind::kFormal && doc.community)
    return reject("formal document with community");
  if (kind == DocumentKind::kInformal &&
      (doc.speaker || doc.chamber || doc.party))
    return reject("informal document with speaker/chamber/party");
  return doc;
}

std::string document_to_json(const Document& doc) {
  json record = {{"doc_id", doc.doc_id},
                 {"kind", to_string(doc.kind)},
                 {"text", doc.text},
                 {"date", doc.date.to_string()}};
  if (doc.speaker) record["speaker"] = *doc.speaker;
  if (doc.chamber) record["chamber"] = to_string(*doc.chamber);
  if (doc.party) record["party"] = *doc.party;
  if (doc.community) record["community"] = *doc.community;
  return record.dump(-1, ' ', false, json::error_handler_t::replace);
}

DocumentReader::DocumentReader(const std::filesystem::path& path,
                               DocumentKind kind, ReaderOptions options)
    : in_(path), kind_(kind), options_(options) {
  if (!in_) throw Error(ErrorKind::kIo, "cannot open corpus " + path.string());
}

std::optional<Document> DocumentReader::next() {
  std::string line;
  while (std::getline(in_, line)) {
    ++stats_.lines;
    if (trim(line).empty()) continue;
    std::string why;
    auto doc = parse_document(line, kind_, options_, &why);
    if (doc) {
      ++stats_.yielded;
      return doc;
    }
    ++stats_.skipped;
    if (stats_.warnings.size() < kMaxWarnings) {
      stats_.warnings.push_back("line " + std::to_string(stats_.lines) +
                                ": " + why);
    }
  }
  return std::nullopt;
}

DocumentReader read_documents(const std::filesystem::path& path,
                              DocumentKind kind, ReaderOptions options) {
  return DocumentReader(path, kind, options);
}

// ---------------------------------------------------------------------------
// Sentence segmentation.

namespace {

constexpr std::array<std::string_view, 34> kAbbreviations = {
    "mr",   "mrs",  "ms",   "dr",   "prof", "sen",  "rep",  "gov",  "gen",
    "col",  "lt",   "sgt",  "capt", "st",   "jr",   "sr",   "vs",   "etc",
    "inc",  "ltd",  "co",   "corp", "no",   "mt",   "hon",  "rev",  "e.g",
    "i.e",  "u.s",  "u.k",  "u.n",  "a.m",  "p.m",  "messrs"};

bool is_terminator(char c) { return c == '.' || c == '!' || c == '?'; }

// U+201C / U+201D.
bool is_curly_open(std::string_view t, std::size_t i) {
  return t.substr(i, 3) == "\xE2\x80\x9C";
}
bool is_curly_close(std::string_view t, std::size_t i) {
  return t.substr(i, 3) == "\xE2\x80\x9D";
}

bool follows_abbreviation(std::string_view text, std::size_t period) {
  std::size_t b = period;
  while (b > 0 && !is_space(static_cast<unsigned char>(text[b - 1]))) --b;
  std::string word;
  for (std::size_t i = b; i < period; ++i) {
    const char c = text[i];
    if (word.empty() && (c == '(' || c == '"' || c == '\'' || c == '['))
      continue;
    word.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c + 32) : c);
  }
  return std::find(kAbbreviations.begin(), kAbbreviations.end(), word) !=
         kAbbreviations.end();
}

std::size_t skip_space(std::string_view text, std::size_t i) {
  while (i < text.size() && is_space(static_cast<unsigned char>(text[i]))) ++i;
  return i;
}

}  // namespace

std::vector<Span> segment_sentences(std::string_view text) {
  std::vector<Span> spans;
  const std::size_t n = text.size();
  std::size_t start = skip_space(text, 0);
  bool in_quote = false;
  std::size_t i = start;
  while (i < n) {
    const char c = text[i];
    if (c == '"') {
      in_quote = !in_quote;
      ++i;
      continue;
    }
    if (is_curly_open(text, i)) {
      in_quote = true;
      i += 3;
      continue;
    }
    if (is_curly_close(text, i)) {
      in_quote = false;
      i += 3;
      continue;
    }
    if (!is_terminator(c)) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < n && is_terminator(text[j])) ++j;
    const bool lone_period = (j - i == 1 && c == '.');
    // Closing punctuation belongs to the sentence it closes.
    bool closed = true;
    while (closed && j < n) {
      if (text[j] == ')' || text[j] == ']' || text[j] == '\'') {
        ++j;
      } else if (text[j] == '"' && in_quote) {
        in_quote = false;
        ++j;
      } else if (is_curly_close(text, j)) {
        in_quote = false;
        j += 3;
      } else if (text.substr(j, 3) == "\xE2\x80\x99") {  // U+2019
        j += 3;
      } else {
        closed = false;
      }
    }
    const bool at_break = j == n || is_space(static_cast<unsigned char>(text[j]));
    if (at_break && !in_quote &&
        !(lone_period && follows_abbreviation(text, i))) {
      spans.push_back({start, j});
      start = skip_space(text, j);
      i = start;
    } else {
      i = j;
    }
  }
  if (start < n) {
    std::size_t end = n;
    while (end > start && is_space(static_cast<unsigned char>(text[end - 1])))
      --end;
    if (end > start) spans.push_back({start, end});
  }
  return spans;
}

ExcerptPolicy excerpt_policy_for(DocumentKind kind) {
  return kind == DocumentKind::kFormal ? ExcerptPolicy::kSentenceWindow
                                       : ExcerptPolicy::kWholeText;
}

Excerpt excerpt_around(const Document& doc, Span match, ExcerptPolicy policy) {
  return excerpt_around(doc, segment_sentences(doc.text), match, policy);
}

Excerpt excerpt_around(const Document& doc, const std::vector<Span>& sentences,
                       Span match, ExcerptPolicy policy) {
  if (match.begin >= match.end || match.end > doc.text.size()) {
    throw Error(ErrorKind::kData, "match span out of bounds in document '" +
                                      doc.doc_id + "'");
  }
  Excerpt ex;
  ex.doc_id = doc.doc_id;
  if (policy == ExcerptPolicy::kWholeText || sentences.empty()) {
    ex.text = doc.text;
    ex.char_span = {0, doc.text.size()};
    ex.first_sentence = 0;
    ex.last_sentence = sentences.empty() ? 0 : sentences.size() - 1;
    return ex;
  }
  // Sentence holding a byte offset; offsets in inter-sentence whitespace
  // resolve to the preceding sentence.
  auto sentence_of = [&](std::size_t pos) -> std::size_t {
    auto it = std::upper_bound(
        sentences.begin(), sentences.end(), pos,
        [](std::size_t p, const Span& s) { return p < s.begin; });
    return it == sentences.begin() ? 0 : std::size_t(it - sentences.begin()) - 1;
  };
  const std::size_t first = sentence_of(match.begin);
  const std::size_t last = sentence_of(match.end - 1);
  std::size_t lo = first > 0 ? first - 1 : 0;
  std::size_t hi = std::min(last + 1, sentences.size() - 1);
  if (hi - lo + 1 > 3) hi = std::max(last, lo + 2);
  if (hi - lo + 1 > 3) lo = first;
  ex.first_sentence = lo;
  ex.last_sentence = hi;
  ex.char_span = {sentences[lo].begin, sentences[hi].end};
  ex.text = doc.text.substr(ex.char_span.begin, ex.char_span.size());
  return ex;
}

}  // namespace dogwhistle
