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

#ifndef DOGWHISTLE_CORPUS_H_
#define DOGWHISTLE_CORPUS_H_

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dogwhistle/date.h"

namespace dogwhistle {

enum class DocumentKind { kFormal, kInformal };
enum class Chamber { kHouse, kSenate };

std::string_view to_string(DocumentKind kind);
std::optional<DocumentKind> parse_document_kind(std::string_view text);
std::string_view to_string(Chamber chamber);
std::optional<Chamber> parse_chamber(std::string_view text);

// One speech or post. Formal documents carry speaker/chamber/party and no
// community; informal documents carry a community and none of the others.
struct Document {
  std::string doc_id;
  DocumentKind kind = DocumentKind::kInformal;
  std::string text;
  Date date;
  std::optional<std::string> speaker;
  std::optional<Chamber> chamber;
  std::optional<std::string> party;
  std::optional<std::string> community;

  bool operator==(const Document&) const = default;
};

// Half-open byte range.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const { return end - begin; }
  bool operator==(const Span&) const = default;
};

struct ReaderOptions {
  Date min_date{1900, 1, 1};
  Date max_date = Date::today();
};

struct ReaderStats {
  std::size_t lines = 0;
  std::size_t yielded = 0;
  std::size_t skipped = 0;
  // The first few skip reasons, for diagnostics.
  std::vector<std::string> warnings;
};

// Checks one corpus line against the record schema. Returns the reason for
// rejection in *why when it returns nullopt.
std::optional<Document> parse_document(std::string_view line,
                                       DocumentKind kind,
                                       const ReaderOptions& options,
                                       std::string* why = nullptr);

std::string document_to_json(const Document& doc);

// Lazily reads newline-delimited documents of one kind. Lines that violate
// the schema are skipped and counted; blank lines are ignored.
class DocumentReader {
 public:
  DocumentReader(const std::filesystem::path& path, DocumentKind kind,
                 ReaderOptions options = {});

  std::optional<Document> next();
  const ReaderStats& stats() const { return stats_; }

 private:
  std::ifstream in_;
  DocumentKind kind_;
  ReaderOptions options_;
  ReaderStats stats_;
};

// Throws Error(kIo) when the file cannot be opened.
DocumentReader read_documents(const std::filesystem::path& path,
                              DocumentKind kind, ReaderOptions options = {});

// Sentence spans over text. Spans are ordered, disjoint, trimmed, and
// together cover every non-whitespace byte. Terminators are . ! ? (runs
// count once); a period after a known abbreviation does not end a
// sentence, and nothing inside a double-quoted span does.
std::vector<Span> segment_sentences(std::string_view text);

enum class ExcerptPolicy {
  kSentenceWindow,  // matched sentence plus one on each side
  kWholeText,
};

ExcerptPolicy excerpt_policy_for(DocumentKind kind);

struct Excerpt {
  std::string doc_id;
  std::string text;
  std::size_t first_sentence = 0;
  std::size_t last_sentence = 0;
  Span char_span;
};

// Throws Error(kData) when match lies outside doc.text.
Excerpt excerpt_around(const Document& doc, Span match, ExcerptPolicy policy);

// Same, reusing spans from segment_sentences(doc.text).
Excerpt excerpt_around(const Document& doc, const std::vector<Span>& sentences,
                       Span match, ExcerptPolicy policy);

}  // namespace dogwhistle

#endif  // DOGWHISTLE_CORPUS_H_
