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

#ifndef DOGWHISTLE_INSTANCES_H_
#define DOGWHISTLE_INSTANCES_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dogwhistle/corpus.h"
#include "dogwhistle/glossary.h"
#include "dogwhistle/matcher.h"
#include "json.hpp"

namespace dogwhistle {

// One keyword-matched excerpt. all_matches holds the triggering match
// first, then every other glossary match inside the excerpt in
// left-to-right order; spans are relative to excerpt.
struct PotentialInstance {
  std::string instance_id;
  std::string doc_id;
  DocumentKind kind = DocumentKind::kInformal;
  std::string excerpt;
  Span excerpt_span;  // within the source document
  std::string matched_term;  // glossary entry id
  std::string matched_surface_form;
  std::vector<Match> all_matches;
  Date date;
  std::optional<std::string> speaker;
  std::optional<Chamber> chamber;
  std::optional<std::string> party;
  std::optional<std::string> community;

  bool operator==(const PotentialInstance&) const = default;
};

nlohmann::json to_json(const PotentialInstance& instance);
// Throws ParseError (line 0) on schema violations.
PotentialInstance instance_from_json(const nlohmann::json& record);

// Which matches survive into the instance stream, per document kind.
struct SamplingPolicy {
  struct PerKind {
    std::set<std::string> excluded;              // entry ids
    std::map<std::string, double> keep_probability;  // entry id -> (0, 1]
  };
  PerKind formal;
  PerKind informal;
  std::uint64_t seed = 0;
  // Names in the policy file that matched no glossary entry.
  std::vector<std::string> unresolved;

  const PerKind& for_kind(DocumentKind kind) const {
    return kind == DocumentKind::kFormal ? formal : informal;
  }
  bool excluded(DocumentKind kind, const std::string& entry_id) const;
  double keep_probability(DocumentKind kind,
                          const std::string& entry_id) const;
};

// Policy file (JSON):
//   {"seed": 7,
//    "formal":   {"exclude": ["federal reserve", ...], "downsample": {}},
//    "informal": {"exclude": [], "downsample": {"based": 0.05}}}
// Names resolve to entries by id or by normalized term. Throws
// Error(kConfig) on bad structure or a probability outside (0, 1].
SamplingPolicy parse_sampling_policy(const nlohmann::json& config,
                                     const Glossary& glossary);
SamplingPolicy load_sampling_policy(const std::filesystem::path& path,
                                    const Glossary& glossary);

struct EntryCounts {
  std::size_t matches = 0;
  std::size_t emitted = 0;
};

struct ExtractionStats {
  std::size_t documents = 0;
  std::size_t matches = 0;
  std::size_t emitted = 0;
  std::size_t excluded = 0;
  std::size_t downsampled = 0;
  std::map<std::string, EntryCounts> per_entry;

  void merge(const ExtractionStats& other);
  nlohmann::json to_json() const;
};

// Per-document random stream; keyed by doc id so results do not depend
// on document order or worker count.
std::uint64_t document_seed(std::uint64_t policy_seed, const std::string& doc_id);

struct DocumentInstances {
  std::vector<PotentialInstance> instances;
  ExtractionStats stats;
};

DocumentInstances extract_from_document(const PatternSet& patterns,
                                        const Document& doc,
                                        const SamplingPolicy& policy);

// Pulls documents from next_doc until it returns nullopt, scanning them on
// up to `workers` threads, and hands instances to emit in input order.
ExtractionStats extract_potential_instances(
    const PatternSet& patterns,
    const std::function<std::optional<Document>()>& next_doc,
    const SamplingPolicy& policy,
    const std::function<void(const PotentialInstance&)>& emit,
    std::size_t workers = 1);

}  // namespace dogwhistle

#endif  // DOGWHISTLE_INSTANCES_H_
