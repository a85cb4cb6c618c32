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

#ifndef DOGWHISTLE_DATASET_H_
#define DOGWHISTLE_DATASET_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dogwhistle/corpus.h"
#include "dogwhistle/ensemble.h"
#include "dogwhistle/glossary.h"
#include "dogwhistle/instances.h"
#include "dogwhistle/matcher.h"
#include "json.hpp"

namespace dogwhistle {

// Ensemble verdict for one potential instance, as written by the
// disambiguation stage.
struct InstanceOutcome {
  std::string instance_id;
  std::string entry_id;
  OutcomeStatus status = OutcomeStatus::kRefused;
  std::optional<Label> label;  // set iff retained
  std::string explanation;
  std::optional<RefusalKind> refusal;  // set iff refused
  int n = 1;
  std::string provider;

  bool operator==(const InstanceOutcome&) const = default;
};

nlohmann::json to_json(const InstanceOutcome& outcome);
InstanceOutcome outcome_from_json(const nlohmann::json& record);
std::vector<InstanceOutcome> load_outcomes(const std::filesystem::path& path);

struct Provenance {
  std::string instance_id;
  int n = 1;
  std::string provider;

  bool operator==(const Provenance&) const = default;
};

struct SilentSignalRecord {
  std::string record_id;
  std::string content;
  std::string dog_whistle;  // glossary entry id
  std::string dog_whistle_definition;
  DocumentKind type = DocumentKind::kInformal;
  std::string in_group;
  Date date;
  std::optional<Chamber> chamber;
  std::optional<std::string> speaker;
  std::optional<std::string> party;
  std::optional<std::string> community;
  Provenance provenance;

  bool operator==(const SilentSignalRecord&) const = default;
};

// Stable across runs: hex of fnv1a64(instance_id, 0x1f, entry_id).
std::string make_record_id(const std::string& instance_id,
                           const std::string& entry_id);

nlohmann::json to_json(const SilentSignalRecord& record);
SilentSignalRecord record_from_json(const nlohmann::json& record);

void write_records(std::ostream& out, const std::vector<SilentSignalRecord>& records);
std::vector<SilentSignalRecord> read_records(std::istream& in);
std::vector<SilentSignalRecord> load_records(const std::filesystem::path& path);

struct AssemblySummary {
  std::size_t outcomes = 0;
  std::size_t records = 0;
  std::size_t formal = 0;
  std::size_t informal = 0;
  std::size_t retained_not_coded = 0;
  std::size_t discarded = 0;
  std::size_t refused = 0;
  std::size_t distinct_dog_whistles = 0;
  std::size_t distinct_surface_forms = 0;

  nlohmann::json to_json() const;
};

// Turns retained coded outcomes into records, in outcome order. Every
// retained outcome must join to exactly one instance with the same entry
// id; otherwise throws Error(kData) naming the orphan ids.
std::vector<SilentSignalRecord> assemble_records(
    const std::vector<InstanceOutcome>& outcomes,
    const std::vector<PotentialInstance>& instances, const Glossary& glossary,
    AssemblySummary* summary = nullptr);

// Referential integrity and surface-form containment against a glossary.
class RecordChecker {
 public:
  explicit RecordChecker(const Glossary& glossary);

  // Empty when the record is sound, else a description of the problem.
  std::optional<std::string> check(const SilentSignalRecord& record) const;

 private:
  const Glossary& glossary_;
  PatternSet patterns_;
};

struct DedupResult {
  std::vector<SilentSignalRecord> records;
  std::size_t removed = 0;
};

// Records equal in content, dog whistle, date, type and source fields
// collapse to the one with the lowest record_id. Survivors keep their
// original relative order.
DedupResult deduplicate(const std::vector<SilentSignalRecord>& records);

// Uniform sample of k records without replacement, ordered by record_id.
// Throws Error(kUsage) when k exceeds the record count.
std::vector<SilentSignalRecord> sample_for_validation(
    const std::vector<SilentSignalRecord>& records, std::size_t k,
    std::uint64_t seed);

enum class Judgment { kCodedMatch, kCodedNovelSense, kNotCoded };

std::string_view to_string(Judgment judgment);
std::optional<Judgment> parse_judgment(std::string_view text);

struct ValidationLabel {
  std::string record_id;
  std::optional<Judgment> judgment;  // unset while unlabeled
  std::string note;
};

// Spreadsheet manifest: record_id, dog_whistle, definition, type, date,
// content, then blank judgment and note columns for annotators. The label
// file is the same table with those columns filled in.
void write_validation_manifest(std::ostream& out,
                               const std::vector<SilentSignalRecord>& sample);
std::vector<ValidationLabel> read_validation_labels(std::istream& in);
std::vector<ValidationLabel> load_validation_labels(
    const std::filesystem::path& path);

struct ValidationStats {
  std::size_t total = 0;
  std::size_t coded_match = 0;
  std::size_t coded_novel_sense = 0;
  std::size_t not_coded = 0;
  double precision_strict = 0;
  double precision_adjusted = 0;

  nlohmann::json to_json() const;
};

// Throws Error(kData) when any label is missing a judgment, or when
// sample_ids is non-empty and the labels do not cover exactly that set.
ValidationStats compute_validation_stats(
    const std::vector<ValidationLabel>& labels,
    const std::vector<std::string>& sample_ids = {});

}  // namespace dogwhistle

#endif  // DOGWHISTLE_DATASET_H_
