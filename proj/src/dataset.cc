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

#include "dogwhistle/dataset.h"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <set>
#include <tuple>
#include <unordered_map>

#include "dogwhistle/error.h"
#include "dogwhistle/hash.h"
#include "dogwhistle/table.h"
#include "dogwhistle/text.h"

namespace dogwhistle {

using nlohmann::json;

namespace {

std::string get_string(const json& r, const char* key) {
  auto it = r.find(key);
  if (it == r.end() || !it->is_string()) {
    throw ParseError(0, std::string("missing or non-string field '") + key + "'");
  }
  return it->get<std::string>();
}

std::optional<std::string> get_optional(const json& r, const char* key) {
  auto it = r.find(key);
  if (it == r.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) {
    throw ParseError(0, std::string("non-string field '") + key + "'");
  }
  return it->get<std::string>();
}

int get_int(const json& r, const char* key) {
  auto it = r.find(key);
  if (it == r.end() || !it->is_number_integer()) {
    throw ParseError(0, std::string("missing or non-integer field '") + key + "'");
  }
  return it->get<int>();
}

template <typename Fn>
void read_jsonl(std::istream& in, Fn fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    json record = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (record.is_discarded() || !record.is_object()) {
      throw ParseError(line_no, "invalid JSON object");
    }
    try {
      fn(record);
    } catch (const ParseError& e) {
      if (e.line() != 0) throw;
      throw ParseError(line_no, e.what());
    }
  }
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  return in;
}

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

// ---------------------------------------------------------------------------
// Outcomes

json to_json(const InstanceOutcome& o) {
  json j{{"instance_id", o.instance_id},
         {"entry_id", o.entry_id},
         {"status", to_string(o.status)},
         {"n", o.n},
         {"provider", o.provider}};
  if (o.label) {
    j["label"] = to_string(*o.label);
    j["explanation"] = o.explanation;
  }
  if (o.refusal) j["refusal"] = to_string(*o.refusal);
  return j;
}

InstanceOutcome outcome_from_json(const json& r) {
  InstanceOutcome o;
  o.instance_id = get_string(r, "instance_id");
  o.entry_id = get_string(r, "entry_id");
  const std::string status = get_string(r, "status");
  auto s = parse_outcome_status(status);
  if (!s) throw ParseError(0, "unknown status '" + status + "'");
  o.status = *s;
  o.n = get_int(r, "n");
  o.provider = get_string(r, "provider");
  if (auto label = get_optional(r, "label")) {
    o.label = parse_label(*label);
    if (!o.label) throw ParseError(0, "unknown label '" + *label + "'");
    o.explanation = get_optional(r, "explanation").value_or("");
  }
  if (auto refusal = get_optional(r, "refusal")) {
    o.refusal = parse_refusal_kind(*refusal);
    if (!o.refusal) throw ParseError(0, "unknown refusal kind '" + *refusal + "'");
  }
  if ((o.status == OutcomeStatus::kRetained) != o.label.has_value()) {
    throw ParseError(0, "label must be present exactly when retained");
  }
  if ((o.status == OutcomeStatus::kRefused) != o.refusal.has_value()) {
    throw ParseError(0, "refusal must be present exactly when refused");
  }
  return o;
}

std::vector<InstanceOutcome> load_outcomes(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  std::vector<InstanceOutcome> out;
  read_jsonl(in, [&](const json& r) { out.push_back(outcome_from_json(r)); });
  return out;
}

// ---------------------------------------------------------------------------
// Records

std::string make_record_id(const std::string& instance_id,
                           const std::string& entry_id) {
  return hex64(fnv1a64(instance_id + '\x1f' + entry_id));
}

json to_json(const SilentSignalRecord& r) {
  json j{{"record_id", r.record_id},
         {"content", r.content},
         {"dog_whistle", r.dog_whistle},
         {"dog_whistle_definition", r.dog_whistle_definition},
         {"type", to_string(r.type)},
         {"in_group", r.in_group},
         {"date", r.date.to_string()},
         {"provenance",
          {{"instance_id", r.provenance.instance_id},
           {"n", r.provenance.n},
           {"provider", r.provenance.provider}}}};
  if (r.chamber) j["chamber"] = to_string(*r.chamber);
  if (r.speaker) j["speaker"] = *r.speaker;
  if (r.party) j["party"] = *r.party;
  if (r.community) j["community"] = *r.community;
  return j;
}

SilentSignalRecord record_from_json(const json& j) {
  SilentSignalRecord r;
  r.record_id = get_string(j, "record_id");
  r.content = get_string(j, "content");
  r.dog_whistle = get_string(j, "dog_whistle");
  r.dog_whistle_definition = get_string(j, "dog_whistle_definition");
  const std::string type = get_string(j, "type");
  auto kind = parse_document_kind(type);
  if (!kind) throw ParseError(0, "unknown type '" + type + "'");
  r.type = *kind;
  r.in_group = get_string(j, "in_group");
  const std::string date = get_string(j, "date");
  auto d = Date::parse(date);
  if (!d) throw ParseError(0, "bad date '" + date + "'");
  r.date = *d;
  if (auto chamber = get_optional(j, "chamber")) {
    r.chamber = parse_chamber(*chamber);
    if (!r.chamber) throw ParseError(0, "unknown chamber '" + *chamber + "'");
  }
  r.speaker = get_optional(j, "speaker");
  r.party = get_optional(j, "party");
  r.community = get_optional(j, "community");
  auto p = j.find("provenance");
  if (p == j.end() || !p->is_object()) {
    throw ParseError(0, "missing object field 'provenance'");
  }
  r.provenance.instance_id = get_string(*p, "instance_id");
  r.provenance.n = get_int(*p, "n");
  r.provenance.provider = get_string(*p, "provider");
  const bool formal = r.type == DocumentKind::kFormal;
  if (formal && r.community) throw ParseError(0, "formal record with community");
  if (!formal && (r.chamber || r.speaker || r.party)) {
    throw ParseError(0, "informal record with formal metadata");
  }
  return r;
}

void write_records(std::ostream& out, const std::vector<SilentSignalRecord>& records) {
  for (const auto& r : records) {
    out << to_json(r).dump(-1, ' ', false, json::error_handler_t::replace) << '\n';
  }
}

std::vector<SilentSignalRecord> read_records(std::istream& in) {
  std::vector<SilentSignalRecord> out;
  read_jsonl(in, [&](const json& r) { out.push_back(record_from_json(r)); });
  return out;
}

std::vector<SilentSignalRecord> load_records(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  return read_records(in);
}

json AssemblySummary::to_json() const {
  return json{{"outcomes", outcomes},
              {"records", records},
              {"formal", formal},
              {"informal", informal},
              {"retained_not_coded", retained_not_coded},
              {"discarded", discarded},
              {"refused", refused},
              {"distinct_dog_whistles", distinct_dog_whistles},
              {"distinct_surface_forms", distinct_surface_forms}};
}

std::vector<SilentSignalRecord> assemble_records(
    const std::vector<InstanceOutcome>& outcomes,
    const std::vector<PotentialInstance>& instances, const Glossary& glossary,
    AssemblySummary* summary) {
  std::unordered_map<std::string, const PotentialInstance*> by_id;
  std::set<std::string> duplicated;
  for (const auto& inst : instances) {
    if (!by_id.emplace(inst.instance_id, &inst).second) {
      duplicated.insert(inst.instance_id);
    }
  }

  AssemblySummary s;
  s.outcomes = outcomes.size();
  std::vector<std::string> orphans;
  std::vector<SilentSignalRecord> records;
  std::set<std::string> terms;
  std::set<std::string> forms;

  for (const auto& o : outcomes) {
    if (o.status == OutcomeStatus::kDiscardedInconsistent) {
      ++s.discarded;
      continue;
    }
    if (o.status == OutcomeStatus::kRefused) {
      ++s.refused;
      continue;
    }
    auto it = by_id.find(o.instance_id);
    if (it == by_id.end() || duplicated.contains(o.instance_id) ||
        it->second->matched_term != o.entry_id) {
      orphans.push_back(o.instance_id);
      continue;
    }
    if (o.label != Label::kCoded) {
      ++s.retained_not_coded;
      continue;
    }
    const PotentialInstance& inst = *it->second;
    const GlossaryEntry* entry = glossary.find(o.entry_id);
    if (entry == nullptr) {
      throw Error(ErrorKind::kData,
                  "outcome for " + o.instance_id + " names unknown entry '" +
                      o.entry_id + "'");
    }
    SilentSignalRecord r;
    r.record_id = make_record_id(o.instance_id, o.entry_id);
    r.content = inst.excerpt;
    r.dog_whistle = entry->id;
    r.dog_whistle_definition = entry->coded_meaning;
    r.type = inst.kind;
    r.in_group = entry->in_group;
    r.date = inst.date;
    r.chamber = inst.chamber;
    r.speaker = inst.speaker;
    r.party = inst.party;
    r.community = inst.community;
    r.provenance = {o.instance_id, o.n, o.provider};
    ++(r.type == DocumentKind::kFormal ? s.formal : s.informal);
    terms.insert(entry->id);
    forms.insert(normalize(inst.matched_surface_form));
    records.push_back(std::move(r));
  }

  if (!orphans.empty()) {
    std::string msg = "retained outcomes without a unique matching instance:";
    for (const auto& id : orphans) msg += " " + id;
    throw Error(ErrorKind::kData, msg);
  }
  s.records = records.size();
  s.distinct_dog_whistles = terms.size();
  s.distinct_surface_forms = forms.size();
  if (summary != nullptr) *summary = s;
  return records;
}

RecordChecker::RecordChecker(const Glossary& glossary)
    : glossary_(glossary), patterns_(compile_patterns(glossary)) {}

std::optional<std::string> RecordChecker::check(const SilentSignalRecord& r) const {
  const GlossaryEntry* entry = glossary_.find(r.dog_whistle);
  if (entry == nullptr) return "unknown dog whistle '" + r.dog_whistle + "'";
  const bool formal = r.type == DocumentKind::kFormal;
  if (formal && r.community) return "formal record carries a community";
  if (!formal && (r.chamber || r.speaker || r.party)) {
    return "informal record carries formal metadata";
  }
  for (const auto& m : patterns_.scan(r.content)) {
    if (m.entry_id == r.dog_whistle) return std::nullopt;
  }
  return "content contains no surface form of '" + r.dog_whistle + "'";
}

DedupResult deduplicate(const std::vector<SilentSignalRecord>& records) {
  auto key = [](const SilentSignalRecord& r) {
    return std::tie(r.content, r.dog_whistle, r.date, r.type, r.chamber,
                    r.speaker, r.party, r.community);
  };
  using Key = decltype(key(records.front()));
  std::map<Key, std::size_t> best;  // key -> index of lowest record_id
  for (std::size_t i = 0; i < records.size(); ++i) {
    auto [it, inserted] = best.emplace(key(records[i]), i);
    if (!inserted && records[i].record_id < records[it->second].record_id) {
      it->second = i;
    }
  }
  std::vector<bool> keep(records.size(), false);
  for (const auto& [k, i] : best) keep[i] = true;
  DedupResult out;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (keep[i]) out.records.push_back(records[i]);
  }
  out.removed = records.size() - out.records.size();
  return out;
}

std::vector<SilentSignalRecord> sample_for_validation(
    const std::vector<SilentSignalRecord>& records, std::size_t k,
    std::uint64_t seed) {
  if (k > records.size()) {
    throw Error(ErrorKind::kUsage, "sample size " + std::to_string(k) +
                                       " exceeds " +
                                       std::to_string(records.size()) + " records");
  }
  std::vector<std::size_t> idx(records.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::mt19937_64 rng(splitmix64(seed));
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + uniform_below(rng, idx.size() - i);
    std::swap(idx[i], idx[j]);
  }
  std::vector<SilentSignalRecord> sample;
  sample.reserve(k);
  for (std::size_t i = 0; i < k; ++i) sample.push_back(records[idx[i]]);
  std::sort(sample.begin(), sample.end(),
            [](const auto& a, const auto& b) { return a.record_id < b.record_id; });
  return sample;
}

// ---------------------------------------------------------------------------
// Validation

std::string_view to_string(Judgment judgment) {
  switch (judgment) {
    case Judgment::kCodedMatch:
      return "coded_match";
    case Judgment::kCodedNovelSense:
      return "coded_novel_sense";
    case Judgment::kNotCoded:
      return "not_coded";
  }
  return "not_coded";
}

std::optional<Judgment> parse_judgment(std::string_view text) {
  text = trim(text);
  for (Judgment j : {Judgment::kCodedMatch, Judgment::kCodedNovelSense,
                     Judgment::kNotCoded}) {
    if (text == to_string(j)) return j;
  }
  return std::nullopt;
}

void write_validation_manifest(std::ostream& out,
                               const std::vector<SilentSignalRecord>& sample) {
  write_csv_row(out, {"record_id", "dog_whistle", "definition", "type", "date",
                      "content", "judgment", "note"});
  for (const auto& r : sample) {
    write_csv_row(out, {r.record_id, r.dog_whistle, r.dog_whistle_definition,
                        std::string(to_string(r.type)), r.date.to_string(),
                        r.content, "", ""});
  }
}

std::vector<ValidationLabel> read_validation_labels(std::istream& in) {
  const CsvTable table = read_csv(in);
  const int id = table.column("record_id");
  const int judgment = table.column("judgment");
  const int note = table.column("note");
  if (id < 0 || judgment < 0) {
    throw ParseError(1, "label header must contain 'record_id' and 'judgment'");
  }
  std::vector<ValidationLabel> out;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    ValidationLabel label;
    label.record_id = row[id];
    if (!trim(row[judgment]).empty()) {
      label.judgment = parse_judgment(row[judgment]);
      if (!label.judgment) {
        throw ParseError(r + 2, "unknown judgment '" + row[judgment] + "'");
      }
    }
    if (note >= 0) label.note = row[note];
    out.push_back(std::move(label));
  }
  return out;
}

std::vector<ValidationLabel> load_validation_labels(
    const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  return read_validation_labels(in);
}

json ValidationStats::to_json() const {
  return json{{"total", total},
              {"coded_match", coded_match},
              {"coded_novel_sense", coded_novel_sense},
              {"not_coded", not_coded},
              {"precision_strict", precision_strict},
              {"precision_adjusted", precision_adjusted}};
}

ValidationStats compute_validation_stats(const std::vector<ValidationLabel>& labels,
                                         const std::vector<std::string>& sample_ids) {
  if (!sample_ids.empty()) {
    std::set<std::string> expected(sample_ids.begin(), sample_ids.end());
    std::set<std::string> seen;
    for (const auto& l : labels) {
      if (!expected.contains(l.record_id)) {
        throw Error(ErrorKind::kData, "label for record " + l.record_id +
                                          " which is not in the sample");
      }
      seen.insert(l.record_id);
    }
    for (const auto& id : expected) {
      if (!seen.contains(id)) {
        throw Error(ErrorKind::kData, "sampled record " + id + " is unlabeled");
      }
    }
  }
  ValidationStats s;
  for (const auto& l : labels) {
    if (!l.judgment) {
      throw Error(ErrorKind::kData, "record " + l.record_id + " is unlabeled");
    }
    switch (*l.judgment) {
      case Judgment::kCodedMatch:
        ++s.coded_match;
        break;
      case Judgment::kCodedNovelSense:
        ++s.coded_novel_sense;
        break;
      case Judgment::kNotCoded:
        ++s.not_coded;
        break;
    }
  }
  s.total = labels.size();
  s.precision_strict = ratio(s.coded_match, s.total);
  s.precision_adjusted = ratio(s.coded_match + s.coded_novel_sense, s.total);
  return s;
}

}  // namespace dogwhistle
