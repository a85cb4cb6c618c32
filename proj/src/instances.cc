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

#include "dogwhistle/instances.h"

#include <algorithm>
#include <fstream>
#include <random>
#include <thread>

#include "dogwhistle/error.h"
#include "dogwhistle/hash.h"
#include "dogwhistle/text.h"

namespace dogwhistle {

using nlohmann::json;

namespace {

json span_json(const Span& s) { return json::array({s.begin, s.end}); }

Span span_from(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_unsigned() ||
      !j[1].is_number_unsigned()) {
    throw ParseError(0, "bad span");
  }
  return {j[0].get<std::size_t>(), j[1].get<std::size_t>()};
}

std::string str_field(const json& j, const char* field) {
  auto it = j.find(field);
  if (it == j.end() || !it->is_string()) {
    throw ParseError(0, std::string("missing field '") + field + "'");
  }
  return it->get<std::string>();
}

std::optional<std::string> opt_field(const json& j, const char* field) {
  auto it = j.find(field);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) {
    throw ParseError(0, std::string("non-string field '") + field + "'");
  }
  return it->get<std::string>();
}

}  // namespace

json to_json(const PotentialInstance& in) {
  json matches = json::array();
  for (const Match& m : in.all_matches) {
    matches.push_back({{"span", span_json(m.span)},
                       {"surface_form", m.surface_form},
                       {"entry_id", m.entry_id}});
  }
  json j = {{"instance_id", in.instance_id},
            {"doc_id", in.doc_id},
            {"kind", to_string(in.kind)},
            {"excerpt", in.excerpt},
            {"excerpt_span", span_json(in.excerpt_span)},
            {"matched_term", in.matched_term},
            {"matched_surface_form", in.matched_surface_form},
            {"all_matches", std::move(matches)},
            {"date", in.date.to_string()}};
  if (in.speaker) j["speaker"] = *in.speaker;
  if (in.chamber) j["chamber"] = to_string(*in.chamber);
  if (in.party) j["party"] = *in.party;
  if (in.community) j["community"] = *in.community;
  return j;
}

PotentialInstance instance_from_json(const json& j) {
  if (!j.is_object()) throw ParseError(0, "instance is not an object");
  PotentialInstance in;
  in.instance_id = str_field(j, "instance_id");
  in.doc_id = str_field(j, "doc_id");
  auto kind = parse_document_kind(str_field(j, "kind"));
  if (!kind) throw ParseError(0, "bad kind");
  in.kind = *kind;
  in.excerpt = str_field(j, "excerpt");
  in.excerpt_span = span_from(j.value("excerpt_span", json()));
  in.matched_term = str_field(j, "matched_term");
  in.matched_surface_form = str_field(j, "matched_surface_form");
  auto matches = j.find("all_matches");
  if (matches == j.end() || !matches->is_array()) {
    throw ParseError(0, "missing all_matches");
  }
  for (const json& m : *matches) {
    in.all_matches.push_back({span_from(m.value("span", json())),
                              str_field(m, "surface_form"),
                              str_field(m, "entry_id")});
  }
  auto date = Date::parse(str_field(j, "date"));
  if (!date) throw ParseError(0, "bad date");
  in.date = *date;
  in.speaker = opt_field(j, "speaker");
  in.party = opt_field(j, "party");
  in.community = opt_field(j, "community");
  if (auto chamber = opt_field(j, "chamber")) {
    in.chamber = parse_chamber(*chamber);
    if (!in.chamber) throw ParseError(0, "bad chamber");
  }
  return in;
}

bool SamplingPolicy::excluded(DocumentKind kind,
                              const std::string& entry_id) const {
  return for_kind(kind).excluded.count(entry_id) > 0;
}

double SamplingPolicy::keep_probability(DocumentKind kind,
                                        const std::string& entry_id) const {
  const auto& rates = for_kind(kind).keep_probability;
  auto it = rates.find(entry_id);
  return it == rates.end() ? 1.0 : it->second;
}

namespace {

std::vector<std::string> resolve(const std::string& name,
                                 const Glossary& glossary) {
  if (glossary.find(name)) return {name};
  const std::string key = normalize(name);
  std::vector<std::string> ids;
  for (const GlossaryEntry& e : glossary.entries()) {
    if (normalize(e.term) == key) ids.push_back(e.id);
  }
  return ids;
}

void parse_kind_section(const json& section, const Glossary& glossary,
                        SamplingPolicy::PerKind* out,
                        std::vector<std::string>* unresolved) {
  if (section.is_null()) return;
  if (!section.is_object()) {
    throw Error(ErrorKind::kConfig, "sampling policy section is not an object");
  }
  if (auto ex = section.find("exclude"); ex != section.end()) {
    if (!ex->is_array()) {
      throw Error(ErrorKind::kConfig, "'exclude' must be an array");
    }
    for (const json& name : *ex) {
      if (!name.is_string()) {
        throw Error(ErrorKind::kConfig, "'exclude' entries must be strings");
      }
      auto ids = resolve(name.get<std::string>(), glossary);
      if (ids.empty()) unresolved->push_back(name.get<std::string>());
      out->excluded.insert(ids.begin(), ids.end());
    }
  }
  if (auto ds = section.find("downsample"); ds != section.end()) {
    if (!ds->is_object()) {
      throw Error(ErrorKind::kConfig, "'downsample' must be an object");
    }
    for (const auto& [name, rate] : ds->items()) {
      if (!rate.is_number()) {
        throw Error(ErrorKind::kConfig, "keep probability must be a number");
      }
      const double p = rate.get<double>();
      if (!(p > 0.0 && p <= 1.0)) {
        throw Error(ErrorKind::kConfig,
                    "keep probability for '" + name + "' outside (0, 1]");
      }
      auto ids = resolve(name, glossary);
      if (ids.empty()) unresolved->push_back(name);
      for (const auto& id : ids) out->keep_probability[id] = p;
    }
  }
}

}  // namespace

SamplingPolicy parse_sampling_policy(const json& config,
                                     const Glossary& glossary) {
  if (!config.is_object()) {
    throw Error(ErrorKind::kConfig, "sampling policy must be a JSON object");
  }
  SamplingPolicy policy;
  if (auto seed = config.find("seed"); seed != config.end()) {
    if (!seed->is_number_integer() || seed->get<std::int64_t>() < 0) {
      throw Error(ErrorKind::kConfig, "seed must be a non-negative integer");
    }
    policy.seed = seed->get<std::uint64_t>();
  }
  parse_kind_section(config.value("formal", json()), glossary, &policy.formal,
                     &policy.unresolved);
  parse_kind_section(config.value("informal", json()), glossary,
                     &policy.informal, &policy.unresolved);
  return policy;
}

SamplingPolicy load_sampling_policy(const std::filesystem::path& path,
                                    const Glossary& glossary) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::kConfig, "cannot open sampling policy " +
                                        path.string());
  }
  json config = json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (config.is_discarded()) {
    throw Error(ErrorKind::kConfig, "sampling policy is not valid JSON");
  }
  return parse_sampling_policy(config, glossary);
}

void ExtractionStats::merge(const ExtractionStats& other) {
  documents += other.documents;
  matches += other.matches;
  emitted += other.emitted;
  excluded += other.excluded;
  downsampled += other.downsampled;
  for (const auto& [id, c] : other.per_entry) {
    per_entry[id].matches += c.matches;
    per_entry[id].emitted += c.emitted;
  }
}

json ExtractionStats::to_json() const {
  json entries = json::object();
  for (const auto& [id, c] : per_entry) {
    entries[id] = {{"matches", c.matches}, {"emitted", c.emitted}};
  }
  return {{"documents", documents}, {"matches", matches},
          {"emitted", emitted},     {"excluded", excluded},
          {"downsampled", downsampled}, {"per_entry", std::move(entries)}};
}

std::uint64_t document_seed(std::uint64_t policy_seed,
                            const std::string& doc_id) {
  return splitmix64(policy_seed ^ fnv1a64(doc_id));
}

DocumentInstances extract_from_document(const PatternSet& patterns,
                                        const Document& doc,
                                        const SamplingPolicy& policy) {
  DocumentInstances result;
  result.stats.documents = 1;
  const std::vector<Match> matches = patterns.scan(doc.text);
  if (matches.empty()) return result;

  const ExcerptPolicy excerpt_policy = excerpt_policy_for(doc.kind);
  std::vector<Span> sentences;
  if (excerpt_policy == ExcerptPolicy::kSentenceWindow) {
    sentences = segment_sentences(doc.text);
  }
  std::mt19937_64 rng(document_seed(policy.seed, doc.doc_id));

  for (std::size_t k = 0; k < matches.size(); ++k) {
    const Match& m = matches[k];
    auto& counts = result.stats.per_entry[m.entry_id];
    ++counts.matches;
    ++result.stats.matches;
    if (policy.excluded(doc.kind, m.entry_id)) {
      ++result.stats.excluded;
      continue;
    }
    const double keep = policy.keep_probability(doc.kind, m.entry_id);
    if (keep < 1.0 && unit_interval(rng) >= keep) {
      ++result.stats.downsampled;
      continue;
    }

    const Excerpt ex = excerpt_around(doc, sentences, m.span, excerpt_policy);
    PotentialInstance in;
    in.instance_id = doc.doc_id + ":" + std::to_string(k);
    in.doc_id = doc.doc_id;
    in.kind = doc.kind;
    in.excerpt = ex.text;
    in.excerpt_span = ex.char_span;
    in.matched_term = m.entry_id;
    in.matched_surface_form = m.surface_form;
    auto relative = [&](const Match& x) {
      return Match{{x.span.begin - ex.char_span.begin,
                    x.span.end - ex.char_span.begin},
                   x.surface_form,
                   x.entry_id};
    };
    in.all_matches.push_back(relative(m));
    for (std::size_t j = 0; j < matches.size(); ++j) {
      const Match& other = matches[j];
      if (j == k || other.span.begin < ex.char_span.begin ||
          other.span.end > ex.char_span.end) {
        continue;
      }
      in.all_matches.push_back(relative(other));
    }
    in.date = doc.date;
    in.speaker = doc.speaker;
    in.chamber = doc.chamber;
    in.party = doc.party;
    in.community = doc.community;
    ++counts.emitted;
    ++result.stats.emitted;
    result.instances.push_back(std::move(in));
  }
  return result;
}

ExtractionStats extract_potential_instances(
    const PatternSet& patterns,
    const std::function<std::optional<Document>()>& next_doc,
    const SamplingPolicy& policy,
    const std::function<void(const PotentialInstance&)>& emit,
    std::size_t workers) {
  constexpr std::size_t kChunk = 4096;
  workers = std::max<std::size_t>(1, workers);
  ExtractionStats total;
  std::vector<Document> chunk;
  std::vector<DocumentInstances> results;
  bool done = false;
  while (!done) {
    chunk.clear();
    while (chunk.size() < kChunk) {
      auto doc = next_doc();
      if (!doc) {
        done = true;
        break;
      }
      chunk.push_back(std::move(*doc));
    }
    results.assign(chunk.size(), {});
    auto work = [&](std::size_t first, std::size_t stride) {
      for (std::size_t i = first; i < chunk.size(); i += stride) {
        results[i] = extract_from_document(patterns, chunk[i], policy);
      }
    };
    if (workers == 1 || chunk.size() < 2) {
      work(0, 1);
    } else {
      std::vector<std::jthread> pool;
      for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
    }
    for (const DocumentInstances& r : results) {
      total.merge(r.stats);
      for (const PotentialInstance& in : r.instances) emit(in);
    }
  }
  return total;
}

}  // namespace dogwhistle
