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

#include "dogwhistle/glossary.h"

#include <algorithm>
#include <fstream>
#include <set>

#include "dogwhistle/error.h"
#include "dogwhistle/text.h"
#include "json.hpp"

namespace dogwhistle {

using nlohmann::json;

std::string_view to_string(Sphere sphere) {
  switch (sphere) {
    case Sphere::kFormal:
      return "formal";
    case Sphere::kInformal:
      return "informal";
    case Sphere::kBoth:
      return "both";
  }
  return "both";
}

std::optional<Sphere> parse_sphere(std::string_view text) {
  if (text == "formal") return Sphere::kFormal;
  if (text == "informal") return Sphere::kInformal;
  if (text == "both") return Sphere::kBoth;
  return std::nullopt;
}

Glossary::Glossary(std::vector<GlossaryEntry> entries)
    : entries_(std::move(entries)) {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const GlossaryEntry& e = entries_[i];
    id_index_.emplace(e.id, i);
    for (const std::string& form : e.surface_forms) {
      std::string key = normalize(form);
      if (key.empty()) continue;
      auto& ids = surface_index_[key];
      if (std::find(ids.begin(), ids.end(), e.id) == ids.end()) {
        ids.push_back(e.id);
      }
    }
  }
}

const GlossaryEntry* Glossary::find(std::string_view id) const {
  auto it = id_index_.find(std::string(id));
  return it == id_index_.end() ? nullptr : &entries_[it->second];
}

std::vector<std::string> Glossary::ids_for_surface(
    std::string_view surface) const {
  auto it = surface_index_.find(normalize(surface));
  if (it == surface_index_.end()) return {};
  return it->second;
}

std::size_t Glossary::formal_count() const {
  return std::count_if(entries_.begin(), entries_.end(), [](const auto& e) {
    return e.sphere != Sphere::kInformal;
  });
}

std::size_t Glossary::informal_count() const {
  return std::count_if(entries_.begin(), entries_.end(), [](const auto& e) {
    return e.sphere != Sphere::kFormal;
  });
}

ValidationReport validate_glossary(const Glossary& glossary) {
  ValidationReport report;
  std::set<std::string> seen_ids;
  auto error = [&](std::string code, std::string message) {
    report.errors.push_back({std::move(code), std::move(message)});
  };
  if (glossary.empty()) error("no_entries", "no entries");

  for (const GlossaryEntry& e : glossary.entries()) {
    const std::string who = "entry '" + e.id + "'";
    if (trim(e.id).empty()) error("empty_field", "entry with empty id");
    if (!seen_ids.insert(e.id).second) {
      error("duplicate_id", "duplicate id '" + e.id + "'");
    }
    if (trim(e.term).empty()) error("empty_field", who + ": empty term");
    if (trim(e.coded_meaning).empty()) {
      error("empty_field", who + ": empty coded_meaning");
    }
    if (trim(e.in_group).empty()) error("empty_field", who + ": empty in_group");
    if (e.surface_forms.empty()) {
      error("empty_surface_forms", who + ": no surface forms");
    }
    std::set<std::string> forms;
    for (const std::string& form : e.surface_forms) {
      std::string key = normalize(form);
      if (key.empty()) {
        error("empty_field", who + ": blank surface form");
      } else if (!forms.insert(key).second) {
        error("duplicate_surface_form",
              who + ": surface form '" + key + "' listed twice");
      }
    }
  }

  for (const auto& [form, ids] : glossary.surface_index()) {
    if (ids.size() < 2) continue;
    std::string list;
    for (const auto& id : ids) list += (list.empty() ? "" : ", ") + id;
    report.warnings.push_back(
        {"surface_collision",
         "surface form '" + form + "' shared by entries: " + list});
  }
  return report;
}

namespace {

std::string required_string(const json& record, const char* field,
                            std::size_t line) {
  auto it = record.find(field);
  if (it == record.end() || !it->is_string()) {
    throw ParseError(line, std::string("missing or non-string field '") +
                               field + "'");
  }
  return it->get<std::string>();
}

GlossaryEntry parse_entry(const json& record, std::size_t line) {
  if (!record.is_object()) throw ParseError(line, "record is not an object");
  GlossaryEntry e;
  e.id = required_string(record, "id", line);
  e.term = required_string(record, "term", line);
  e.coded_meaning = required_string(record, "coded_meaning", line);
  e.in_group = required_string(record, "in_group", line);
  const std::string sphere = required_string(record, "sphere", line);
  auto parsed = parse_sphere(sphere);
  if (!parsed) throw ParseError(line, "unknown sphere '" + sphere + "'");
  e.sphere = *parsed;
  auto forms = record.find("surface_forms");
  if (forms == record.end() || !forms->is_array()) {
    throw ParseError(line, "missing or non-array field 'surface_forms'");
  }
  for (const json& f : *forms) {
    if (!f.is_string()) throw ParseError(line, "non-string surface form");
    e.surface_forms.push_back(f.get<std::string>());
  }
  return e;
}

}  // namespace

Glossary read_glossary(std::istream& in) {
  std::vector<GlossaryEntry> entries;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    json record = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (record.is_discarded()) throw ParseError(line_no, "invalid JSON");
    if (!header_seen) {
      if (!record.is_object() || record.value("schema", "") != kGlossarySchema) {
        throw ParseError(line_no, "missing glossary schema header");
      }
      if (record.value("version", 0) != kGlossaryVersion) {
        throw ParseError(line_no, "unsupported glossary schema version");
      }
      header_seen = true;
      continue;
    }
    entries.push_back(parse_entry(record, line_no));
  }
  if (entries.empty()) throw ValidationError("no entries");

  Glossary glossary(std::move(entries));
  ValidationReport report = validate_glossary(glossary);
  if (!report.ok()) {
    std::string message = "invalid glossary:";
    for (const auto& issue : report.errors) message += "\n  " + issue.message;
    throw ValidationError(message);
  }
  return glossary;
}

Glossary load_glossary(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::kIo, "cannot open glossary " + path.string());
  }
  return read_glossary(in);
}

void write_glossary(const Glossary& glossary, std::ostream& out) {
  out << json{{"schema", kGlossarySchema}, {"version", kGlossaryVersion}}.dump()
      << '\n';
  for (const GlossaryEntry& e : glossary.entries()) {
    json record = {{"id", e.id},
                   {"term", e.term},
                   {"surface_forms", e.surface_forms},
                   {"coded_meaning", e.coded_meaning},
                   {"in_group", e.in_group},
                   {"sphere", to_string(e.sphere)}};
    out << record.dump() << '\n';
  }
}

}  // namespace dogwhistle
