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

#ifndef DOGWHISTLE_GLOSSARY_H_
#define DOGWHISTLE_GLOSSARY_H_

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace dogwhistle {

// Communication sphere in which a dog whistle is documented.
enum class Sphere { kFormal, kInformal, kBoth };

std::string_view to_string(Sphere sphere);
std::optional<Sphere> parse_sphere(std::string_view text);

struct GlossaryEntry {
  std::string id;
  std::string term;
  std::vector<std::string> surface_forms;
  std::string coded_meaning;
  std::string in_group;
  Sphere sphere = Sphere::kBoth;

  bool operator==(const GlossaryEntry&) const = default;
};

struct ValidationIssue {
  std::string code;  // e.g. "duplicate_id", "surface_collision"
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> errors;
  std::vector<ValidationIssue> warnings;

  bool ok() const { return errors.empty(); }
  bool empty() const { return errors.empty() && warnings.empty(); }
};

// An immutable, indexed set of glossary entries. Safe to share across
// threads once constructed.
class Glossary {
 public:
  Glossary() = default;

  // Builds the surface-form index. Does not validate; see
  // validate_glossary().
  explicit Glossary(std::vector<GlossaryEntry> entries);

  const std::vector<GlossaryEntry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  // First entry with this id, or nullptr.
  const GlossaryEntry* find(std::string_view id) const;

  // Entry ids owning a surface form; the argument is normalized first.
  std::vector<std::string> ids_for_surface(std::string_view surface) const;

  // Normalized surface form -> owning entry ids, in glossary order.
  const std::map<std::string, std::vector<std::string>>& surface_index()
      const {
    return surface_index_;
  }

  // Entries with sphere "both" are counted in each.
  std::size_t formal_count() const;
  std::size_t informal_count() const;

 private:
  std::vector<GlossaryEntry> entries_;
  std::map<std::string, std::vector<std::string>> surface_index_;
  std::unordered_map<std::string, std::size_t> id_index_;
};

// Header line that must open every glossary file.
inline constexpr std::string_view kGlossarySchema = "dogwhistle-glossary";
inline constexpr int kGlossaryVersion = 1;

ValidationReport validate_glossary(const Glossary& glossary);

// Parses the newline-delimited glossary format. Throws ParseError with a
// line number on malformed input and ValidationError when the loaded
// entries fail validate_glossary().
Glossary read_glossary(std::istream& in);
Glossary load_glossary(const std::filesystem::path& path);

void write_glossary(const Glossary& glossary, std::ostream& out);

}  // namespace dogwhistle

#endif  // DOGWHISTLE_GLOSSARY_H_
