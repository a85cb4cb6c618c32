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

#ifndef DOGWHISTLE_MATCHER_H_
#define DOGWHISTLE_MATCHER_H_

#include <chrono>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dogwhistle/corpus.h"
#include "dogwhistle/glossary.h"

namespace dogwhistle {

struct MatchOptions {
  bool case_insensitive = true;
  bool word_boundary = true;
};

struct PatternInfo {
  std::string entry_id;
  std::string surface_form;  // normalized
};

struct Match {
  Span span;  // bytes of the scanned text
  std::string surface_form;
  std::string entry_id;

  bool operator==(const Match&) const = default;
};

// All glossary surface forms compiled into one Aho-Corasick automaton.
// Scanning runs over the normalized text, so a multi-word form matches
// across any whitespace run, and spans are mapped back to source bytes.
// Immutable once compiled.
class PatternSet {
 public:
  // One pattern per (entry id, surface form). Throws Error(kData) on an
  // empty list or an empty pattern.
  static PatternSet compile(
      const std::vector<std::pair<std::string, std::string>>& patterns,
      MatchOptions options = {});

  // Matches in order of start offset; at equal starts the longer pattern
  // comes first, then lower pattern id.
  std::vector<Match> scan(std::string_view text) const;

  std::size_t pattern_count() const { return patterns_.size(); }
  const PatternInfo& pattern(std::size_t id) const { return patterns_[id]; }
  const MatchOptions& options() const { return options_; }
  std::size_t state_count() const { return state_count_; }
  std::chrono::nanoseconds compile_time() const { return compile_time_; }

 private:
  PatternSet() = default;

  struct Hit {
    std::uint32_t pattern;
    std::uint32_t length;
  };

  MatchOptions options_;
  std::vector<PatternInfo> patterns_;
  std::vector<std::uint32_t> pattern_length_;
  std::uint8_t byte_class_[256] = {};
  std::size_t class_count_ = 1;
  std::size_t state_count_ = 0;
  // Complete transition table: state * class_count_ + class.
  std::vector<std::uint32_t> delta_;
  // Outputs of state s are hits_[out_begin_[s] .. out_begin_[s + 1]).
  std::vector<std::uint32_t> out_begin_;
  std::vector<std::uint32_t> hits_;
  std::chrono::nanoseconds compile_time_{0};
};

// Every (entry, surface form) pair of the glossary, duplicates within an
// entry collapsed after normalization.
PatternSet compile_patterns(const Glossary& glossary, MatchOptions options = {});

inline std::vector<Match> scan(const PatternSet& patterns,
                               std::string_view text) {
  return patterns.scan(text);
}

}  // namespace dogwhistle

#endif  // DOGWHISTLE_MATCHER_H_
