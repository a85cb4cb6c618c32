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

#include "dogwhistle/matcher.h"

#include <algorithm>
#include <deque>
#include <set>

#include "dogwhistle/error.h"
#include "dogwhistle/text.h"

namespace dogwhistle {

namespace {
constexpr std::uint32_t kNone = 0xFFFFFFFFu;
}  // namespace

PatternSet PatternSet::compile(
    const std::vector<std::pair<std::string, std::string>>& patterns,
    MatchOptions options) {
  const auto started = std::chrono::steady_clock::now();
  if (patterns.empty()) throw Error(ErrorKind::kData, "empty pattern list");

  PatternSet ps;
  ps.options_ = options;
  for (const auto& [entry_id, surface] : patterns) {
    std::string norm = normalize(surface, options.case_insensitive);
    if (norm.empty()) {
      throw Error(ErrorKind::kData,
                  "empty surface form for entry '" + entry_id + "'");
    }
    ps.pattern_length_.push_back(static_cast<std::uint32_t>(norm.size()));
    ps.patterns_.push_back({entry_id, std::move(norm)});
  }

  // Bytes that occur in some pattern get their own class; the rest share 0.
  for (const auto& p : ps.patterns_) {
    for (unsigned char c : p.surface_form) {
      if (ps.byte_class_[c] == 0) {
        ps.byte_class_[c] = static_cast<std::uint8_t>(ps.class_count_++);
      }
    }
  }
  const std::size_t k = ps.class_count_;

  // Trie.
  std::vector<std::uint32_t> go(k, kNone);
  std::vector<std::vector<std::uint32_t>> own(1);
  for (std::uint32_t id = 0; id < ps.patterns_.size(); ++id) {
    std::uint32_t s = 0;
    for (unsigned char c : ps.patterns_[id].surface_form) {
      const std::size_t slot = s * k + ps.byte_class_[c];
      if (go[slot] == kNone) {
        go[slot] = static_cast<std::uint32_t>(own.size());
        own.emplace_back();
        go.resize(own.size() * k, kNone);
      }
      s = go[slot];
    }
    own[s].push_back(id);
  }
  const std::size_t states = own.size();

  // Breadth-first failure links, completing the transition table as we go.
  std::vector<std::uint32_t> fail(states, 0);
  std::vector<std::uint32_t> order;
  order.reserve(states);
  std::deque<std::uint32_t> queue;
  for (std::size_t c = 0; c < k; ++c) {
    if (go[c] == kNone) {
      go[c] = 0;
    } else {
      fail[go[c]] = 0;
      queue.push_back(go[c]);
    }
  }
  order.push_back(0);
  while (!queue.empty()) {
    const std::uint32_t s = queue.front();
    queue.pop_front();
    order.push_back(s);
    for (std::size_t c = 0; c < k; ++c) {
      const std::uint32_t t = go[s * k + c];
      if (t == kNone) {
        go[s * k + c] = go[fail[s] * k + c];
      } else {
        fail[t] = go[fail[s] * k + c];
        queue.push_back(t);
      }
    }
  }

  // Output lists, merged along failure links. A state's failure target is
  // shallower, so BFS order has it done first.
  std::vector<std::vector<std::uint32_t>> out(states);
  for (std::uint32_t s : order) {
    out[s] = own[s];
    if (s != 0) {
      const auto& inherited = out[fail[s]];
      out[s].insert(out[s].end(), inherited.begin(), inherited.end());
    }
  }
  ps.out_begin_.reserve(states + 1);
  for (std::size_t s = 0; s < states; ++s) {
    ps.out_begin_.push_back(static_cast<std::uint32_t>(ps.hits_.size()));
    ps.hits_.insert(ps.hits_.end(), out[s].begin(), out[s].end());
  }
  ps.out_begin_.push_back(static_cast<std::uint32_t>(ps.hits_.size()));

  ps.delta_ = std::move(go);
  ps.state_count_ = states;
  ps.compile_time_ = std::chrono::duration_cast<std::chrono::nanoseconds>(
      std::chrono::steady_clock::now() - started);
  return ps;
}

std::vector<Match> PatternSet::scan(std::string_view text) const {
  std::vector<Match> matches;
  if (text.empty() || patterns_.empty()) return matches;

  const NormalizedText norm =
      normalize_with_offsets(text, options_.case_insensitive);
  struct Found {
    std::size_t begin;
    std::size_t end;
    std::uint32_t pattern;
  };
  std::vector<Found> found;
  const std::size_t k = class_count_;
  std::uint32_t state = 0;
  for (std::size_t i = 0; i < norm.text.size(); ++i) {
    const auto c = static_cast<unsigned char>(norm.text[i]);
    state = delta_[state * k + byte_class_[c]];
    for (std::uint32_t h = out_begin_[state]; h < out_begin_[state + 1]; ++h) {
      const std::uint32_t id = hits_[h];
      const std::size_t first = i + 1 - pattern_length_[id];
      const std::size_t begin = norm.source_offset[first];
      const std::size_t end = norm.source_offset[i] + 1;
      if (options_.word_boundary && !on_word_boundaries(text, begin, end)) {
        continue;
      }
      found.push_back({begin, end, id});
    }
  }
  std::sort(found.begin(), found.end(), [](const Found& a, const Found& b) {
    if (a.begin != b.begin) return a.begin < b.begin;
    if (a.end != b.end) return a.end > b.end;
    return a.pattern < b.pattern;
  });
  matches.reserve(found.size());
  for (const Found& f : found) {
    matches.push_back({{f.begin, f.end},
                       patterns_[f.pattern].surface_form,
                       patterns_[f.pattern].entry_id});
  }
  return matches;
}

PatternSet compile_patterns(const Glossary& glossary, MatchOptions options) {
  std::vector<std::pair<std::string, std::string>> patterns;
  for (const GlossaryEntry& e : glossary.entries()) {
    std::set<std::string> seen;
    for (const std::string& form : e.surface_forms) {
      std::string norm = normalize(form, options.case_insensitive);
      if (norm.empty() || !seen.insert(norm).second) continue;
      patterns.emplace_back(e.id, std::move(norm));
    }
  }
  return PatternSet::compile(patterns, options);
}

}  // namespace dogwhistle
