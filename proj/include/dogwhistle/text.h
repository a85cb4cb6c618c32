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

#ifndef DOGWHISTLE_TEXT_H_
#define DOGWHISTLE_TEXT_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace dogwhistle {

// ASCII whitespace: space, \t, \n, \v, \f, \r.
inline bool is_space(unsigned char c) {
  return c == ' ' || (c >= '\t' && c <= '\r');
}

// Lowercases UTF-8 text one code point at a time. Only foldings that keep
// the encoded byte length are applied, so byte offsets into the input are
// valid offsets into the output. Malformed sequences pass through.
std::string fold_case(std::string_view text);

// Case fold (optional), collapse whitespace runs to one space, trim.
std::string normalize(std::string_view text, bool fold = true);

// Normalized text plus, for each output byte, the source byte it came from.
// A collapsed whitespace run maps to its first byte.
struct NormalizedText {
  std::string text;
  std::vector<std::uint32_t> source_offset;
};

NormalizedText normalize_with_offsets(std::string_view text, bool fold);

// Word characters are [A-Za-z0-9_] plus an apostrophe sitting between two
// such characters ("y'all" is one word, "'based'" is not).
bool is_word_char_at(std::string_view text, std::size_t pos);

// True when the bytes just outside [begin, end) are non-word characters or
// string edges.
bool on_word_boundaries(std::string_view text, std::size_t begin,
                        std::size_t end);

std::string_view trim(std::string_view text);

}  // namespace dogwhistle

#endif  // DOGWHISTLE_TEXT_H_
