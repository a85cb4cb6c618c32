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

#ifndef DOGWHISTLE_TESTS_ORACLES_REGEX_MATCHER_H_
#define DOGWHISTLE_TESTS_ORACLES_REGEX_MATCHER_H_

#include <cstddef>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace oracle {

// (begin, end, entry id)
using MatchKey = std::tuple<std::size_t, std::size_t, std::string>;

// Reference matcher for ASCII text: one std::regex per pattern, tokens
// joined by \s+, case-insensitive, every start position tried. A hit counts
// only when the bytes just outside it are not word characters, where a
// word character is [A-Za-z0-9_] or an apostrophe between two of those.
std::set<MatchKey> regex_scan(
    const std::vector<std::pair<std::string, std::string>>& patterns,
    const std::string& text);

}  // namespace oracle

#endif  // DOGWHISTLE_TESTS_ORACLES_REGEX_MATCHER_H_
