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

#include "oracles/ensemble_oracle.h"

namespace oracle {

std::vector<std::vector<bool>> all_label_tuples(int n) {
  std::vector<std::vector<bool>> out;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    std::vector<bool> t;
    for (int i = 0; i < n; ++i) t.push_back((mask >> i) & 1u);
    out.push_back(std::move(t));
  }
  return out;
}

bool unanimous(const std::vector<bool>& tuple) {
  for (bool b : tuple) {
    if (b != tuple.front()) return false;
  }
  return true;
}

std::size_t expected_retained(int n) {
  std::size_t count = 0;
  for (const auto& t : all_label_tuples(n)) count += unanimous(t) ? 1 : 0;
  return count;
}

}  // namespace oracle
