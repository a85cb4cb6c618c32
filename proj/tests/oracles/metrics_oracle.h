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

#ifndef DOGWHISTLE_TESTS_ORACLES_METRICS_ORACLE_H_
#define DOGWHISTLE_TESTS_ORACLES_METRICS_ORACLE_H_

#include <cstddef>
#include <vector>

namespace oracle {

struct Rates {
  double accuracy = 0;
  double precision = 0;
  double recall = 0;
  double f1 = 0;
};

// Textbook binary metrics from (gold, predicted) pairs; undefined ratios
// are 0. F1 uses 2tp / (2tp + fp + fn), the count form.
Rates binary_rates(const std::vector<bool>& gold, const std::vector<bool>& pred);

}  // namespace oracle

#endif  // DOGWHISTLE_TESTS_ORACLES_METRICS_ORACLE_H_
