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

#ifndef DOGWHISTLE_ENSEMBLE_H_
#define DOGWHISTLE_ENSEMBLE_H_

#include <optional>
#include <string>
#include <vector>

#include "dogwhistle/provider.h"
#include "dogwhistle/responses.h"

namespace dogwhistle {

enum class OutcomeStatus { kRetained, kDiscardedInconsistent, kRefused };

std::string_view to_string(OutcomeStatus status);
std::optional<OutcomeStatus> parse_outcome_status(std::string_view text);

struct EnsembleOutcome {
  std::size_t sentence_index = 0;
  OutcomeStatus status = OutcomeStatus::kRefused;
  // Present iff status == kRetained; explanation comes from the first run.
  std::optional<SentenceVerdict> verdict;
  std::size_t n_used = 0;
  std::optional<RefusalKind> refusal;  // set iff status == kRefused

  bool operator==(const EnsembleOutcome&) const = default;
};

struct EnsembleOptions {
  RetryPolicy retry;
  // Issue the n completions concurrently.
  bool concurrent = true;
  std::optional<double> temperature;
  int max_tokens = 1024;
  std::string tag;
};

// Asks the same prompt n times as independent completions. A refusal in
// any run marks every sentence of the batch refused; otherwise a sentence
// is retained iff all n labels agree. n must be odd and >= 1.
std::vector<EnsembleOutcome> run_ensemble(ProviderClient& client,
                                          const std::string& prompt, int n,
                                          std::size_t expected_count,
                                          const EnsembleOptions& options = {});

// The voting step on already-parsed runs, in run order.
std::vector<EnsembleOutcome> combine_runs(
    const std::vector<DisambiguationParse>& runs, std::size_t expected_count);

}  // namespace dogwhistle

#endif  // DOGWHISTLE_ENSEMBLE_H_
