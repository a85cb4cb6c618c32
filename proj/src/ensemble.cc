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

#include "dogwhistle/ensemble.h"

#include <future>

#include "dogwhistle/error.h"

namespace dogwhistle {

std::string_view to_string(OutcomeStatus status) {
  switch (status) {
    case OutcomeStatus::kRetained:
      return "retained";
    case OutcomeStatus::kDiscardedInconsistent:
      return "discarded_inconsistent";
    case OutcomeStatus::kRefused:
      return "refused";
  }
  return "refused";
}

std::optional<OutcomeStatus> parse_outcome_status(std::string_view text) {
  if (text == "retained") return OutcomeStatus::kRetained;
  if (text == "discarded_inconsistent") return OutcomeStatus::kDiscardedInconsistent;
  if (text == "refused") return OutcomeStatus::kRefused;
  return std::nullopt;
}

std::vector<EnsembleOutcome> combine_runs(
    const std::vector<DisambiguationParse>& runs, std::size_t expected_count) {
  std::vector<EnsembleOutcome> outcomes(expected_count);
  for (std::size_t i = 0; i < expected_count; ++i) {
    outcomes[i].sentence_index = i;
    outcomes[i].n_used = runs.size();
  }
  // Sentence alignment cannot be trusted once any run refused, so the
  // whole batch goes.
  for (const auto& run : runs) {
    if (const auto* refusal = std::get_if<RefusalSignal>(&run)) {
      for (auto& o : outcomes) {
        o.status = OutcomeStatus::kRefused;
        o.refusal = refusal->kind;
      }
      return outcomes;
    }
  }
  for (std::size_t i = 0; i < expected_count; ++i) {
    const auto& first = std::get<std::vector<SentenceVerdict>>(runs.front())[i];
    bool consistent = true;
    for (const auto& run : runs) {
      if (std::get<std::vector<SentenceVerdict>>(run)[i].label != first.label) {
        consistent = false;
        break;
      }
    }
    if (consistent) {
      outcomes[i].status = OutcomeStatus::kRetained;
      outcomes[i].verdict = first;
    } else {
      outcomes[i].status = OutcomeStatus::kDiscardedInconsistent;
    }
  }
  return outcomes;
}

std::vector<EnsembleOutcome> run_ensemble(ProviderClient& client,
                                          const std::string& prompt, int n,
                                          std::size_t expected_count,
                                          const EnsembleOptions& options) {
  if (n < 1 || n % 2 == 0) {
    throw Error(ErrorKind::kUsage,
                "ensemble size must be odd and >= 1, got " + std::to_string(n));
  }
  if (expected_count == 0) {
    throw Error(ErrorKind::kUsage, "ensemble batch is empty");
  }
  auto one_run = [&](std::size_t run) -> DisambiguationParse {
    CompletionRequest request;
    request.prompt = prompt;
    request.run_index = run;
    request.temperature = options.temperature;
    request.max_tokens = options.max_tokens;
    request.tag = options.tag;
    const CompletionResponse response =
        complete_with_retry(client, request, options.retry);
    if (response.status != CompletionStatus::kOk) {
      return RefusalSignal{classify_refusal(response), response.detail};
    }
    return parse_disambiguation_response(response.text, expected_count);
  };

  std::vector<DisambiguationParse> runs;
  runs.reserve(static_cast<std::size_t>(n));
  if (options.concurrent && n > 1) {
    std::vector<std::future<DisambiguationParse>> pending;
    for (int r = 0; r < n; ++r) {
      pending.push_back(std::async(std::launch::async, one_run, std::size_t(r)));
    }
    for (auto& f : pending) runs.push_back(f.get());
  } else {
    for (int r = 0; r < n; ++r) runs.push_back(one_run(std::size_t(r)));
  }
  return combine_runs(runs, expected_count);
}

}  // namespace dogwhistle
