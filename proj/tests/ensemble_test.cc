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

#include <gtest/gtest.h>

#include <cstdio>
#include <memory>

#include "dogwhistle/error.h"
#include "dogwhistle/mock_provider.h"
#include "oracles/ensemble_oracle.h"

namespace dogwhistle {
namespace {

std::string case_name(std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "case-%03zu", i);
  return buf;
}

std::string numbered_prompt(std::size_t count) {
  std::string p = "Label each sentence.\n\n";
  for (std::size_t i = 0; i < count; ++i) {
    p += std::to_string(i + 1) + ". The " + case_name(i) + " sentence.\n";
  }
  return p;
}

// One scripted sentence per label tuple: run r answers tuple[r].
std::unique_ptr<ScriptedProvider> tuple_provider(const std::vector<std::vector<bool>>& tuples) {
  auto p = std::make_unique<ScriptedProvider>();
  for (std::size_t i = 0; i < tuples.size(); ++i) {
    ScriptedProvider::LabelRule rule;
    rule.sentence = case_name(i);
    for (bool b : tuples[i]) rule.labels.push_back(b ? Label::kCoded : Label::kNotCoded);
    rule.explanation = "tuple " + std::to_string(i);
    p->add_label_rule(rule);
  }
  return p;
}

class EnumerationTest : public ::testing::TestWithParam<int> {};

TEST_P(EnumerationTest, RetainsExactlyTheUnanimousTuples) {
  const int n = GetParam();
  const auto tuples = oracle::all_label_tuples(n);
  auto owned = tuple_provider(tuples);
  ScriptedProvider& provider = *owned;
  EnsembleOptions opts;
  opts.concurrent = n > 1;
  const auto out = run_ensemble(provider, numbered_prompt(tuples.size()), n, tuples.size(), opts);
  ASSERT_EQ(out.size(), tuples.size());
  std::size_t retained = 0;
  for (std::size_t i = 0; i < tuples.size(); ++i) {
    const bool keep = oracle::unanimous(tuples[i]);
    EXPECT_EQ(out[i].status == OutcomeStatus::kRetained, keep) << i;
    EXPECT_EQ(out[i].n_used, static_cast<std::size_t>(n));
    if (keep) {
      ++retained;
      ASSERT_TRUE(out[i].verdict);
      EXPECT_EQ(out[i].verdict->label == Label::kCoded, tuples[i][0]);
      EXPECT_EQ(out[i].verdict->explanation, "tuple " + std::to_string(i));
    } else {
      EXPECT_EQ(out[i].status, OutcomeStatus::kDiscardedInconsistent);
      EXPECT_FALSE(out[i].verdict);
    }
  }
  EXPECT_EQ(retained, oracle::expected_retained(n));
  EXPECT_EQ(provider.calls(), static_cast<std::size_t>(n));
}

INSTANTIATE_TEST_SUITE_P(OddN, EnumerationTest, ::testing::Values(1, 3, 5));

TEST(RunEnsemble, AnyRefusalRefusesTheBatch) {
  ScriptedProvider p;
  p.add_refusal_rule({"case-001", RefusalKind::kBlocked, std::set<std::size_t>{2}});
  const auto out = run_ensemble(p, numbered_prompt(3), 3, 3);
  for (const auto& o : out) {
    EXPECT_EQ(o.status, OutcomeStatus::kRefused);
    EXPECT_EQ(o.refusal, RefusalKind::kBlocked);
    EXPECT_FALSE(o.verdict);
  }
}

TEST(RunEnsemble, WrongItemCountIsMalformedRefusal) {
  ScriptedProvider p;
  const auto out = run_ensemble(p, numbered_prompt(3), 1, 4);
  ASSERT_EQ(out.size(), 4u);
  EXPECT_EQ(out[0].refusal, RefusalKind::kMalformed);
}

TEST(RunEnsemble, RejectsEvenOrZeroN) {
  ScriptedProvider p;
  EXPECT_THROW(run_ensemble(p, numbered_prompt(1), 2, 1), Error);
  EXPECT_THROW(run_ensemble(p, numbered_prompt(1), 0, 1), Error);
  EXPECT_THROW(run_ensemble(p, numbered_prompt(1), 3, 0), Error);
}

TEST(RunEnsemble, SequentialAndConcurrentAgree) {
  const auto tuples = oracle::all_label_tuples(3);
  auto a = tuple_provider(tuples);
  auto b = tuple_provider(tuples);
  EnsembleOptions seq;
  seq.concurrent = false;
  EXPECT_EQ(run_ensemble(*a, numbered_prompt(8), 3, 8, seq),
            run_ensemble(*b, numbered_prompt(8), 3, 8));
}

TEST(CombineRuns, RefusalInLastRunWins) {
  std::vector<DisambiguationParse> runs = {
      std::vector<SentenceVerdict>{{0, Label::kCoded, "a"}},
      std::vector<SentenceVerdict>{{0, Label::kCoded, "b"}},
      RefusalSignal{RefusalKind::kDeclined, "no"}};
  const auto out = combine_runs(runs, 1);
  EXPECT_EQ(out[0].status, OutcomeStatus::kRefused);
  EXPECT_EQ(out[0].refusal, RefusalKind::kDeclined);
  runs.pop_back();
  runs.push_back(std::vector<SentenceVerdict>{{0, Label::kCoded, "c"}});
  const auto kept = combine_runs(runs, 1);
  EXPECT_EQ(kept[0].status, OutcomeStatus::kRetained);
  EXPECT_EQ(kept[0].verdict->explanation, "a");
}

TEST(OutcomeStatusText, RoundTrip) {
  for (auto s : {OutcomeStatus::kRetained, OutcomeStatus::kDiscardedInconsistent,
                 OutcomeStatus::kRefused}) {
    EXPECT_EQ(parse_outcome_status(to_string(s)), s);
  }
}

}  // namespace
}  // namespace dogwhistle
