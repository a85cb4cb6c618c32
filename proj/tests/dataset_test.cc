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

#include "dogwhistle/dataset.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "dogwhistle/error.h"

namespace dogwhistle {
namespace {

Glossary dataset_glossary() {
  return Glossary({
      {"ic", "inner city", {"inner city"}, "poor Black neighborhoods", "racial", Sphere::kFormal},
      {"based", "based", {"based"}, "aligned with the far right", "conservative",
       Sphere::kInformal},
  });
}

PotentialInstance make_instance(int i) {
  PotentialInstance in;
  in.instance_id = "doc" + std::to_string(i) + ":0";
  in.doc_id = "doc" + std::to_string(i);
  const bool formal = i % 2 == 0;
  in.kind = formal ? DocumentKind::kFormal : DocumentKind::kInformal;
  in.matched_term = formal ? "ic" : "based";
  in.matched_surface_form = formal ? "inner city" : "based";
  in.excerpt = formal ? "We fund inner city schools, item " + std::to_string(i) + "."
                      : "That is so based, post " + std::to_string(i);
  in.date = Date{2000 + i % 10, 1, 1 + i % 28};
  if (formal) {
    in.speaker = "Rep. " + std::to_string(i);
    in.chamber = Chamber::kHouse;
    in.party = "R";
  } else {
    in.community = "forum";
  }
  return in;
}

InstanceOutcome make_outcome(const PotentialInstance& in, OutcomeStatus status,
                             std::optional<Label> label = std::nullopt) {
  InstanceOutcome o;
  o.instance_id = in.instance_id;
  o.entry_id = in.matched_term;
  o.status = status;
  o.label = label;
  o.explanation = label ? "because" : "";
  if (status == OutcomeStatus::kRefused) o.refusal = RefusalKind::kBlocked;
  o.n = 3;
  o.provider = "mock";
  return o;
}

struct Fixture20 {
  std::vector<PotentialInstance> instances;
  std::vector<InstanceOutcome> outcomes;
};

// 12 retained coded, 3 retained not coded, 3 discarded, 2 refused.
Fixture20 fixture20() {
  Fixture20 f;
  for (int i = 0; i < 20; ++i) {
    f.instances.push_back(make_instance(i));
    const auto& in = f.instances.back();
    if (i < 12) {
      f.outcomes.push_back(make_outcome(in, OutcomeStatus::kRetained, Label::kCoded));
    } else if (i < 15) {
      f.outcomes.push_back(make_outcome(in, OutcomeStatus::kRetained, Label::kNotCoded));
    } else if (i < 18) {
      f.outcomes.push_back(make_outcome(in, OutcomeStatus::kDiscardedInconsistent));
    } else {
      f.outcomes.push_back(make_outcome(in, OutcomeStatus::kRefused));
    }
  }
  return f;
}

TEST(Assemble, OnlyRetainedCodedBecomeRecords) {
  const Glossary g = dataset_glossary();
  const auto f = fixture20();
  AssemblySummary s;
  const auto records = assemble_records(f.outcomes, f.instances, g, &s);
  ASSERT_EQ(records.size(), 12u);
  EXPECT_EQ(s.records, 12u);
  EXPECT_EQ(s.retained_not_coded, 3u);
  EXPECT_EQ(s.discarded, 3u);
  EXPECT_EQ(s.refused, 2u);
  EXPECT_EQ(s.formal, 6u);
  EXPECT_EQ(s.informal, 6u);
  EXPECT_EQ(s.distinct_dog_whistles, 2u);
  const RecordChecker checker(g);
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    EXPECT_EQ(r.provenance.instance_id, f.instances[i].instance_id);
    EXPECT_EQ(r.record_id, make_record_id(r.provenance.instance_id, r.dog_whistle));
    EXPECT_EQ(r.content, f.instances[i].excerpt);
    EXPECT_EQ(r.dog_whistle_definition, g.find(r.dog_whistle)->coded_meaning);
    EXPECT_FALSE(checker.check(r)) << *checker.check(r);
  }
}

TEST(Assemble, OrphansAreReported) {
  const Glossary g = dataset_glossary();
  auto f = fixture20();
  f.instances.erase(f.instances.begin() + 3);
  try {
    assemble_records(f.outcomes, f.instances, g);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kData);
    EXPECT_NE(std::string(e.what()).find("doc3:0"), std::string::npos);
  }
  auto mismatched = fixture20();
  mismatched.outcomes[0].entry_id = "based";
  EXPECT_THROW(assemble_records(mismatched.outcomes, mismatched.instances, g), Error);
}

TEST(RecordCheckerTest, FlagsBrokenRecords) {
  const Glossary g = dataset_glossary();
  const RecordChecker checker(g);
  const auto f = fixture20();
  const auto base = assemble_records(f.outcomes, f.instances, g).front();
  auto r = base;
  r.dog_whistle = "nope";
  EXPECT_TRUE(checker.check(r));
  r = base;
  r.content = "nothing relevant";
  EXPECT_TRUE(checker.check(r));
  r = base;
  r.community = "forum";
  EXPECT_TRUE(checker.check(r));
}

TEST(Dedup, KeepsLowestIdInOriginalOrder) {
  const Glossary g = dataset_glossary();
  const auto f = fixture20();
  auto records = assemble_records(f.outcomes, f.instances, g);
  const std::size_t original = records.size();
  auto copy = records[4];
  copy.record_id = "0000000000000000";
  copy.provenance.instance_id = "dup";
  records.push_back(copy);
  auto near_copy = records[5];
  near_copy.record_id = "ffffffffffffffff";
  near_copy.date.day += 1;
  records.push_back(near_copy);
  const auto d = deduplicate(records);
  EXPECT_EQ(d.removed, 1u);
  ASSERT_EQ(d.records.size(), original + 1);
  // The copy has the lower id, so it replaces records[4] at its own position.
  EXPECT_EQ(d.records[original - 1].record_id, "0000000000000000");
  EXPECT_EQ(d.records[4].record_id, records[5].record_id);
  EXPECT_EQ(std::count_if(d.records.begin(), d.records.end(),
                          [](const auto& r) { return r.provenance.instance_id == "dup"; }),
            1);
  EXPECT_EQ(deduplicate(d.records).removed, 0u);
}

std::vector<SilentSignalRecord> many_records(int count) {
  std::vector<SilentSignalRecord> out;
  for (int i = 0; i < count; ++i) {
    SilentSignalRecord r;
    r.provenance.instance_id = "i" + std::to_string(i);
    r.dog_whistle = "based";
    r.record_id = make_record_id(r.provenance.instance_id, r.dog_whistle);
    r.content = "based " + std::to_string(i);
    out.push_back(r);
  }
  return out;
}

TEST(Sampling, ReproducibleSortedAndWithoutReplacement) {
  const auto records = many_records(1000);
  const auto a = sample_for_validation(records, 400, 9);
  const auto b = sample_for_validation(records, 400, 9);
  EXPECT_EQ(a, b);
  ASSERT_EQ(a.size(), 400u);
  std::set<std::string> ids;
  for (const auto& r : a) ids.insert(r.record_id);
  EXPECT_EQ(ids.size(), 400u);
  EXPECT_TRUE(std::is_sorted(a.begin(), a.end(), [](const auto& x, const auto& y) {
    return x.record_id < y.record_id;
  }));
  EXPECT_NE(sample_for_validation(records, 400, 10), a);
  EXPECT_EQ(sample_for_validation(records, 1000, 1).size(), 1000u);
  try {
    sample_for_validation(records, 1001, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kUsage);
  }
}

// Each record lands in the sample with probability close to k / n.
TEST(Sampling, InclusionIsRoughlyUniform) {
  const auto records = many_records(50);
  std::map<std::string, int> hits;
  const int trials = 4000;
  for (int s = 0; s < trials; ++s) {
    for (const auto& r : sample_for_validation(records, 10, static_cast<std::uint64_t>(s))) {
      ++hits[r.record_id];
    }
  }
  ASSERT_EQ(hits.size(), 50u);
  for (const auto& [id, h] : hits) EXPECT_NEAR(h / double(trials), 0.2, 0.04) << id;
}

TEST(Validation, StatsExample) {
  std::vector<ValidationLabel> labels;
  for (int i = 0; i < 400; ++i) {
    const Judgment j = i < 341   ? Judgment::kCodedMatch
                       : i < 358 ? Judgment::kCodedNovelSense
                                 : Judgment::kNotCoded;
    labels.push_back({"r" + std::to_string(i), j, ""});
  }
  const auto s = compute_validation_stats(labels);
  EXPECT_EQ(s.total, 400u);
  EXPECT_NEAR(s.precision_strict * 100, 85.25, 1e-9);
  EXPECT_NEAR(s.precision_adjusted * 100, 89.5, 1e-9);

  auto unlabeled = labels;
  unlabeled[7].judgment.reset();
  EXPECT_THROW(compute_validation_stats(unlabeled), Error);
  EXPECT_THROW(compute_validation_stats(labels, {"r0", "r1"}), Error);
}

TEST(Validation, ManifestRoundTrip) {
  const Glossary g = dataset_glossary();
  const auto f = fixture20();
  const auto records = assemble_records(f.outcomes, f.instances, g);
  std::ostringstream out;
  write_validation_manifest(out, records);
  std::istringstream in(out.str());
  const auto labels = read_validation_labels(in);
  ASSERT_EQ(labels.size(), records.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    EXPECT_EQ(labels[i].record_id, records[i].record_id);
    EXPECT_FALSE(labels[i].judgment);
  }
  EXPECT_EQ(parse_judgment("coded_novel_sense"), Judgment::kCodedNovelSense);
  EXPECT_FALSE(parse_judgment("maybe"));
}

TEST(RecordJson, RoundTripIsByteIdentical) {
  const Glossary g = dataset_glossary();
  const auto f = fixture20();
  const auto records = assemble_records(f.outcomes, f.instances, g);
  std::ostringstream first;
  write_records(first, records);
  std::istringstream in(first.str());
  const auto again = read_records(in);
  EXPECT_EQ(again, records);
  std::ostringstream second;
  write_records(second, again);
  EXPECT_EQ(first.str(), second.str());
  auto bad = to_json(records[0]);
  bad["community"] = "x";
  EXPECT_THROW(record_from_json(bad), Error);
}

TEST(OutcomeJson, RoundTripAndValidation) {
  for (const auto& o : fixture20().outcomes) {
    EXPECT_EQ(outcome_from_json(to_json(o)), o);
  }
  auto bad = to_json(fixture20().outcomes[0]);
  bad.erase("label");
  EXPECT_THROW(outcome_from_json(bad), Error);
}

}  // namespace
}  // namespace dogwhistle
