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

#include "dogwhistle/pipeline.h"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "dogwhistle/dataset.h"
#include "dogwhistle/instances.h"

namespace dogwhistle {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

const fs::path kFixtures = DOGWHISTLE_FIXTURES;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("dogwhistle_pipeline_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::size_t count_lines(const fs::path& p) {
  std::ifstream in(p);
  std::size_t n = 0;
  std::string line;
  while (std::getline(in, line)) n += !line.empty();
  return n;
}

TEST(ExitCodes, Mapping) {
  EXPECT_EQ(exit_code(ErrorKind::kUsage), 1);
  EXPECT_EQ(exit_code(ErrorKind::kConfig), 2);
  EXPECT_EQ(exit_code(ErrorKind::kData), 3);
  EXPECT_EQ(exit_code(ErrorKind::kIo), 3);
  EXPECT_EQ(exit_code(ErrorKind::kProvider), 4);
}

TEST(Dispatch, UsageAndConfigErrors) {
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"frobnicate"}).code, 1);
  EXPECT_EQ(run({"extract", "--no-such-flag"}).code, 1);
  EXPECT_EQ(run({"--help"}).code, 0);
  const fs::path dir = fresh_dir("errors");
  EXPECT_EQ(run({"--config", (kFixtures / "run.json").string(), "--n", "2", "--output-dir",
                 dir.string(), "extract"})
                .code,
            2);
  EXPECT_EQ(run({"--config", "/nonexistent/run.json", "extract"}).code, 2);
  EXPECT_EQ(run({"--glossary", "/nonexistent/glossary.jsonl", "--output-dir", dir.string(),
                 "extract", "--informal", (kFixtures / "corpus/informal.jsonl").string()})
                .code,
            3);
  EXPECT_EQ(run({"--output-dir", dir.string(), "--glossary",
                 (kFixtures / "glossary.jsonl").string(), "eval-detection", "--gold",
                 (kFixtures / "eval/detection_gold.jsonl").string(), "--responses",
                 "/nonexistent/responses.jsonl"})
                .code,
            3);
}

TEST(Dispatch, ExtractWritesInstancesAndManifest) {
  const fs::path dir = fresh_dir("extract");
  const auto r = run({"--config", (kFixtures / "run.json").string(), "--output-dir",
                      dir.string(), "extract"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(count_lines(dir / "instances.jsonl"), 23u);
  std::ifstream summary_in(dir / "instances.summary.json");
  const json summary = json::parse(summary_in);
  EXPECT_EQ(summary["extraction"]["documents"], 24);
  EXPECT_EQ(summary["extraction"]["emitted"], 23);
  std::ifstream manifest_in(dir / "manifest.extract.json");
  const json manifest = json::parse(manifest_in);
  EXPECT_EQ(manifest["command"], "extract");
  EXPECT_EQ(manifest["seed"], 7);
  EXPECT_EQ(manifest["version"], kVersion);
  EXPECT_FALSE(manifest["config_hash"].get<std::string>().empty());

  // The manifest is itself a usable config.
  const fs::path again = fresh_dir("extract_again");
  const auto r2 = run({"--config", (dir / "manifest.extract.json").string(), "--output-dir",
                       again.string(), "extract"});
  ASSERT_EQ(r2.code, 0) << r2.err;
  std::ifstream a(dir / "instances.jsonl");
  std::ifstream b(again / "instances.jsonl");
  EXPECT_EQ(std::string(std::istreambuf_iterator<char>(a), {}),
            std::string(std::istreambuf_iterator<char>(b), {}));
}

TEST(Dispatch, FullMockPipeline) {
  const fs::path dir = fresh_dir("full");
  const std::vector<std::string> base = {"--config", (kFixtures / "run.json").string(),
                                         "--output-dir", dir.string()};
  auto with = [&](std::vector<std::string> extra) {
    auto args = base;
    args.insert(args.end(), extra.begin(), extra.end());
    return run(args);
  };
  ASSERT_EQ(with({"extract"}).code, 0);
  const auto d = with({"disambiguate"});
  ASSERT_EQ(d.code, 0) << d.err;
  EXPECT_EQ(count_lines(dir / "outcomes.jsonl"), 23u);
  const auto a = with({"assemble"});
  ASSERT_EQ(a.code, 0) << a.err;
  const auto records = load_records(dir / "dataset.jsonl");
  EXPECT_FALSE(records.empty());
  const auto z = with({"analyze", "--group-by", "in_group_year", "--years", "1990-2020"});
  ASSERT_EQ(z.code, 0) << z.err;
  EXPECT_TRUE(fs::exists(dir / "analysis.in_group_year.csv"));
  const auto s = with({"validate-sample", "--k", "5"});
  ASSERT_EQ(s.code, 0) << s.err;
  EXPECT_EQ(count_lines(dir / "validation_manifest.csv"), 6u);
  EXPECT_EQ(with({"validate-sample", "--k", "100000"}).code, 1);
}

TEST(Dispatch, EvalCommandsOnFixtures) {
  const fs::path dir = fresh_dir("eval");
  const auto det = run({"--output-dir", dir.string(), "--glossary",
                        (kFixtures / "glossary.jsonl").string(), "eval-detection", "--gold",
                        (kFixtures / "eval/detection_gold.jsonl").string(), "--responses",
                        (kFixtures / "eval/detection_responses.jsonl").string()});
  ASSERT_EQ(det.code, 0) << det.err;
  EXPECT_NE(det.out.find("85.0"), std::string::npos);
  const auto stats = run({"--output-dir", dir.string(), "validate-stats", "--labels",
                          (kFixtures / "eval/validation_labels.csv").string()});
  ASSERT_EQ(stats.code, 0) << stats.err;
  std::ifstream in(dir / "validation_stats.json");
  const json j = json::parse(in);
  EXPECT_NEAR(j["precision_strict"].get<double>(), 0.8525, 1e-9);
}

TEST(RunConfigTest, RoundTripAndValidation) {
  const RunConfig c = load_run_config(kFixtures / "run.json");
  EXPECT_EQ(c.n, 3);
  EXPECT_EQ(c.seed, 7u);
  EXPECT_TRUE(c.glossary.is_absolute());
  const RunConfig again = parse_run_config(to_json(c), "");
  EXPECT_EQ(to_json(again), to_json(c));
  EXPECT_EQ(config_hash(again), config_hash(c));
  RunConfig bad = c;
  bad.n = 4;
  EXPECT_THROW(validate_run_config(bad), Error);
  bad = c;
  bad.workers = 0;
  EXPECT_THROW(validate_run_config(bad), Error);
  bad = c;
  bad.prompt.definition = "nobody";
  EXPECT_THROW(validate_run_config(bad), Error);
  EXPECT_THROW(parse_run_config(json{{"provider", {{"kind", "x"}, {"api_key", "k"}}}}, "."),
               Error);
}

}  // namespace
}  // namespace dogwhistle
