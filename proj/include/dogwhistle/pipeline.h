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

#ifndef DOGWHISTLE_PIPELINE_H_
#define DOGWHISTLE_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dogwhistle/corpus.h"
#include "dogwhistle/error.h"
#include "dogwhistle/provider.h"
#include "json.hpp"

namespace dogwhistle {

inline constexpr const char* kVersion = "0.1.0";

struct CorpusInput {
  std::filesystem::path path;
  DocumentKind kind = DocumentKind::kInformal;
};

struct PromptSettings {
  std::string definition = "wikipedia";
  std::string question = "identify";
  bool ask_reasoning = true;
  // Unset: follow the provider's refusal_prone flag.
  std::optional<bool> moderation_preamble;
};

// Run config file (JSON); relative paths resolve against its directory.
//   {"glossary": "glossary.jsonl",
//    "corpora": [{"path": "congress.jsonl", "kind": "formal"}],
//    "sampling_policy": "sampling_policy.json",
//    "provider": "provider.json" | "mock-scripted" | {...},
//    "n": 3, "seed": 7, "output_dir": "out", "workers": 1,
//    "prompt": {"definition": "wikipedia", "question": "identify"}}
// A run manifest is also accepted; its "config" object is used.
struct RunConfig {
  std::filesystem::path glossary;
  std::vector<CorpusInput> corpora;
  std::optional<std::filesystem::path> sampling_policy;
  std::optional<ProviderConfig> provider;
  int n = 3;
  std::optional<std::uint64_t> seed;
  std::filesystem::path output_dir = "out";
  std::size_t workers = 1;
  PromptSettings prompt;
};

RunConfig parse_run_config(const nlohmann::json& config,
                           const std::filesystem::path& base_dir);
RunConfig load_run_config(const std::filesystem::path& path);

// Throws Error(kConfig) unless n is odd and >= 1 and workers >= 1.
void validate_run_config(const RunConfig& config);

// Canonical form; parse_run_config(to_json(c), "") reproduces c.
nlohmann::json to_json(const RunConfig& config);
nlohmann::json to_json(const ProviderConfig& config);
std::string config_hash(const RunConfig& config);

// 0 ok, 1 usage, 2 config, 3 data (and I/O), 4 provider.
int exit_code(ErrorKind kind);

// Runs one subcommand: extract, disambiguate, assemble, eval-detection,
// eval-disambiguation, validate-sample, validate-stats or analyze.
// args excludes the program name.
int dispatch(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err);

}  // namespace dogwhistle

#endif  // DOGWHISTLE_PIPELINE_H_
