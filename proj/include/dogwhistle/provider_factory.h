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

#ifndef DOGWHISTLE_PROVIDER_FACTORY_H_
#define DOGWHISTLE_PROVIDER_FACTORY_H_

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>

#include "dogwhistle/mock_provider.h"
#include "dogwhistle/provider.h"

namespace dogwhistle {

// Sentence -> true label, keyed by whitespace-collapsed text.
class TruthTable {
 public:
  void add(std::string_view sentence, Label label);
  std::optional<Label> lookup(std::string_view sentence) const;
  std::size_t size() const { return labels_.size(); }

 private:
  std::unordered_map<std::string, Label> labels_;
};

// Newline-delimited {"sentence": "...", "label": "coded"} records.
TruthTable load_truth_table(const std::filesystem::path& path);

struct ProviderOptions {
  std::optional<std::size_t> max_inflight;  // overrides the config
  std::optional<std::filesystem::path> audit_log;
  // Truth for mock-stochastic; when unset the config's script file is read
  // as a truth table.
  std::optional<TruthTable> truth;
};

// Config for a provider named on the command line without a config file:
// "mock-scripted" or "mock-stochastic". Empty for other names.
std::optional<ProviderConfig> builtin_provider_config(std::string_view name);

// Builds the client stack: provider, then throttling, then auditing.
// Throws Error(kConfig) for a missing API key variable or mock inputs.
std::shared_ptr<ProviderClient> make_provider(const ProviderConfig& config,
                                              const ProviderOptions& options = {});

}  // namespace dogwhistle

#endif  // DOGWHISTLE_PROVIDER_FACTORY_H_
