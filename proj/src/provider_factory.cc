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

#include "dogwhistle/provider_factory.h"

#include <cstdlib>
#include <fstream>

#include "dogwhistle/error.h"
#include "dogwhistle/http_provider.h"
#include "dogwhistle/text.h"
#include "json.hpp"

namespace dogwhistle {

void TruthTable::add(std::string_view sentence, Label label) {
  labels_[normalize(sentence, /*fold=*/false)] = label;
}

std::optional<Label> TruthTable::lookup(std::string_view sentence) const {
  auto it = labels_.find(normalize(sentence, /*fold=*/false));
  if (it == labels_.end()) return std::nullopt;
  return it->second;
}

TruthTable load_truth_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  TruthTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto j = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded() || !j.is_object() || !j.contains("sentence") ||
        !j["sentence"].is_string() || !j.contains("label") ||
        !j["label"].is_string()) {
      throw ParseError(line_no, "expected {\"sentence\": ..., \"label\": ...}");
    }
    auto label = parse_label(j["label"].get<std::string>());
    if (!label) throw ParseError(line_no, "unknown label");
    table.add(j["sentence"].get<std::string>(), *label);
  }
  return table;
}

std::optional<ProviderConfig> builtin_provider_config(std::string_view name) {
  if (name != "mock-scripted" && name != "mock-stochastic") return std::nullopt;
  ProviderConfig c;
  c.name = std::string(name);
  c.kind = std::string(name);
  return c;
}

std::shared_ptr<ProviderClient> make_provider(const ProviderConfig& config,
                                              const ProviderOptions& options) {
  std::shared_ptr<ProviderClient> client;
  if (config.kind == "openai-chat") {
    std::string key;
    if (!config.api_key_env.empty()) {
      const char* value = std::getenv(config.api_key_env.c_str());
      if (value == nullptr || *value == '\0') {
        throw Error(ErrorKind::kConfig, "environment variable " +
                                            config.api_key_env + " is not set");
      }
      key = value;
    }
    client = std::make_shared<OpenAiChatClient>(config.name, config.endpoint,
                                                config.model, key,
                                                config.timeout_seconds);
  } else if (config.kind == "mock-scripted") {
    if (config.script.empty()) {
      client = std::make_shared<ScriptedProvider>(config.name);
    } else {
      client = ScriptedProvider::from_file(config.script, config.name);
    }
  } else if (config.kind == "mock-stochastic") {
    TruthTable truth;
    if (options.truth) {
      truth = *options.truth;
    } else if (!config.script.empty()) {
      truth = load_truth_table(config.script);
    } else {
      throw Error(ErrorKind::kConfig,
                  "mock-stochastic needs a truth table (script) or gold labels");
    }
    client = std::make_shared<StochasticProvider>(
        config.name,
        [truth = std::move(truth)](std::string_view s) { return truth.lookup(s); },
        config.flip_probability, config.seed);
  } else {
    throw Error(ErrorKind::kConfig, "unknown provider kind '" + config.kind + "'");
  }

  const std::size_t inflight = options.max_inflight.value_or(config.max_inflight);
  if (inflight == 0) throw Error(ErrorKind::kConfig, "max_inflight must be positive");
  client = std::make_shared<ThrottledClient>(std::move(client), inflight,
                                             config.requests_per_minute / 60.0);
  if (options.audit_log) {
    client = std::make_shared<AuditingClient>(
        std::move(client), std::make_shared<AuditLog>(*options.audit_log));
  }
  return client;
}

}  // namespace dogwhistle
