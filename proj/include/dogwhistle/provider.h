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

#ifndef DOGWHISTLE_PROVIDER_H_
#define DOGWHISTLE_PROVIDER_H_

#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "json.hpp"

namespace dogwhistle {

struct CompletionRequest {
  std::string prompt;
  // Which of the N ensemble inferences this is. Each run is a separate
  // completion; providers never see earlier runs.
  std::size_t run_index = 0;
  std::optional<double> temperature;  // provider default when unset
  int max_tokens = 1024;
  // Free-form correlation id for the audit log, e.g. a batch key.
  std::string tag;
};

enum class CompletionStatus {
  kOk,
  kBlocked,         // the provider withheld output
  kTransportError,  // network, HTTP or protocol failure
};

struct CompletionResponse {
  CompletionStatus status = CompletionStatus::kOk;
  std::string text;
  std::string detail;  // block reason or error message
};

std::string_view to_string(CompletionStatus status);
std::optional<CompletionStatus> parse_completion_status(std::string_view text);

// A chat-completion backend. Implementations must be safe to call from
// several threads at once.
class ProviderClient {
 public:
  virtual ~ProviderClient() = default;
  virtual const std::string& name() const = 0;
  virtual CompletionResponse complete(const CompletionRequest& request) = 0;
};

// Token bucket: `rate` tokens per second, holding at most `burst`.
class TokenBucket {
 public:
  using Clock = std::chrono::steady_clock;

  TokenBucket(double rate, double burst);

  // Blocks until a token is available.
  void acquire();
  bool try_acquire();

 private:
  void refill(Clock::time_point now);

  std::mutex mu_;
  double rate_;
  double burst_;
  double tokens_;
  Clock::time_point last_;
};

// Bounds in-flight requests and request rate for a wrapped provider.
class ThrottledClient : public ProviderClient {
 public:
  // requests_per_second <= 0 disables rate limiting.
  ThrottledClient(std::shared_ptr<ProviderClient> inner,
                  std::size_t max_inflight, double requests_per_second);

  const std::string& name() const override { return inner_->name(); }
  CompletionResponse complete(const CompletionRequest& request) override;

  std::size_t peak_inflight() const;

 private:
  std::shared_ptr<ProviderClient> inner_;
  std::size_t max_inflight_;
  std::optional<TokenBucket> bucket_;
  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::size_t inflight_ = 0;
  std::size_t peak_ = 0;
};

// Newline-delimited request/response transcripts. Each record carries
// prompt_hash, run, status and response, which is also the exact-replay
// format the scripted mock provider reads.
class AuditLog {
 public:
  explicit AuditLog(const std::filesystem::path& path);

  void record(std::string_view provider, const CompletionRequest& request,
              const CompletionResponse& response);

 private:
  std::mutex mu_;
  std::ofstream out_;
};

std::string prompt_hash(std::string_view prompt);

class AuditingClient : public ProviderClient {
 public:
  AuditingClient(std::shared_ptr<ProviderClient> inner,
                 std::shared_ptr<AuditLog> log)
      : inner_(std::move(inner)), log_(std::move(log)) {}

  const std::string& name() const override { return inner_->name(); }
  CompletionResponse complete(const CompletionRequest& request) override;

 private:
  std::shared_ptr<ProviderClient> inner_;
  std::shared_ptr<AuditLog> log_;
};

// Retries transport errors only; blocked output and refusals come back
// unchanged on the first attempt.
struct RetryPolicy {
  int max_retries = 3;
  std::chrono::milliseconds base_delay{500};
  double multiplier = 2.0;
  std::chrono::milliseconds max_delay{8000};
  std::function<void(std::chrono::milliseconds)> sleep;  // default: sleep_for
};

CompletionResponse complete_with_retry(ProviderClient& client,
                                       const CompletionRequest& request,
                                       const RetryPolicy& policy,
                                       int* attempts = nullptr);

// Provider config file (JSON). The API key is never stored; api_key_env
// names the environment variable holding it.
struct ProviderConfig {
  std::string name;
  std::string kind;  // "openai-chat", "mock-scripted", "mock-stochastic"
  std::string endpoint;
  std::string model;
  std::string api_key_env;
  double requests_per_minute = 0;  // 0 = unlimited
  std::size_t max_inflight = 4;
  std::optional<double> temperature;
  int max_tokens = 1024;
  int timeout_seconds = 60;
  bool refusal_prone = false;
  std::filesystem::path script;  // mock-scripted rules / truth for stochastic
  double flip_probability = 0.0;  // mock-stochastic
  std::uint64_t seed = 0;         // mock-stochastic
};

ProviderConfig parse_provider_config(const nlohmann::json& config,
                                     const std::filesystem::path& base_dir);
ProviderConfig load_provider_config(const std::filesystem::path& path);

}  // namespace dogwhistle

#endif  // DOGWHISTLE_PROVIDER_H_
