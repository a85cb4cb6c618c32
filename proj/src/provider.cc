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

#include "dogwhistle/provider.h"

#include <algorithm>
#include <thread>

#include "dogwhistle/error.h"
#include "dogwhistle/hash.h"

namespace dogwhistle {

using nlohmann::json;

std::string_view to_string(CompletionStatus status) {
  switch (status) {
    case CompletionStatus::kOk:
      return "ok";
    case CompletionStatus::kBlocked:
      return "blocked";
    case CompletionStatus::kTransportError:
      return "transport";
  }
  return "ok";
}

std::optional<CompletionStatus> parse_completion_status(std::string_view text) {
  if (text == "ok") return CompletionStatus::kOk;
  if (text == "blocked") return CompletionStatus::kBlocked;
  if (text == "transport") return CompletionStatus::kTransportError;
  return std::nullopt;
}

TokenBucket::TokenBucket(double rate, double burst)
    : rate_(rate), burst_(std::max(1.0, burst)), tokens_(burst_),
      last_(Clock::now()) {}

void TokenBucket::refill(Clock::time_point now) {
  const std::chrono::duration<double> elapsed = now - last_;
  tokens_ = std::min(burst_, tokens_ + elapsed.count() * rate_);
  last_ = now;
}

bool TokenBucket::try_acquire() {
  std::lock_guard<std::mutex> lock(mu_);
  refill(Clock::now());
  if (tokens_ < 1.0) return false;
  tokens_ -= 1.0;
  return true;
}

void TokenBucket::acquire() {
  for (;;) {
    std::chrono::duration<double> wait{0};
    {
      std::lock_guard<std::mutex> lock(mu_);
      refill(Clock::now());
      if (tokens_ >= 1.0) {
        tokens_ -= 1.0;
        return;
      }
      wait = std::chrono::duration<double>((1.0 - tokens_) / rate_);
    }
    std::this_thread::sleep_for(wait);
  }
}

ThrottledClient::ThrottledClient(std::shared_ptr<ProviderClient> inner,
                                 std::size_t max_inflight,
                                 double requests_per_second)
    : inner_(std::move(inner)), max_inflight_(std::max<std::size_t>(1, max_inflight)) {
  if (requests_per_second > 0) {
    bucket_.emplace(requests_per_second, std::max(1.0, requests_per_second));
  }
}

CompletionResponse ThrottledClient::complete(const CompletionRequest& request) {
  {
    std::unique_lock<std::mutex> lock(mu_);
    cv_.wait(lock, [this] { return inflight_ < max_inflight_; });
    ++inflight_;
    peak_ = std::max(peak_, inflight_);
  }
  if (bucket_) bucket_->acquire();
  CompletionResponse response;
  try {
    response = inner_->complete(request);
  } catch (...) {
    std::lock_guard<std::mutex> lock(mu_);
    --inflight_;
    cv_.notify_one();
    throw;
  }
  {
    std::lock_guard<std::mutex> lock(mu_);
    --inflight_;
  }
  cv_.notify_one();
  return response;
}

std::size_t ThrottledClient::peak_inflight() const {
  std::lock_guard<std::mutex> lock(mu_);
  return peak_;
}

std::string prompt_hash(std::string_view prompt) {
  return hex64(fnv1a64(prompt));
}

AuditLog::AuditLog(const std::filesystem::path& path) : out_(path) {
  if (!out_) throw Error(ErrorKind::kIo, "cannot open audit log " + path.string());
}

void AuditLog::record(std::string_view provider,
                      const CompletionRequest& request,
                      const CompletionResponse& response) {
  json line = {{"provider", provider},
               {"tag", request.tag},
               {"run", request.run_index},
               {"prompt_hash", prompt_hash(request.prompt)},
               {"prompt", request.prompt},
               {"status", to_string(response.status)},
               {"response", response.text},
               {"detail", response.detail}};
  const std::string text =
      line.dump(-1, ' ', false, json::error_handler_t::replace);
  std::lock_guard<std::mutex> lock(mu_);
  out_ << text << '\n';
  out_.flush();
}

CompletionResponse AuditingClient::complete(const CompletionRequest& request) {
  CompletionResponse response = inner_->complete(request);
  log_->record(inner_->name(), request, response);
  return response;
}

CompletionResponse complete_with_retry(ProviderClient& client,
                                       const CompletionRequest& request,
                                       const RetryPolicy& policy,
                                       int* attempts) {
  std::chrono::milliseconds delay = policy.base_delay;
  int attempt = 0;
  for (;;) {
    ++attempt;
    CompletionResponse response = client.complete(request);
    if (response.status != CompletionStatus::kTransportError ||
        attempt > policy.max_retries) {
      if (attempts) *attempts = attempt;
      return response;
    }
    if (policy.sleep) {
      policy.sleep(delay);
    } else {
      std::this_thread::sleep_for(delay);
    }
    delay = std::min(policy.max_delay,
                     std::chrono::milliseconds(static_cast<long long>(
                         static_cast<double>(delay.count()) * policy.multiplier)));
  }
}

ProviderConfig parse_provider_config(const json& config,
                                     const std::filesystem::path& base_dir) {
  if (!config.is_object()) {
    throw Error(ErrorKind::kConfig, "provider config must be a JSON object");
  }
  ProviderConfig pc;
  try {
    pc.name = config.value("name", "");
    pc.kind = config.value("kind", "");
    pc.endpoint = config.value("endpoint", "");
    pc.model = config.value("model", "");
    pc.api_key_env = config.value("api_key_env", "");
    pc.max_inflight = config.value("max_inflight", std::size_t{4});
    pc.max_tokens = config.value("max_tokens", 1024);
    pc.timeout_seconds = config.value("timeout_seconds", 60);
    pc.refusal_prone = config.value("refusal_prone", false);
    pc.flip_probability = config.value("flip_probability", 0.0);
    pc.seed = config.value("seed", std::uint64_t{0});
    if (auto rl = config.find("rate_limit"); rl != config.end()) {
      pc.requests_per_minute = rl->value("requests_per_minute", 0.0);
      pc.max_inflight = rl->value("max_inflight", pc.max_inflight);
    }
    if (auto t = config.find("temperature"); t != config.end() && !t->is_null()) {
      pc.temperature = t->get<double>();
    }
    if (auto s = config.find("script"); s != config.end() && s->is_string()) {
      std::filesystem::path p = s->get<std::string>();
      pc.script = p.is_absolute() ? p : base_dir / p;
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kConfig, std::string("provider config: ") + e.what());
  }
  if (config.contains("api_key")) {
    throw Error(ErrorKind::kConfig,
                "provider config must not contain an API key; use api_key_env");
  }
  if (pc.name.empty()) pc.name = pc.kind;
  if (pc.kind != "openai-chat" && pc.kind != "mock-scripted" &&
      pc.kind != "mock-stochastic") {
    throw Error(ErrorKind::kConfig, "unknown provider kind '" + pc.kind + "'");
  }
  if (pc.kind == "openai-chat" && (pc.endpoint.empty() || pc.model.empty())) {
    throw Error(ErrorKind::kConfig, "openai-chat provider needs endpoint and model");
  }
  if (pc.flip_probability < 0.0 || pc.flip_probability > 1.0) {
    throw Error(ErrorKind::kConfig, "flip_probability outside [0, 1]");
  }
  return pc;
}

ProviderConfig load_provider_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::kConfig, "cannot open provider config " + path.string());
  }
  json config = json::parse(in, nullptr, /*allow_exceptions=*/false);
  if (config.is_discarded()) {
    throw Error(ErrorKind::kConfig, "provider config is not valid JSON");
  }
  return parse_provider_config(config, path.parent_path());
}

}  // namespace dogwhistle
