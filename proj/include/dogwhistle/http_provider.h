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

#ifndef DOGWHISTLE_HTTP_PROVIDER_H_
#define DOGWHISTLE_HTTP_PROVIDER_H_

#include <string>

#include "dogwhistle/provider.h"

namespace dogwhistle {

// Client for OpenAI-compatible chat-completion endpoints. endpoint is the
// full URL of the completions route, e.g.
// "https://api.example.com/v1/chat/completions".
//
// Blocked output (finish_reason "content_filter", a promptFeedback
// blockReason, or a content-policy error) maps to kBlocked. Connection
// failures, timeouts and non-2xx responses map to kTransportError.
class OpenAiChatClient : public ProviderClient {
 public:
  // api_key may be empty for unauthenticated local endpoints.
  OpenAiChatClient(std::string name, std::string endpoint, std::string model,
                   std::string api_key, int timeout_seconds = 60);

  const std::string& name() const override { return name_; }
  CompletionResponse complete(const CompletionRequest& request) override;

  // Exposed for tests.
  static nlohmann::json request_body(const std::string& model,
                                     const CompletionRequest& request);
  static CompletionResponse interpret(int http_status, const std::string& body);

 private:
  std::string name_;
  std::string scheme_host_port_;
  std::string path_;
  std::string model_;
  std::string api_key_;
  int timeout_seconds_;
};

}  // namespace dogwhistle

#endif  // DOGWHISTLE_HTTP_PROVIDER_H_
