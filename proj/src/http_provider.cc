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

#include "dogwhistle/http_provider.h"

#include "dogwhistle/error.h"
#include "httplib.h"

namespace dogwhistle {

using nlohmann::json;

OpenAiChatClient::OpenAiChatClient(std::string name, std::string endpoint,
                                   std::string model, std::string api_key,
                                   int timeout_seconds)
    : name_(std::move(name)), model_(std::move(model)),
      api_key_(std::move(api_key)), timeout_seconds_(timeout_seconds) {
  const std::size_t scheme_end = endpoint.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(ErrorKind::kConfig, "endpoint must be an absolute URL: " + endpoint);
  }
  const std::size_t path_start = endpoint.find('/', scheme_end + 3);
  scheme_host_port_ = endpoint.substr(0, path_start);
  path_ = path_start == std::string::npos ? "/" : endpoint.substr(path_start);
}

json OpenAiChatClient::request_body(const std::string& model,
                                    const CompletionRequest& request) {
  json body = {{"model", model},
               {"messages", json::array({{{"role", "user"},
                                          {"content", request.prompt}}})},
               {"max_tokens", request.max_tokens}};
  if (request.temperature) body["temperature"] = *request.temperature;
  return body;
}

CompletionResponse OpenAiChatClient::interpret(int http_status,
                                               const std::string& body) {
  json j = json::parse(body, nullptr, /*allow_exceptions=*/false);
  if (http_status < 200 || http_status >= 300) {
    std::string message;
    if (!j.is_discarded() && j.contains("error")) {
      const json& err = j["error"];
      message = err.is_object() ? err.value("message", "") : err.dump();
      const std::string code = err.is_object() && err.contains("code") &&
                                       err["code"].is_string()
                                   ? err["code"].get<std::string>()
                                   : "";
      if (code == "content_filter" ||
          message.find("content management policy") != std::string::npos) {
        return {CompletionStatus::kBlocked, "", "content_filter: " + message};
      }
    }
    return {CompletionStatus::kTransportError, "",
            "HTTP " + std::to_string(http_status) +
                (message.empty() ? "" : ": " + message)};
  }
  if (j.is_discarded() || !j.is_object()) {
    return {CompletionStatus::kTransportError, "", "unparseable response body"};
  }
  if (j.contains("promptFeedback") && j["promptFeedback"].is_object() &&
      j["promptFeedback"].contains("blockReason")) {
    std::string reason = j["promptFeedback"]["blockReason"].dump();
    return {CompletionStatus::kBlocked, "", "block reason: " + reason};
  }
  if (!j.contains("choices") || !j["choices"].is_array() || j["choices"].empty()) {
    return {CompletionStatus::kTransportError, "", "response has no choices"};
  }
  const json& choice = j["choices"][0];
  const std::string finish =
      choice.contains("finish_reason") && choice["finish_reason"].is_string()
          ? choice["finish_reason"].get<std::string>()
          : "";
  std::string text;
  if (choice.contains("message") && choice["message"].is_object() &&
      choice["message"].contains("content") &&
      choice["message"]["content"].is_string()) {
    text = choice["message"]["content"].get<std::string>();
  }
  if (finish == "content_filter") {
    return {CompletionStatus::kBlocked, text, "finish_reason: content_filter"};
  }
  return {CompletionStatus::kOk, std::move(text), finish};
}

CompletionResponse OpenAiChatClient::complete(const CompletionRequest& request) {
  httplib::Client client(scheme_host_port_);
  client.set_connection_timeout(timeout_seconds_, 0);
  client.set_read_timeout(timeout_seconds_, 0);
  client.set_write_timeout(timeout_seconds_, 0);
  httplib::Headers headers;
  if (!api_key_.empty()) {
    headers.emplace("Authorization", "Bearer " + api_key_);
  }
  const std::string body = request_body(model_, request)
                               .dump(-1, ' ', false, json::error_handler_t::replace);
  auto result = client.Post(path_, headers, body, "application/json");
  if (!result) {
    return {CompletionStatus::kTransportError, "",
            "request failed: " + httplib::to_string(result.error())};
  }
  return interpret(result->status, result->body);
}

}  // namespace dogwhistle
