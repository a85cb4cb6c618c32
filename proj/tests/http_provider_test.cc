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

#include <gtest/gtest.h>

#include <thread>

#include "dogwhistle/error.h"
#include "httplib.h"

namespace dogwhistle {
namespace {

using nlohmann::json;

TEST(OpenAiChat, RequestBody) {
  CompletionRequest req{"hi there"};
  req.max_tokens = 77;
  json body = OpenAiChatClient::request_body("m1", req);
  EXPECT_EQ(body["model"], "m1");
  EXPECT_EQ(body["messages"][0]["role"], "user");
  EXPECT_EQ(body["messages"][0]["content"], "hi there");
  EXPECT_EQ(body["max_tokens"], 77);
  EXPECT_FALSE(body.contains("temperature"));
  req.temperature = 0.7;
  EXPECT_DOUBLE_EQ(OpenAiChatClient::request_body("m1", req)["temperature"].get<double>(), 0.7);
}

TEST(OpenAiChat, InterpretSuccessAndBlocks) {
  const auto ok = OpenAiChatClient::interpret(
      200, R"({"choices":[{"message":{"content":"Yes."},"finish_reason":"stop"}]})");
  EXPECT_EQ(ok.status, CompletionStatus::kOk);
  EXPECT_EQ(ok.text, "Yes.");

  EXPECT_EQ(OpenAiChatClient::interpret(
                200, R"({"choices":[{"message":{"content":null},"finish_reason":"content_filter"}]})")
                .status,
            CompletionStatus::kBlocked);
  EXPECT_EQ(OpenAiChatClient::interpret(200, R"({"promptFeedback":{"blockReason":"SAFETY"}})")
                .status,
            CompletionStatus::kBlocked);
  EXPECT_EQ(OpenAiChatClient::interpret(
                400, R"({"error":{"code":"content_filter","message":"filtered"}})")
                .status,
            CompletionStatus::kBlocked);
}

TEST(OpenAiChat, InterpretFailures) {
  EXPECT_EQ(OpenAiChatClient::interpret(500, "oops").status, CompletionStatus::kTransportError);
  const auto rate = OpenAiChatClient::interpret(429, R"({"error":{"message":"slow down"}})");
  EXPECT_EQ(rate.status, CompletionStatus::kTransportError);
  EXPECT_EQ(rate.detail, "HTTP 429: slow down");
  EXPECT_EQ(OpenAiChatClient::interpret(200, "not json").status,
            CompletionStatus::kTransportError);
  EXPECT_EQ(OpenAiChatClient::interpret(200, R"({"choices":[]})").status,
            CompletionStatus::kTransportError);
}

TEST(OpenAiChat, RejectsRelativeEndpoint) {
  EXPECT_THROW(OpenAiChatClient("x", "localhost/v1", "m", ""), Error);
}

TEST(OpenAiChat, RoundTripAgainstLocalServer) {
  httplib::Server server;
  std::string seen_auth;
  json seen_body;
  server.Post("/v1/chat/completions", [&](const httplib::Request& req, httplib::Response& res) {
    seen_auth = req.get_header_value("Authorization");
    seen_body = json::parse(req.body);
    res.set_content(R"({"choices":[{"message":{"content":"1. coded - x"},"finish_reason":"stop"}]})",
                    "application/json");
  });
  const int port = server.bind_to_any_port("127.0.0.1");
  ASSERT_GT(port, 0);
  std::thread t([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  OpenAiChatClient client("local", "http://127.0.0.1:" + std::to_string(port) +
                                       "/v1/chat/completions",
                          "test-model", "secret", 5);
  const auto r = client.complete({"prompt text"});
  server.stop();
  t.join();
  EXPECT_EQ(r.status, CompletionStatus::kOk);
  EXPECT_EQ(r.text, "1. coded - x");
  EXPECT_EQ(seen_auth, "Bearer secret");
  EXPECT_EQ(seen_body["model"], "test-model");
}

TEST(OpenAiChat, UnreachableServerIsTransportError) {
  httplib::Server probe;
  const int port = probe.bind_to_any_port("127.0.0.1");
  probe.stop();
  OpenAiChatClient client("local", "http://127.0.0.1:" + std::to_string(port) + "/x", "m", "", 1);
  EXPECT_EQ(client.complete({"p"}).status, CompletionStatus::kTransportError);
}

}  // namespace
}  // namespace dogwhistle
