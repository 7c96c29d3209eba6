// Copyright 2026 The senseforge Authors
// SPDX-License-Identifier: Apache-2.0
#include "senseforge/llm.hpp"

#include <gtest/gtest.h>

#include <cstdlib>

#include "senseforge/error.hpp"
#include "stub_server.hpp"

namespace senseforge {
namespace {

using namespace std::chrono_literals;
using testing::StubLlmServer;
using Reply = StubLlmServer::Reply;

Endpoint fast_endpoint(const StubLlmServer& server) {
  Endpoint e;
  e.url = server.url();
  e.api_key = "test-key";
  e.model = "stub-model";
  e.timeout = 5s;
  e.retry.initial_delay = 10ms;
  return e;
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error";
  return ErrorCode::InvalidArgument;
}

TEST(LlmClient, ReturnsAssistantTextVerbatim) {
  const std::string canned = "Domain: Ports\nSchema:\nCREATE TABLE p(x);\nQuestion: q\nAnswer: SELECT 1;\n";
  StubLlmServer server([&](const nlohmann::json&, int) { return Reply{200, canned}; });
  CompletionParams params;
  params.max_tokens = 77;
  params.temperature = 0.5;
  params.seed = 9;
  EXPECT_EQ(complete(fast_endpoint(server), "the prompt", params), canned);
  auto requests = server.requests();
  ASSERT_EQ(requests.size(), 1u);
  const auto& body = requests[0];
  EXPECT_EQ(body["model"], "stub-model");
  EXPECT_EQ(body["messages"][0]["role"], "user");
  EXPECT_EQ(body["messages"][0]["content"], "the prompt");
  EXPECT_EQ(body["max_tokens"], 77);
  EXPECT_EQ(body["temperature"], 0.5);
  EXPECT_EQ(body["seed"], 9);
  EXPECT_EQ(body["_authorization"], "Bearer test-key");
}

TEST(LlmClient, UnauthorizedIsAuthErrorWithoutRetry) {
  StubLlmServer server([](const nlohmann::json&, int) { return Reply{401, "{\"error\":\"bad key\"}"}; });
  EXPECT_EQ(code_of([&] { complete(fast_endpoint(server), "p", {}); }), ErrorCode::AuthError);
  EXPECT_EQ(server.request_count(), 1);
}

TEST(LlmClient, RetriesTransientFailures) {
  StubLlmServer server([](const nlohmann::json&, int index) {
    return index < 2 ? Reply{503, "busy"} : Reply{200, "SELECT 1;"};
  });
  EXPECT_EQ(complete(fast_endpoint(server), "p", {}), "SELECT 1;");
  EXPECT_EQ(server.request_count(), 3);
}

TEST(LlmClient, ExhaustedRetries) {
  StubLlmServer limited([](const nlohmann::json&, int) { return Reply{429, "slow down"}; });
  EXPECT_EQ(code_of([&] { complete(fast_endpoint(limited), "p", {}); }), ErrorCode::RateLimited);
  EXPECT_EQ(limited.request_count(), 3);

  StubLlmServer broken([](const nlohmann::json&, int) { return Reply{500, "boom"}; });
  EXPECT_EQ(code_of([&] { complete(fast_endpoint(broken), "p", {}); }), ErrorCode::NetworkError);
  EXPECT_EQ(broken.request_count(), 3);

  StubLlmServer not_found([](const nlohmann::json&, int) { return Reply{404, "nope"}; });
  EXPECT_EQ(code_of([&] { complete(fast_endpoint(not_found), "p", {}); }), ErrorCode::NetworkError);
  EXPECT_EQ(not_found.request_count(), 1);
}

TEST(LlmClient, UnreachableEndpoint) {
  Endpoint e;
  e.url = "http://127.0.0.1:1";
  e.timeout = 1s;
  e.retry.initial_delay = 1ms;
  EXPECT_EQ(code_of([&] { complete(e, "p", {}); }), ErrorCode::NetworkError);
}

TEST(LlmClient, CredentialFromEnvironment) {
  ::setenv(std::string(kApiKeyVariable).c_str(), "from-env", 1);
  Endpoint e = endpoint_from_environment("http://example.invalid", "m");
  EXPECT_EQ(e.api_key, "from-env");
  EXPECT_EQ(e.model, "m");
  ::unsetenv(std::string(kApiKeyVariable).c_str());
}

}  // namespace
}  // namespace senseforge
