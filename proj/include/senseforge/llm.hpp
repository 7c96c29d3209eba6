// Copyright 2026 The senseforge Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <stop_token>
#include <string>
#include <string_view>

namespace senseforge {

inline constexpr std::string_view kApiKeyVariable = "SENSE_FORGE_API_KEY";
inline constexpr std::string_view kDefaultCompletionPath = "/v1/chat/completions";

struct RetryPolicy {
  int max_attempts = 3;
  std::chrono::milliseconds initial_delay{500};
  double backoff = 2.0;
};

/// A chat-completion service. `url` is scheme://host[:port][/path]; without
/// a path, /v1/chat/completions is used.
struct Endpoint {
  std::string url;
  std::string api_key;
  std::string model = "gpt-4";
  std::chrono::milliseconds timeout{120000};
  RetryPolicy retry;
};

/// Endpoint for `url` with the key taken from SENSE_FORGE_API_KEY (empty if
/// unset).
Endpoint endpoint_from_environment(std::string url, std::string model);

struct CompletionParams {
  int max_tokens = 1024;
  double temperature = 1.0;
  std::optional<std::uint64_t> seed;
};

/// Sends one user message and returns choices[0].message.content.
/// 401/403 throw AuthError at once. 429, 5xx and transport failures are
/// retried with exponential backoff; when attempts run out, 429 gives
/// RateLimited and the others NetworkError. A stop request during backoff
/// ends the loop with NetworkError.
std::string complete(const Endpoint& endpoint, std::string_view prompt,
                     const CompletionParams& params, std::stop_token stop = {});

}  // namespace senseforge
