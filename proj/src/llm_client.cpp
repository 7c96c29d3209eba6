// Copyright 2026 The senseforge Authors
// SPDX-License-Identifier: Apache-2.0
#include "senseforge/llm.hpp"

#include <cstdlib>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "senseforge/error.hpp"
#include "senseforge/logging.hpp"

namespace senseforge {
namespace {

struct Target {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

Target split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(ErrorCode::InvalidArgument, "endpoint URL needs a scheme: " + url);
  }
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, std::string(kDefaultCompletionPath)};
  Target t{url.substr(0, path_start), url.substr(path_start)};
  if (t.path == "/") t.path = kDefaultCompletionPath;
  return t;
}

std::string parse_content(const std::string& body) {
  const auto doc = nlohmann::json::parse(body, nullptr, false);
  if (doc.is_discarded()) throw Error(ErrorCode::NetworkError, "response is not JSON");
  try {
    return doc.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorCode::NetworkError, "response lacks choices[0].message.content");
  }
}

// Sleeps up to `delay`, waking early on a stop request.
bool wait(std::chrono::milliseconds delay, const std::stop_token& stop) {
  const auto until = std::chrono::steady_clock::now() + delay;
  while (std::chrono::steady_clock::now() < until) {
    if (stop.stop_requested()) return false;
    std::this_thread::sleep_for(std::min<std::chrono::milliseconds>(
        std::chrono::milliseconds(20),
        std::chrono::duration_cast<std::chrono::milliseconds>(until -
                                                              std::chrono::steady_clock::now())));
  }
  return !stop.stop_requested();
}

}  // namespace

Endpoint endpoint_from_environment(std::string url, std::string model) {
  Endpoint endpoint;
  endpoint.url = std::move(url);
  endpoint.model = std::move(model);
  if (const char* key = std::getenv(std::string(kApiKeyVariable).c_str())) endpoint.api_key = key;
  return endpoint;
}

std::string complete(const Endpoint& endpoint, std::string_view prompt,
                     const CompletionParams& params, std::stop_token stop) {
  const Target target = split_url(endpoint.url);
  nlohmann::json request = {
      {"model", endpoint.model},
      {"messages", nlohmann::json::array({{{"role", "user"}, {"content", prompt}}})},
      {"max_tokens", params.max_tokens},
      {"temperature", params.temperature}};
  if (params.seed) request["seed"] = *params.seed;
  const std::string body = request.dump();

  httplib::Client client(target.origin);
  const auto seconds = std::chrono::duration_cast<std::chrono::seconds>(endpoint.timeout);
  const auto micros = std::chrono::duration_cast<std::chrono::microseconds>(endpoint.timeout - seconds);
  client.set_connection_timeout(seconds.count(), micros.count());
  client.set_read_timeout(seconds.count(), micros.count());
  client.set_write_timeout(seconds.count(), micros.count());
  httplib::Headers headers;
  if (!endpoint.api_key.empty()) {
    headers.emplace("Authorization", "Bearer " + endpoint.api_key);
  }

  const int attempts = std::max(1, endpoint.retry.max_attempts);
  auto delay = endpoint.retry.initial_delay;
  std::string last_error;
  bool rate_limited = false;
  for (int attempt = 1; attempt <= attempts; ++attempt) {
    auto result = client.Post(target.path, headers, body, "application/json");
    if (!result) {
      last_error = "request failed: " + httplib::to_string(result.error());
      rate_limited = false;
    } else if (result->status == 200) {
      return parse_content(result->body);
    } else if (result->status == 401 || result->status == 403) {
      throw Error(ErrorCode::AuthError,
                  "endpoint rejected credentials (HTTP " + std::to_string(result->status) + ")");
    } else if (result->status == 429 || result->status >= 500) {
      last_error = "HTTP " + std::to_string(result->status);
      rate_limited = result->status == 429;
    } else {
      throw Error(ErrorCode::NetworkError, "HTTP " + std::to_string(result->status) + ": " +
                                               result->body.substr(0, 200));
    }
    if (attempt < attempts) {
      logger()->info("attempt {} of {} failed ({}); retrying in {} ms", attempt, attempts,
                     last_error, delay.count());
      if (!wait(delay, stop)) throw Error(ErrorCode::NetworkError, "cancelled during retry");
      delay = std::chrono::milliseconds(
          static_cast<std::int64_t>(static_cast<double>(delay.count()) * endpoint.retry.backoff));
    }
  }
  throw Error(rate_limited ? ErrorCode::RateLimited : ErrorCode::NetworkError,
              "giving up after " + std::to_string(attempts) + " attempts: " + last_error);
}

}  // namespace senseforge
