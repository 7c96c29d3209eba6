// Copyright 2026 The senseforge Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <stop_token>
#include <thread>
#include <vector>

namespace senseforge {

unsigned default_concurrency() noexcept;

/// Runs fn(i) for every i in [0, n) on at most `concurrency` threads, handing
/// out indices in ascending order. Once `stop` is requested no new index is
/// started. If any call throws, remaining work is abandoned and the exception
/// from the lowest failing index is rethrown after all workers join.
template <class Fn>
void parallel_for(std::size_t n, unsigned concurrency, Fn&& fn, std::stop_token stop = {}) {
  const std::size_t workers = std::min<std::size_t>(std::max(1u, concurrency), n);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex error_mutex;
  std::exception_ptr error;
  std::size_t error_index = n;

  auto work = [&] {
    for (;;) {
      if (failed.load() || stop.stop_requested()) return;
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (i < error_index) {
          error_index = i;
          error = std::current_exception();
        }
        failed.store(true);
      }
    }
  };

  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace senseforge
