// Copyright 2026 The senseforge Authors
// SPDX-License-Identifier: Apache-2.0
#include "senseforge/parallel.hpp"

namespace senseforge {

unsigned default_concurrency() noexcept {
  return std::max(1u, std::thread::hardware_concurrency());
}

}  // namespace senseforge
