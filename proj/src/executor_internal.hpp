// Copyright 2026 The senseforge Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <sqlite3.h>

#include <chrono>
#include <string_view>

#include "senseforge/executor.hpp"

namespace senseforge::detail {

/// execute() against an already open connection (used for scratch
/// in-memory databases).
ExecutionResult execute_on(sqlite3* db, std::string_view sql, std::chrono::milliseconds timeout);

}  // namespace senseforge::detail
