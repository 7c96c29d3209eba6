// Copyright 2026 The senseforge Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <spdlog/logger.h>

#include <memory>

namespace senseforge {

/// Library-wide logger writing to stderr. Data never goes through it.
std::shared_ptr<spdlog::logger> logger();

/// Switches the logger between the plain text format and one JSON object
/// per line ({"time","level","msg"}).
void configure_logging(bool json, spdlog::level::level_enum level);

}  // namespace senseforge
