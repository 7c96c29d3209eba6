// Copyright 2026 The senseforge Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <stop_token>
#include <string>
#include <vector>

namespace senseforge {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitInterrupted = 130;

/// Runs one subcommand. `args` excludes the program name. Exit codes: 0 ok,
/// 1 domain error, 2 usage or configuration error, 130 interrupted (partial
/// output written next to --out with an ".incomplete" suffix).
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
             std::stop_token stop = {});

}  // namespace senseforge
