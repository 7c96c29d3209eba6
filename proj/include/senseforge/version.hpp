// Copyright 2026 The senseforge Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <string_view>

#include "json.hpp"

namespace senseforge {

inline constexpr std::string_view kVersion = "0.1.0";
// Bump these whenever the hardness rules or the prompt templates change;
// tests/golden/MANIFEST.json ties each identifier to its golden files.
inline constexpr std::string_view kHardnessRulesId = "hardness-rules-v1";
inline constexpr std::string_view kPromptTemplateId = "prompt-template-v1";

/// "senseforge 0.1.0 hardness-rules-v1 prompt-template-v1"
std::string version_info();

/// {"version", "hardness_rules", "prompt_template"}
nlohmann::json version_json();

}  // namespace senseforge
