// Copyright 2026 The senseforge Authors
// SPDX-License-Identifier: Apache-2.0
#include "senseforge/version.hpp"

namespace senseforge {

std::string version_info() {
  return "senseforge " + std::string(kVersion) + " " + std::string(kHardnessRulesId) + " " +
         std::string(kPromptTemplateId);
}

nlohmann::json version_json() {
  return {{"version", kVersion},
          {"hardness_rules", kHardnessRulesId},
          {"prompt_template", kPromptTemplateId}};
}

}  // namespace senseforge
