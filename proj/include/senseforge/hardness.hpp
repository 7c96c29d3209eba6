// Copyright 2026 The senseforge Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string_view>

#include "senseforge/sql.hpp"

namespace senseforge {

enum class Hardness { Easy, Medium, Hard, ExtraHard };

std::string_view to_string(Hardness level) noexcept;

/// Component counts of the outermost query (first core of a compound plus
/// the statement-level ORDER BY / LIMIT):
///   comp1  = [WHERE] + [GROUP BY] + [ORDER BY] + [LIMIT] + #JOIN + #OR + #LIKE
///   comp2  = #set operators + #nested SELECTs in conditions, FROM and WITH
///   others = [#agg > 1] + [#select columns > 1] + [#WHERE conditions > 1]
///            + [#GROUP BY columns > 1]
/// OR/LIKE are counted in ON, WHERE and HAVING; aggregates in the select
/// list, WHERE, GROUP BY, ORDER BY and HAVING. Nothing inside a nested
/// SELECT is counted toward the outer query.
struct HardnessComponents {
  int comp1 = 0;
  int comp2 = 0;
  int others = 0;

  friend bool operator==(const HardnessComponents&, const HardnessComponents&) = default;
};

HardnessComponents hardness_components(const sql::Select& select);
HardnessComponents hardness_components(std::string_view sql);

/// First matching rule wins: Easy, Medium, Hard, else ExtraHard.
Hardness classify_components(const HardnessComponents& c) noexcept;

/// Throws UnparsableSql when `sql` is not a single SELECT statement.
Hardness classify_hardness(std::string_view sql);

/// Number of join operators anywhere in the statement, comma joins included.
int count_joins(const sql::Select& select);
int count_joins(std::string_view sql);

}  // namespace senseforge
