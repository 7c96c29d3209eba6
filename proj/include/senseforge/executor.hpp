// Copyright 2026 The senseforge Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace senseforge {

struct Null {
  friend bool operator==(Null, Null) = default;
};

using Blob = std::vector<std::uint8_t>;

/// One result cell, by SQLite storage class.
using Value = std::variant<Null, std::int64_t, double, std::string, Blob>;
using Row = std::vector<Value>;

struct Rows {
  std::vector<std::string> columns;
  std::vector<Row> rows;
};

enum class ExecErrorKind { Syntax, MissingEntity, Runtime };

std::string_view to_string(ExecErrorKind kind) noexcept;

struct ExecError {
  ExecErrorKind kind = ExecErrorKind::Runtime;
  std::string message;
};

struct Timeout {};

using ExecutionResult = std::variant<Rows, ExecError, Timeout>;

inline constexpr std::chrono::milliseconds kDefaultTimeout{30000};

/// Runs one statement read-only against `db_file`. Failures (including a
/// missing file) come back as ExecError; exceeding `timeout` yields Timeout.
/// Statements that would write, and ATTACH/DETACH, are rejected.
ExecutionResult execute(const std::filesystem::path& db_file, std::string_view sql,
                        std::chrono::milliseconds timeout = kDefaultTimeout);

struct CanonicalResult {
  std::vector<Row> rows;
  bool ordered = false;
};

/// Normalizes cells (integral reals become integers) and, when not
/// order-sensitive, sorts rows by a total order on cells: NULL < numbers <
/// text < blob, numbers compared by value.
CanonicalResult canonicalize(const Rows& result, bool order_sensitive);

std::strong_ordering compare_values(const Value& a, const Value& b);

struct MatchOptions {
  std::chrono::milliseconds timeout = kDefaultTimeout;
  double relative_tolerance = 1e-6;
  /// Accept a prediction whose columns are a permutation of the gold's.
  /// Off by default: column order is part of the answer.
  bool allow_column_permutation = false;
};

/// Element-wise equality of canonical results; real cells compare with a
/// relative tolerance.
bool equivalent(const CanonicalResult& a, const CanonicalResult& b, double relative_tolerance);

enum class VerdictKind { Match, Mismatch, PredError, GoldError };

/// Why an execution failed: one of the ExecErrorKinds or a timeout.
enum class FailureKind { Syntax, MissingEntity, Runtime, Timeout };

std::string_view to_string(VerdictKind kind) noexcept;
std::string_view to_string(FailureKind kind) noexcept;

struct MatchVerdict {
  VerdictKind kind = VerdictKind::Mismatch;
  std::optional<FailureKind> failure;  // set for PredError / GoldError
  std::string message;

  bool is_match() const noexcept { return kind == VerdictKind::Match; }
};

/// Executes gold first, then the prediction. Order sensitivity follows the
/// gold query's top-level ORDER BY.
MatchVerdict results_match(const std::filesystem::path& db_file, std::string_view predicted_sql,
                           std::string_view gold_sql, const MatchOptions& options = {});

}  // namespace senseforge
