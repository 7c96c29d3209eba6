// Copyright 2026 The senseforge Authors
// SPDX-License-Identifier: Apache-2.0
#include "senseforge/executor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "executor_internal.hpp"
#include "senseforge/sql.hpp"
#include "sqlite_util.hpp"

namespace senseforge {

std::string_view to_string(ExecErrorKind kind) noexcept {
  switch (kind) {
    case ExecErrorKind::Syntax: return "Syntax";
    case ExecErrorKind::MissingEntity: return "MissingEntity";
    case ExecErrorKind::Runtime: return "Runtime";
  }
  return "Runtime";
}

std::string_view to_string(VerdictKind kind) noexcept {
  switch (kind) {
    case VerdictKind::Match: return "Match";
    case VerdictKind::Mismatch: return "Mismatch";
    case VerdictKind::PredError: return "PredError";
    case VerdictKind::GoldError: return "GoldError";
  }
  return "Mismatch";
}

std::string_view to_string(FailureKind kind) noexcept {
  switch (kind) {
    case FailureKind::Syntax: return "Syntax";
    case FailureKind::MissingEntity: return "MissingEntity";
    case FailureKind::Runtime: return "Runtime";
    case FailureKind::Timeout: return "Timeout";
  }
  return "Runtime";
}

namespace detail {
namespace {

using Clock = std::chrono::steady_clock;

struct Deadline {
  Clock::time_point at;
  bool fired = false;
};

int on_progress(void* arg) {
  auto* deadline = static_cast<Deadline*>(arg);
  if (Clock::now() >= deadline->at) {
    deadline->fired = true;
    return 1;
  }
  return 0;
}

int deny_attach(void*, int action, const char*, const char*, const char*, const char*) {
  return action == SQLITE_ATTACH || action == SQLITE_DETACH ? SQLITE_DENY : SQLITE_OK;
}

ExecErrorKind classify(std::string_view message) {
  auto has = [&](std::string_view needle) { return message.find(needle) != std::string_view::npos; };
  if (has("syntax error") || has("incomplete input") || has("unrecognized token")) {
    return ExecErrorKind::Syntax;
  }
  if (has("no such ")) return ExecErrorKind::MissingEntity;
  return ExecErrorKind::Runtime;
}

ExecError error_from(sqlite3* db) {
  std::string message = sqlite3_errmsg(db);
  return ExecError{classify(message), std::move(message)};
}

Value read_value(sqlite3_stmt* stmt, int col) {
  switch (sqlite3_column_type(stmt, col)) {
    case SQLITE_NULL: return Null{};
    case SQLITE_INTEGER: return static_cast<std::int64_t>(sqlite3_column_int64(stmt, col));
    case SQLITE_FLOAT: return sqlite3_column_double(stmt, col);
    case SQLITE_BLOB: {
      const auto* data = static_cast<const std::uint8_t*>(sqlite3_column_blob(stmt, col));
      return Blob(data, data + sqlite3_column_bytes(stmt, col));
    }
    default: return column_text(stmt, col);
  }
}

// Installs the watchdog and authorizer for the lifetime of one execution.
class ExecutionGuard {
 public:
  ExecutionGuard(sqlite3* db, std::chrono::milliseconds timeout) : db_(db) {
    deadline_.at = Clock::now() + timeout;
    sqlite3_progress_handler(db_, 1000, on_progress, &deadline_);
    sqlite3_set_authorizer(db_, deny_attach, nullptr);
  }
  ~ExecutionGuard() {
    sqlite3_progress_handler(db_, 0, nullptr, nullptr);
    sqlite3_set_authorizer(db_, nullptr, nullptr);
  }
  ExecutionGuard(const ExecutionGuard&) = delete;
  ExecutionGuard& operator=(const ExecutionGuard&) = delete;

  bool fired() const { return deadline_.fired; }

 private:
  sqlite3* db_;
  Deadline deadline_;
};

}  // namespace

ExecutionResult execute_on(sqlite3* db, std::string_view sql, std::chrono::milliseconds timeout) {
  ExecutionGuard guard(db, timeout);

  const char* tail = nullptr;
  sqlite3_stmt* raw = nullptr;
  int rc = sqlite3_prepare_v2(db, sql.data(), static_cast<int>(sql.size()), &raw, &tail);
  Statement stmt(raw);
  if (rc != SQLITE_OK) {
    if (guard.fired()) return Timeout{};
    return error_from(db);
  }
  if (!stmt) return ExecError{ExecErrorKind::Syntax, "empty statement"};

  // Only whitespace, comments or semicolons may follow the statement.
  const char* end = sql.data() + sql.size();
  while (tail != nullptr && tail < end) {
    sqlite3_stmt* next_raw = nullptr;
    const char* next_tail = nullptr;
    rc = sqlite3_prepare_v2(db, tail, static_cast<int>(end - tail), &next_raw, &next_tail);
    Statement next(next_raw);
    if (rc != SQLITE_OK) return error_from(db);
    if (next) return ExecError{ExecErrorKind::Syntax, "only one statement may be executed"};
    if (next_tail == tail) break;
    tail = next_tail;
  }

  if (!sqlite3_stmt_readonly(stmt.get())) {
    return ExecError{ExecErrorKind::Runtime, "attempt to write a readonly database"};
  }

  Rows rows;
  const int ncol = sqlite3_column_count(stmt.get());
  rows.columns.reserve(static_cast<std::size_t>(ncol));
  for (int c = 0; c < ncol; ++c) {
    const char* name = sqlite3_column_name(stmt.get(), c);
    rows.columns.emplace_back(name ? name : "");
  }
  while ((rc = sqlite3_step(stmt.get())) == SQLITE_ROW) {
    Row row;
    row.reserve(static_cast<std::size_t>(ncol));
    for (int c = 0; c < ncol; ++c) row.push_back(read_value(stmt.get(), c));
    rows.rows.push_back(std::move(row));
  }
  if (rc != SQLITE_DONE) {
    if (rc == SQLITE_INTERRUPT && guard.fired()) return Timeout{};
    return error_from(db);
  }
  return rows;
}

}  // namespace detail

ExecutionResult execute(const std::filesystem::path& db_file, std::string_view sql,
                        std::chrono::milliseconds timeout) {
  detail::Connection db;
  try {
    db = detail::open_database(db_file, detail::OpenMode::ReadOnly);
  } catch (const Error& e) {
    return ExecError{ExecErrorKind::Runtime, e.what()};
  }
  return detail::execute_on(db.get(), sql, timeout);
}

namespace {

bool is_numeric(const Value& v) {
  return std::holds_alternative<std::int64_t>(v) || std::holds_alternative<double>(v);
}

long double as_long_double(const Value& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return static_cast<long double>(*i);
  return static_cast<long double>(std::get<double>(v));
}

int rank(const Value& v) {
  switch (v.index()) {
    case 0: return 0;
    case 1:
    case 2: return 1;
    case 3: return 2;
    default: return 3;
  }
}

Value normalize(const Value& v) {
  if (const auto* d = std::get_if<double>(&v)) {
    // 2^63 is exactly representable; anything strictly inside fits int64.
    if (std::isfinite(*d) && std::trunc(*d) == *d && std::fabs(*d) < 9.2233720368547758e18) {
      return static_cast<std::int64_t>(*d);
    }
  }
  return v;
}

bool cells_equivalent(const Value& a, const Value& b, double tol) {
  if (is_numeric(a) && is_numeric(b)) {
    if (std::holds_alternative<std::int64_t>(a) && std::holds_alternative<std::int64_t>(b)) {
      return std::get<std::int64_t>(a) == std::get<std::int64_t>(b);
    }
    const long double x = as_long_double(a);
    const long double y = as_long_double(b);
    if (x == y) return true;
    return std::fabs(x - y) <= static_cast<long double>(tol) * std::max(std::fabs(x), std::fabs(y));
  }
  return compare_values(a, b) == std::strong_ordering::equal;
}

bool rows_equivalent(const Row& a, const Row& b, double tol) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!cells_equivalent(a[i], b[i], tol)) return false;
  }
  return true;
}

bool has_reals(const std::vector<Row>& rows) {
  return std::any_of(rows.begin(), rows.end(), [](const Row& row) {
    return std::any_of(row.begin(), row.end(),
                       [](const Value& v) { return std::holds_alternative<double>(v); });
  });
}

}  // namespace

std::strong_ordering compare_values(const Value& a, const Value& b) {
  const int ra = rank(a);
  const int rb = rank(b);
  if (ra != rb) return ra <=> rb;
  switch (ra) {
    case 0: return std::strong_ordering::equal;
    case 1: {
      if (std::holds_alternative<std::int64_t>(a) && std::holds_alternative<std::int64_t>(b)) {
        return std::get<std::int64_t>(a) <=> std::get<std::int64_t>(b);
      }
      const long double x = as_long_double(a);
      const long double y = as_long_double(b);
      // NaN sorts last among numbers.
      if (std::isnan(x) || std::isnan(y)) return std::isnan(x) <=> std::isnan(y);
      if (x < y) return std::strong_ordering::less;
      if (x > y) return std::strong_ordering::greater;
      return std::strong_ordering::equal;
    }
    case 2: return std::get<std::string>(a).compare(std::get<std::string>(b)) <=> 0;
    default: {
      const auto& x = std::get<Blob>(a);
      const auto& y = std::get<Blob>(b);
      return std::lexicographical_compare_three_way(x.begin(), x.end(), y.begin(), y.end());
    }
  }
}

CanonicalResult canonicalize(const Rows& result, bool order_sensitive) {
  CanonicalResult canonical;
  canonical.ordered = order_sensitive;
  canonical.rows.reserve(result.rows.size());
  for (const auto& row : result.rows) {
    Row normalized;
    normalized.reserve(row.size());
    for (const auto& cell : row) normalized.push_back(normalize(cell));
    canonical.rows.push_back(std::move(normalized));
  }
  if (!order_sensitive) {
    std::stable_sort(canonical.rows.begin(), canonical.rows.end(), [](const Row& x, const Row& y) {
      return std::lexicographical_compare_three_way(x.begin(), x.end(), y.begin(), y.end(),
                                                    compare_values) < 0;
    });
  }
  return canonical;
}

bool equivalent(const CanonicalResult& a, const CanonicalResult& b, double relative_tolerance) {
  if (a.ordered != b.ordered || a.rows.size() != b.rows.size()) return false;
  bool pairwise = true;
  for (std::size_t i = 0; i < a.rows.size() && pairwise; ++i) {
    pairwise = rows_equivalent(a.rows[i], b.rows[i], relative_tolerance);
  }
  if (pairwise || a.ordered) return pairwise;
  // Values within tolerance can sort on either side of a neighbour, so an
  // unordered comparison involving reals falls back to greedy matching.
  if (!has_reals(a.rows) && !has_reals(b.rows)) return false;
  std::vector<bool> used(b.rows.size(), false);
  for (const auto& row : a.rows) {
    bool found = false;
    for (std::size_t j = 0; j < b.rows.size() && !found; ++j) {
      if (!used[j] && rows_equivalent(row, b.rows[j], relative_tolerance)) {
        used[j] = true;
        found = true;
      }
    }
    if (!found) return false;
  }
  return true;
}

namespace {

std::optional<FailureKind> failure_of(const ExecutionResult& result, std::string& message) {
  if (std::holds_alternative<Timeout>(result)) {
    message = "execution timed out";
    return FailureKind::Timeout;
  }
  if (const auto* err = std::get_if<ExecError>(&result)) {
    message = err->message;
    switch (err->kind) {
      case ExecErrorKind::Syntax: return FailureKind::Syntax;
      case ExecErrorKind::MissingEntity: return FailureKind::MissingEntity;
      case ExecErrorKind::Runtime: return FailureKind::Runtime;
    }
  }
  return std::nullopt;
}

bool permuted_match(const Rows& pred, const CanonicalResult& gold, double tol) {
  const std::size_t arity = pred.columns.size();
  if (arity < 2 || arity > 6 || gold.rows.empty() || gold.rows.front().size() != arity) {
    return false;
  }
  std::vector<std::size_t> perm(arity);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  while (std::next_permutation(perm.begin(), perm.end())) {
    Rows permuted;
    permuted.columns.resize(arity);
    for (const auto& row : pred.rows) {
      Row r(arity);
      for (std::size_t c = 0; c < arity; ++c) r[c] = row[perm[c]];
      permuted.rows.push_back(std::move(r));
    }
    if (equivalent(canonicalize(permuted, gold.ordered), gold, tol)) return true;
  }
  return false;
}

}  // namespace

MatchVerdict results_match(const std::filesystem::path& db_file, std::string_view predicted_sql,
                           std::string_view gold_sql, const MatchOptions& options) {
  MatchVerdict verdict;
  const ExecutionResult gold = execute(db_file, gold_sql, options.timeout);
  if (auto failure = failure_of(gold, verdict.message)) {
    verdict.kind = VerdictKind::GoldError;
    verdict.failure = failure;
    return verdict;
  }
  const ExecutionResult pred = execute(db_file, predicted_sql, options.timeout);
  if (auto failure = failure_of(pred, verdict.message)) {
    verdict.kind = VerdictKind::PredError;
    verdict.failure = failure;
    return verdict;
  }
  const bool ordered = sql::has_top_level_order_by(gold_sql);
  const CanonicalResult gold_canonical = canonicalize(std::get<Rows>(gold), ordered);
  const Rows& pred_rows = std::get<Rows>(pred);
  bool match = equivalent(canonicalize(pred_rows, ordered), gold_canonical,
                          options.relative_tolerance);
  if (!match && options.allow_column_permutation) {
    match = permuted_match(pred_rows, gold_canonical, options.relative_tolerance);
  }
  verdict.kind = match ? VerdictKind::Match : VerdictKind::Mismatch;
  return verdict;
}

}  // namespace senseforge
