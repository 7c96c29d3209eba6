// Copyright 2026 The senseforge Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <sqlite3.h>

#include <filesystem>
#include <memory>
#include <string>
#include <string_view>

#include "senseforge/error.hpp"

namespace senseforge::detail {

struct ConnectionCloser {
  void operator()(sqlite3* db) const noexcept { sqlite3_close_v2(db); }
};
struct StatementFinalizer {
  void operator()(sqlite3_stmt* stmt) const noexcept { sqlite3_finalize(stmt); }
};

using Connection = std::unique_ptr<sqlite3, ConnectionCloser>;
using Statement = std::unique_ptr<sqlite3_stmt, StatementFinalizer>;

enum class OpenMode { ReadOnly, ReadWrite, Create };

/// Opens a database file. Throws FileNotFound when the path does not exist
/// (never creates one unless mode is Create) and NotADatabase when the file
/// header is not SQLite's.
Connection open_database(const std::filesystem::path& path, OpenMode mode);

Connection open_memory_database();

/// Executes one or more statements, throwing `code` with SQLite's message.
void exec(sqlite3* db, std::string_view sql, ErrorCode code = ErrorCode::IoError);

Statement prepare(sqlite3* db, std::string_view sql, ErrorCode code = ErrorCode::IoError);

/// Double-quoted SQL identifier with embedded quotes doubled.
std::string quote_identifier(std::string_view name);

std::string column_text(sqlite3_stmt* stmt, int col);

/// Text rendering of a result cell: NULL as "None", integers in decimal,
/// reals in shortest round-trip form (always with a '.', 'e', "inf" or
/// "nan" so they stay distinguishable from integers), text verbatim and
/// blobs as X'..' hex literals.
std::string render_cell(sqlite3_stmt* stmt, int col);

std::string format_real(double value);

}  // namespace senseforge::detail
