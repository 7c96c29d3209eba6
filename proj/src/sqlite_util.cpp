// Copyright 2026 The senseforge Authors
// SPDX-License-Identifier: Apache-2.0
#include "sqlite_util.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace senseforge::detail {

Connection open_database(const std::filesystem::path& path, OpenMode mode) {
  std::error_code ec;
  if (mode != OpenMode::Create && !std::filesystem::is_regular_file(path, ec)) {
    throw Error(ErrorCode::FileNotFound, "database file not found: " + path.string());
  }
  int flags = SQLITE_OPEN_NOMUTEX;
  switch (mode) {
    case OpenMode::ReadOnly: flags |= SQLITE_OPEN_READONLY; break;
    case OpenMode::ReadWrite: flags |= SQLITE_OPEN_READWRITE; break;
    case OpenMode::Create: flags |= SQLITE_OPEN_READWRITE | SQLITE_OPEN_CREATE; break;
  }
  sqlite3* raw = nullptr;
  int rc = sqlite3_open_v2(path.c_str(), &raw, flags, nullptr);
  Connection db(raw);
  if (rc != SQLITE_OK) {
    std::string msg = raw ? sqlite3_errmsg(raw) : "out of memory";
    throw Error(ErrorCode::IoError, "cannot open " + path.string() + ": " + msg);
  }
  // sqlite3_open_v2 is lazy; touching the catalog forces the header check.
  char* err = nullptr;
  rc = sqlite3_exec(db.get(), "SELECT count(*) FROM sqlite_master", nullptr, nullptr, &err);
  if (rc != SQLITE_OK) {
    std::string msg = err ? err : sqlite3_errstr(rc);
    sqlite3_free(err);
    if (rc == SQLITE_NOTADB || rc == SQLITE_CORRUPT) {
      throw Error(ErrorCode::NotADatabase, path.string() + ": " + msg);
    }
    throw Error(ErrorCode::IoError, path.string() + ": " + msg);
  }
  return db;
}

Connection open_memory_database() {
  sqlite3* raw = nullptr;
  int rc = sqlite3_open_v2(":memory:", &raw,
                           SQLITE_OPEN_READWRITE | SQLITE_OPEN_CREATE | SQLITE_OPEN_NOMUTEX,
                           nullptr);
  Connection db(raw);
  if (rc != SQLITE_OK) throw Error(ErrorCode::IoError, "cannot open in-memory database");
  return db;
}

void exec(sqlite3* db, std::string_view sql, ErrorCode code) {
  char* err = nullptr;
  std::string owned(sql);
  int rc = sqlite3_exec(db, owned.c_str(), nullptr, nullptr, &err);
  if (rc != SQLITE_OK) {
    std::string msg = err ? err : sqlite3_errstr(rc);
    sqlite3_free(err);
    throw Error(code, msg);
  }
}

Statement prepare(sqlite3* db, std::string_view sql, ErrorCode code) {
  sqlite3_stmt* raw = nullptr;
  int rc = sqlite3_prepare_v2(db, sql.data(), static_cast<int>(sql.size()), &raw, nullptr);
  Statement stmt(raw);
  if (rc != SQLITE_OK) throw Error(code, sqlite3_errmsg(db));
  return stmt;
}

std::string quote_identifier(std::string_view name) {
  std::string out;
  out.reserve(name.size() + 2);
  out.push_back('"');
  for (char c : name) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string column_text(sqlite3_stmt* stmt, int col) {
  const auto* text = sqlite3_column_text(stmt, col);
  if (text == nullptr) return {};
  return std::string(reinterpret_cast<const char*>(text),
                     static_cast<std::size_t>(sqlite3_column_bytes(stmt, col)));
}

std::string format_real(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  std::string out(buf.data(), end);
  if (out.find_first_of(".e") == std::string::npos) out += ".0";
  return out;
}

std::string render_cell(sqlite3_stmt* stmt, int col) {
  switch (sqlite3_column_type(stmt, col)) {
    case SQLITE_NULL: return "None";
    case SQLITE_INTEGER: return std::to_string(sqlite3_column_int64(stmt, col));
    case SQLITE_FLOAT: return format_real(sqlite3_column_double(stmt, col));
    case SQLITE_BLOB: {
      static constexpr char kHex[] = "0123456789ABCDEF";
      const auto* data = static_cast<const unsigned char*>(sqlite3_column_blob(stmt, col));
      const int n = sqlite3_column_bytes(stmt, col);
      std::string out = "X'";
      for (int i = 0; i < n; ++i) {
        out.push_back(kHex[data[i] >> 4]);
        out.push_back(kHex[data[i] & 0xF]);
      }
      out.push_back('\'');
      return out;
    }
    default: return column_text(stmt, col);
  }
}

}  // namespace senseforge::detail
