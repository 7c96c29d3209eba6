// Copyright 2026 The senseforge Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "senseforge/dataset.hpp"

namespace senseforge::testing {

std::filesystem::path source_dir();
std::filesystem::path data_path(std::string_view name);
std::filesystem::path golden_path(std::string_view name);

/// A fresh directory removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(std::string_view name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

/// Creates (or replaces) `db_file` by running the SQL script.
void build_database(const std::filesystem::path& script, const std::filesystem::path& db_file);
void build_database_from_text(std::string_view sql, const std::filesystem::path& db_file);

/// Builds school and campus under root/<db_id>/<db_id>.sqlite.
void build_fixture_root(const std::filesystem::path& root);

std::string read_file(const std::filesystem::path& path);
/// FNV-1a 64 of the file bytes, as 16 hex digits.
std::string file_digest(const std::filesystem::path& path);

std::vector<nlohmann::json> read_json_lines(const std::filesystem::path& path);

/// The execution-pair fixture as examples and predictions (ids as in the
/// file).
struct ExecPair {
  std::int64_t id;
  std::string db_id, question, gold, pred;
};
std::vector<ExecPair> exec_pairs();

/// Fifty examples cycling through the executable golds of the pair fixture,
/// each with 0 to 4 seeded candidates: rewritten golds (same result) and
/// corrupted ones (wrong result, broken syntax, missing tables, DML).
struct PreferenceFixture {
  std::vector<Example> examples;
  std::vector<Candidate> candidates;
};
PreferenceFixture preference_fixture(std::uint64_t seed);

}  // namespace senseforge::testing
