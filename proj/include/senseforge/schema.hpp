// Copyright 2026 The senseforge Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace senseforge {

/// Column type after SQLite's affinity rules are applied to the declared
/// type name ("varchar(20)" is Text, "number" is Numeric, and so on).
enum class ColumnType { Text, Integer, Real, Blob, Numeric };

std::string_view to_string(ColumnType type) noexcept;
ColumnType affinity_of(std::string_view declared_type);

struct Column {
  std::string name;
  ColumnType type = ColumnType::Text;

  friend bool operator==(const Column&, const Column&) = default;
};

struct ForeignKey {
  std::string column;
  std::string ref_table;
  std::string ref_column;

  friend bool operator==(const ForeignKey&, const ForeignKey&) = default;
};

struct Table {
  std::string name;
  std::vector<Column> columns;
  std::vector<std::string> primary_key;
  std::vector<ForeignKey> foreign_keys;

  const Column* find_column(std::string_view column) const;
  bool is_primary_key(std::string_view column) const;
  const ForeignKey* foreign_key_for(std::string_view column) const;

  friend bool operator==(const Table&, const Table&) = default;
};

struct Schema {
  std::string db_id;
  std::vector<Table> tables;

  const Table* find_table(std::string_view table) const;

  /// Throws InvalidArgument if names collide (case-insensitively), a
  /// primary-key column is undeclared, or a foreign key dangles.
  void validate() const;

  friend bool operator==(const Schema&, const Schema&) = default;
};

struct RowSample {
  std::string table_name;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// `<db_root>/<db_id>/<db_id>.sqlite`
std::filesystem::path database_path(const std::filesystem::path& db_root, std::string_view db_id);

/// One Table per user table in catalog order. Foreign keys that point at a
/// missing table or column are dropped with a warning so that the returned
/// Schema always validates.
Schema introspect_schema(const std::filesystem::path& db_file);

/// Runs `ddl` in a scratch in-memory database and introspects the result.
Schema schema_from_ddl(std::string_view ddl, std::string db_id);

RowSample sample_rows(const std::filesystem::path& db_file, std::string_view table, std::size_t k);

/// Jaccard similarity of the lowercased name bags {table} ∪ {table.column}.
double schema_similarity(const Schema& a, const Schema& b);

inline constexpr double kDefaultMergeThreshold = 0.75;

/// Single-linkage grouping of schemas whose similarity chains reach
/// `threshold`. Each group lists db_ids sorted ascending, so the first entry
/// is the representative; groups are sorted by representative.
std::vector<std::vector<std::string>> merge_similar_databases(const std::vector<Schema>& schemas,
                                                              double threshold);

std::string to_lower(std::string_view text);
bool iequals(std::string_view a, std::string_view b) noexcept;

}  // namespace senseforge
