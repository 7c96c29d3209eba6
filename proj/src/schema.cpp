// Copyright 2026 The senseforge Authors
// SPDX-License-Identifier: Apache-2.0
#include "senseforge/schema.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <set>

#include "senseforge/error.hpp"
#include "senseforge/logging.hpp"
#include "sqlite_util.hpp"

namespace senseforge {

std::string_view to_string(ColumnType type) noexcept {
  switch (type) {
    case ColumnType::Text: return "TEXT";
    case ColumnType::Integer: return "INTEGER";
    case ColumnType::Real: return "REAL";
    case ColumnType::Blob: return "BLOB";
    case ColumnType::Numeric: return "NUMERIC";
  }
  return "TEXT";
}

std::string to_lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool iequals(std::string_view a, std::string_view b) noexcept {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](unsigned char x, unsigned char y) {
           return std::tolower(x) == std::tolower(y);
         });
}

// Rules from SQLite's "Determination Of Column Affinity", applied in order.
ColumnType affinity_of(std::string_view declared_type) {
  const std::string upper = [&] {
    std::string s(declared_type);
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return s;
  }();
  auto has = [&](std::string_view needle) { return upper.find(needle) != std::string::npos; };
  if (has("INT")) return ColumnType::Integer;
  if (has("CHAR") || has("CLOB") || has("TEXT")) return ColumnType::Text;
  if (upper.empty() || has("BLOB")) return ColumnType::Blob;
  if (has("REAL") || has("FLOA") || has("DOUB")) return ColumnType::Real;
  return ColumnType::Numeric;
}

const Column* Table::find_column(std::string_view column) const {
  auto it = std::find_if(columns.begin(), columns.end(),
                         [&](const Column& c) { return iequals(c.name, column); });
  return it == columns.end() ? nullptr : &*it;
}

bool Table::is_primary_key(std::string_view column) const {
  return std::any_of(primary_key.begin(), primary_key.end(),
                     [&](const std::string& c) { return iequals(c, column); });
}

const ForeignKey* Table::foreign_key_for(std::string_view column) const {
  auto it = std::find_if(foreign_keys.begin(), foreign_keys.end(),
                         [&](const ForeignKey& fk) { return iequals(fk.column, column); });
  return it == foreign_keys.end() ? nullptr : &*it;
}

const Table* Schema::find_table(std::string_view table) const {
  auto it = std::find_if(tables.begin(), tables.end(),
                         [&](const Table& t) { return iequals(t.name, table); });
  return it == tables.end() ? nullptr : &*it;
}

void Schema::validate() const {
  std::set<std::string> table_names;
  for (const auto& table : tables) {
    if (!table_names.insert(to_lower(table.name)).second) {
      throw Error(ErrorCode::InvalidArgument, "duplicate table name: " + table.name);
    }
    std::set<std::string> column_names;
    for (const auto& column : table.columns) {
      if (!column_names.insert(to_lower(column.name)).second) {
        throw Error(ErrorCode::InvalidArgument,
                    "duplicate column name: " + table.name + "." + column.name);
      }
    }
    for (const auto& pk : table.primary_key) {
      if (table.find_column(pk) == nullptr) {
        throw Error(ErrorCode::InvalidArgument,
                    "primary key column not declared: " + table.name + "." + pk);
      }
    }
  }
  for (const auto& table : tables) {
    for (const auto& fk : table.foreign_keys) {
      const Table* ref = find_table(fk.ref_table);
      if (table.find_column(fk.column) == nullptr || ref == nullptr ||
          ref->find_column(fk.ref_column) == nullptr) {
        throw Error(ErrorCode::InvalidArgument,
                    "dangling foreign key " + table.name + "." + fk.column + " -> " +
                        fk.ref_table + "." + fk.ref_column);
      }
    }
  }
}

std::filesystem::path database_path(const std::filesystem::path& db_root, std::string_view db_id) {
  std::string file(db_id);
  file += ".sqlite";
  return db_root / std::string(db_id) / file;
}

namespace {

std::vector<std::string> primary_key_of(sqlite3* db, const std::string& table) {
  std::vector<std::pair<int, std::string>> positions;
  auto info = detail::prepare(db, "PRAGMA table_info(" + detail::quote_identifier(table) + ")");
  while (sqlite3_step(info.get()) == SQLITE_ROW) {
    const int pos = sqlite3_column_int(info.get(), 5);
    if (pos > 0) positions.emplace_back(pos, detail::column_text(info.get(), 1));
  }
  std::sort(positions.begin(), positions.end());
  std::vector<std::string> pk;
  for (auto& [pos, name] : positions) pk.push_back(std::move(name));
  return pk;
}

Table read_table(sqlite3* db, const std::string& name) {
  Table table;
  table.name = name;
  const std::string quoted = detail::quote_identifier(name);

  std::vector<std::pair<int, std::string>> pk_positions;
  auto info = detail::prepare(db, "PRAGMA table_info(" + quoted + ")");
  while (sqlite3_step(info.get()) == SQLITE_ROW) {
    Column column;
    column.name = detail::column_text(info.get(), 1);
    column.type = affinity_of(detail::column_text(info.get(), 2));
    const int pk_pos = sqlite3_column_int(info.get(), 5);
    if (pk_pos > 0) pk_positions.emplace_back(pk_pos, column.name);
    table.columns.push_back(std::move(column));
  }
  std::sort(pk_positions.begin(), pk_positions.end());
  for (auto& [pos, column] : pk_positions) table.primary_key.push_back(std::move(column));

  // Rows come back ordered by (id, seq); `to` is NULL when the constraint
  // names only the parent table, meaning its primary key.
  struct RawFk {
    int id;
    int seq;
    std::string ref_table, from;
    std::optional<std::string> to;
  };
  std::vector<RawFk> raw;
  auto fks = detail::prepare(db, "PRAGMA foreign_key_list(" + quoted + ")");
  while (sqlite3_step(fks.get()) == SQLITE_ROW) {
    RawFk fk{sqlite3_column_int(fks.get(), 0), sqlite3_column_int(fks.get(), 1),
             detail::column_text(fks.get(), 2), detail::column_text(fks.get(), 3),
             std::nullopt};
    if (sqlite3_column_type(fks.get(), 4) != SQLITE_NULL) fk.to = detail::column_text(fks.get(), 4);
    raw.push_back(std::move(fk));
  }
  // PRAGMA foreign_key_list reports constraints in reverse declaration order.
  std::stable_sort(raw.begin(), raw.end(), [](const RawFk& a, const RawFk& b) {
    return a.id != b.id ? a.id > b.id : a.seq < b.seq;
  });
  for (auto& fk : raw) {
    std::string to = fk.to.value_or(std::string{});
    if (!fk.to) {
      const auto parent_pk = primary_key_of(db, fk.ref_table);
      if (static_cast<std::size_t>(fk.seq) < parent_pk.size()) to = parent_pk[fk.seq];
    }
    table.foreign_keys.push_back(ForeignKey{std::move(fk.from), std::move(fk.ref_table), std::move(to)});
  }
  return table;
}

Schema introspect_connection(sqlite3* db, std::string db_id) {
  Schema schema;
  schema.db_id = std::move(db_id);
  auto stmt = detail::prepare(
      db,
      "SELECT name FROM sqlite_master WHERE type = 'table' AND name NOT LIKE 'sqlite\\_%' "
      "ESCAPE '\\' ORDER BY rowid");
  while (sqlite3_step(stmt.get()) == SQLITE_ROW) {
    schema.tables.push_back(read_table(db, detail::column_text(stmt.get(), 0)));
  }

  // Canonicalize referenced names and drop dangling references.
  for (auto& table : schema.tables) {
    std::vector<ForeignKey> kept;
    for (auto& fk : table.foreign_keys) {
      const Table* ref = schema.find_table(fk.ref_table);
      if (ref == nullptr || fk.ref_column.empty() || ref->find_column(fk.ref_column) == nullptr ||
          table.find_column(fk.column) == nullptr) {
        logger()->warn("{}: dropping dangling foreign key {}.{} -> {}.{}", schema.db_id,
                       table.name, fk.column, fk.ref_table, fk.ref_column);
        continue;
      }
      fk.ref_table = ref->name;
      fk.ref_column = ref->find_column(fk.ref_column)->name;
      kept.push_back(std::move(fk));
    }
    table.foreign_keys = std::move(kept);
  }
  return schema;
}

}  // namespace

Schema introspect_schema(const std::filesystem::path& db_file) {
  auto db = detail::open_database(db_file, detail::OpenMode::ReadOnly);
  return introspect_connection(db.get(), db_file.stem().string());
}

Schema schema_from_ddl(std::string_view ddl, std::string db_id) {
  auto db = detail::open_memory_database();
  detail::exec(db.get(), ddl, ErrorCode::InvalidArgument);
  return introspect_connection(db.get(), std::move(db_id));
}

RowSample sample_rows(const std::filesystem::path& db_file, std::string_view table, std::size_t k) {
  if (k == 0) throw Error(ErrorCode::InvalidArgument, "sample size must be positive");
  auto db = detail::open_database(db_file, detail::OpenMode::ReadOnly);
  const Schema schema = introspect_connection(db.get(), db_file.stem().string());
  const Table* found = schema.find_table(table);
  if (found == nullptr) {
    throw Error(ErrorCode::NoSuchTable, "no such table: " + std::string(table));
  }

  RowSample sample;
  sample.table_name = found->name;
  auto stmt = detail::prepare(db.get(), "SELECT * FROM " + detail::quote_identifier(found->name) +
                                            " LIMIT " + std::to_string(k));
  const int ncol = sqlite3_column_count(stmt.get());
  for (int c = 0; c < ncol; ++c) sample.header.emplace_back(sqlite3_column_name(stmt.get(), c));
  int rc = SQLITE_ROW;
  while ((rc = sqlite3_step(stmt.get())) == SQLITE_ROW) {
    std::vector<std::string> row;
    row.reserve(static_cast<std::size_t>(ncol));
    for (int c = 0; c < ncol; ++c) row.push_back(detail::render_cell(stmt.get(), c));
    sample.rows.push_back(std::move(row));
  }
  if (rc != SQLITE_DONE) throw Error(ErrorCode::IoError, sqlite3_errmsg(db.get()));
  return sample;
}

namespace {

std::set<std::string> name_bag(const Schema& schema) {
  std::set<std::string> bag;
  for (const auto& table : schema.tables) {
    const std::string t = to_lower(table.name);
    bag.insert(t);
    for (const auto& column : table.columns) bag.insert(t + "." + to_lower(column.name));
  }
  return bag;
}

double jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
  if (a.empty() && b.empty()) return 1.0;
  std::size_t common = 0;
  for (const auto& name : a) common += b.count(name);
  return static_cast<double>(common) / static_cast<double>(a.size() + b.size() - common);
}

}  // namespace

double schema_similarity(const Schema& a, const Schema& b) {
  return jaccard(name_bag(a), name_bag(b));
}

std::vector<std::vector<std::string>> merge_similar_databases(const std::vector<Schema>& schemas,
                                                              double threshold) {
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "merge threshold must lie in (0, 1]");
  }
  const std::size_t n = schemas.size();
  std::vector<std::set<std::string>> bags;
  bags.reserve(n);
  for (const auto& s : schemas) bags.push_back(name_bag(s));

  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (find(i) != find(j) && jaccard(bags[i], bags[j]) >= threshold) parent[find(i)] = find(j);
    }
  }

  std::map<std::size_t, std::vector<std::string>> by_root;
  for (std::size_t i = 0; i < n; ++i) by_root[find(i)].push_back(schemas[i].db_id);
  std::vector<std::vector<std::string>> groups;
  groups.reserve(by_root.size());
  for (auto& [root, ids] : by_root) {
    std::sort(ids.begin(), ids.end());
    groups.push_back(std::move(ids));
  }
  std::sort(groups.begin(), groups.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return groups;
}

}  // namespace senseforge
