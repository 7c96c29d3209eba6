// Copyright 2026 The senseforge Authors
// SPDX-License-Identifier: Apache-2.0
#include "senseforge/schema.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "fixtures.hpp"
#include "senseforge/error.hpp"
#include "senseforge/prompt.hpp"

namespace senseforge {
namespace {

using testing::TempDir;

Schema make_schema(std::string db_id,
                   std::vector<std::pair<std::string, std::vector<std::string>>> tables) {
  Schema s;
  s.db_id = std::move(db_id);
  for (auto& [name, cols] : tables) {
    Table t;
    t.name = name;
    for (auto& c : cols) t.columns.push_back({c, ColumnType::Text});
    s.tables.push_back(std::move(t));
  }
  return s;
}

class SchemaFixture : public ::testing::Test {
 protected:
  void SetUp() override { testing::build_fixture_root(dir_.path()); }
  std::filesystem::path school() const { return database_path(dir_.path(), "school"); }
  std::filesystem::path campus() const { return database_path(dir_.path(), "campus"); }
  TempDir dir_;
};

TEST_F(SchemaFixture, IntrospectsListTable) {
  Schema s = introspect_schema(school());
  EXPECT_EQ(s.db_id, "school");
  ASSERT_EQ(s.tables.size(), 1u);
  const Table& t = s.tables[0];
  EXPECT_EQ(t.name, "list");
  ASSERT_EQ(t.columns.size(), 4u);
  EXPECT_EQ(t.columns[0], (Column{"LastName", ColumnType::Text}));
  EXPECT_EQ(t.columns[2], (Column{"Grade", ColumnType::Integer}));
  EXPECT_EQ(t.primary_key, (std::vector<std::string>{"LastName", "FirstName"}));
  EXPECT_TRUE(t.foreign_keys.empty());
}

TEST_F(SchemaFixture, ForeignKeysMatchDdl) {
  Schema s = introspect_schema(campus());
  std::vector<std::string> names;
  for (const auto& t : s.tables) names.push_back(t.name);
  EXPECT_EQ(names, (std::vector<std::string>{"teachers", "students", "clubs", "memberships"}));

  const Table* students = s.find_table("students");
  ASSERT_NE(students, nullptr);
  ASSERT_EQ(students->foreign_keys.size(), 1u);
  EXPECT_EQ(students->foreign_keys[0], (ForeignKey{"Classroom", "teachers", "Classroom"}));

  const Table* memberships = s.find_table("MEMBERSHIPS");
  ASSERT_NE(memberships, nullptr);
  EXPECT_EQ(memberships->primary_key, (std::vector<std::string>{"StuID", "ClubID"}));
  std::set<std::string> fk_targets;
  for (const auto& fk : memberships->foreign_keys) fk_targets.insert(fk.ref_table);
  EXPECT_EQ(fk_targets, (std::set<std::string>{"students", "clubs"}));
  EXPECT_NO_THROW(s.validate());
}

TEST(Schema, EmptyDatabaseHasNoTables) {
  TempDir dir;
  testing::build_database_from_text("", dir / "empty.sqlite");
  EXPECT_TRUE(introspect_schema(dir / "empty.sqlite").tables.empty());
}

TEST(Schema, IntrospectErrors) {
  TempDir dir;
  try {
    introspect_schema(dir / "missing.sqlite");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::FileNotFound);
  }
  write_text_file(dir / "junk.sqlite", "this is not a database, just some text padding it out");
  try {
    introspect_schema(dir / "junk.sqlite");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotADatabase);
  }
}

TEST_F(SchemaFixture, SampleRows) {
  RowSample sample = sample_rows(school(), "list", 3);
  EXPECT_EQ(sample.header, (std::vector<std::string>{"LastName", "FirstName", "Grade", "Classroom"}));
  ASSERT_EQ(sample.rows.size(), 3u);
  EXPECT_EQ(sample.rows[0], (std::vector<std::string>{"CAR", "MAUDE", "2", "101"}));

  RowSample all = sample_rows(school(), "list", 100);
  EXPECT_EQ(all.rows.size(), 12u);
  for (const auto& row : all.rows) EXPECT_EQ(row.size(), all.header.size());
}

TEST(Schema, SampleRowsEdgeCases) {
  TempDir dir;
  testing::build_database_from_text(
      "CREATE TABLE two(a INTEGER, b REAL, c TEXT);"
      "INSERT INTO two VALUES (1, 2.5, NULL), (2, 3.0, 'x');"
      "CREATE TABLE vacant(a INTEGER);",
      dir / "t.sqlite");
  RowSample two = sample_rows(dir / "t.sqlite", "two", 3);
  ASSERT_EQ(two.rows.size(), 2u);
  EXPECT_EQ(two.rows[0], (std::vector<std::string>{"1", "2.5", "None"}));
  EXPECT_EQ(two.rows[1], (std::vector<std::string>{"2", "3.0", "x"}));

  RowSample vacant = sample_rows(dir / "t.sqlite", "vacant", 3);
  EXPECT_EQ(vacant.header, (std::vector<std::string>{"a"}));
  EXPECT_TRUE(vacant.rows.empty());

  try {
    sample_rows(dir / "t.sqlite", "absent", 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoSuchTable);
  }
  try {
    sample_rows(dir / "t.sqlite", "two", 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidArgument);
  }
}

TEST(Schema, SimilarityExamples) {
  Schema a = make_schema("a", {{"t1", {"x", "y"}}});
  Schema b = make_schema("b", {{"t1", {"x", "z"}}});
  Schema c = make_schema("c", {{"other", {"q"}}});
  EXPECT_DOUBLE_EQ(schema_similarity(a, a), 1.0);
  EXPECT_DOUBLE_EQ(schema_similarity(a, c), 0.0);
  // {t1, t1.x} shared out of {t1, t1.x, t1.y, t1.z}
  EXPECT_DOUBLE_EQ(schema_similarity(a, b), 0.5);
  Schema upper = make_schema("u", {{"T1", {"X", "Y"}}});
  EXPECT_DOUBLE_EQ(schema_similarity(a, upper), 1.0);
}

TEST(Schema, SimilarityIsSymmetric) {
  std::mt19937 rng(11);
  const std::vector<std::string> pool = {"a", "b", "c", "d", "e"};
  auto random_schema = [&](std::string id) {
    std::vector<std::pair<std::string, std::vector<std::string>>> tables;
    const int n = 1 + static_cast<int>(rng() % 3);
    std::set<std::string> used;
    for (int i = 0; i < n; ++i) {
      std::string name = pool[rng() % pool.size()];
      if (!used.insert(name).second) continue;
      std::vector<std::string> cols;
      for (const auto& c : pool)
        if (rng() % 2) cols.push_back(c);
      tables.emplace_back(name, cols);
    }
    return make_schema(std::move(id), tables);
  };
  for (int trial = 0; trial < 200; ++trial) {
    Schema x = random_schema("x");
    Schema y = random_schema("y");
    const double s = schema_similarity(x, y);
    EXPECT_DOUBLE_EQ(s, schema_similarity(y, x));
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, 1.0);
    EXPECT_DOUBLE_EQ(schema_similarity(x, x), 1.0);
  }
}

TEST(Schema, MergeGroups) {
  Schema a = make_schema("a", {{"t", {"c1", "c2", "c3", "c4", "c5", "c6", "c7", "c8"}}});
  Schema b = make_schema("b", {{"t", {"c1", "c2", "c3", "c4", "c5", "c6", "c7", "c8", "c9"}}});
  Schema c = make_schema("c", {{"u", {"z"}}});
  EXPECT_EQ(merge_similar_databases({a, b, c}, 1.0),
            (std::vector<std::vector<std::string>>{{"a"}, {"b"}, {"c"}}));

  Schema a2 = a;
  a2.db_id = "a2";
  EXPECT_EQ(merge_similar_databases({a2, a}, 0.8),
            (std::vector<std::vector<std::string>>{{"a", "a2"}}));
  EXPECT_THROW(merge_similar_databases({a}, 0.0), Error);
  EXPECT_THROW(merge_similar_databases({a}, 1.5), Error);
}

// Brute-force connected components over the thresholded similarity graph.
std::vector<std::vector<std::string>> components_oracle(const std::vector<Schema>& schemas,
                                                        double threshold) {
  const std::size_t n = schemas.size();
  std::vector<int> label(n, -1);
  int next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (label[i] >= 0) continue;
    std::vector<std::size_t> stack = {i};
    label[i] = next;
    while (!stack.empty()) {
      std::size_t u = stack.back();
      stack.pop_back();
      for (std::size_t v = 0; v < n; ++v) {
        if (label[v] < 0 && schema_similarity(schemas[u], schemas[v]) >= threshold) {
          label[v] = next;
          stack.push_back(v);
        }
      }
    }
    ++next;
  }
  std::vector<std::vector<std::string>> groups(next);
  for (std::size_t i = 0; i < n; ++i) groups[label[i]].push_back(schemas[i].db_id);
  for (auto& g : groups) std::sort(g.begin(), g.end());
  std::sort(groups.begin(), groups.end());
  return groups;
}

TEST(Schema, MergeChainsTransitively) {
  // Sliding 20-column windows: each neighbour pair is >= 0.8 similar, the
  // ends of the chain are not. Jaccard distance obeys the triangle
  // inequality, so the chain needs several links to drift this far.
  auto window = [](std::string id, int shift) {
    std::vector<std::string> cols;
    for (int i = shift; i < shift + 20; ++i) cols.push_back("c" + std::to_string(i));
    return make_schema(std::move(id), {{"t", cols}});
  };
  std::vector<Schema> all;
  for (int shift = 6; shift >= 0; --shift) all.push_back(window(std::string(1, char('a' + shift)), shift));
  Schema outsider = make_schema("h", {{"u", {"z"}}});
  all.push_back(outsider);
  const Schema& a = all[6];
  const Schema& g = all[0];
  ASSERT_GE(schema_similarity(all[5], a), 0.8);
  ASSERT_LT(schema_similarity(a, g), 0.6);
  auto groups = merge_similar_databases(all, 0.8);
  EXPECT_EQ(groups, components_oracle(all, 0.8));
  EXPECT_EQ(groups, (std::vector<std::vector<std::string>>{{"a", "b", "c", "d", "e", "f", "g"}, {"h"}}));
}

TEST(Schema, MergePartitionsRandomInputs) {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Schema> schemas;
    for (int i = 0; i < 8; ++i) {
      std::vector<std::string> cols;
      for (int c = 0; c < 6; ++c)
        if (rng() % 3) cols.push_back("col" + std::to_string(c));
      schemas.push_back(make_schema("db" + std::to_string(i), {{"t" + std::to_string(rng() % 2), cols}}));
    }
    const double threshold = 0.3 + 0.1 * (trial % 7);
    auto groups = merge_similar_databases(schemas, threshold);
    EXPECT_EQ(groups, components_oracle(schemas, threshold));
    std::multiset<std::string> seen;
    for (const auto& g : groups) seen.insert(g.begin(), g.end());
    EXPECT_EQ(seen.size(), schemas.size());
    for (const auto& s : schemas) EXPECT_EQ(seen.count(s.db_id), 1u);
  }
}

TEST_F(SchemaFixture, DdlRoundTrip) {
  for (const auto& file : {school(), campus()}) {
    Schema original = introspect_schema(file);
    Schema rebuilt = schema_from_ddl(render_schema_ddl(original), original.db_id);
    ASSERT_EQ(rebuilt.tables.size(), original.tables.size());
    for (std::size_t i = 0; i < original.tables.size(); ++i) {
      EXPECT_EQ(rebuilt.tables[i].name, original.tables[i].name);
      EXPECT_EQ(rebuilt.tables[i].columns, original.tables[i].columns);
      EXPECT_EQ(rebuilt.tables[i].primary_key, original.tables[i].primary_key);
    }
  }
}

TEST(Schema, AffinityRules) {
  EXPECT_EQ(affinity_of("INTEGER"), ColumnType::Integer);
  EXPECT_EQ(affinity_of("bigint"), ColumnType::Integer);
  EXPECT_EQ(affinity_of("varchar(20)"), ColumnType::Text);
  EXPECT_EQ(affinity_of(""), ColumnType::Blob);
  EXPECT_EQ(affinity_of("double precision"), ColumnType::Real);
  EXPECT_EQ(affinity_of("number"), ColumnType::Numeric);
  EXPECT_EQ(affinity_of("FOO"), ColumnType::Numeric);
}

TEST(Schema, ValidateRejectsBrokenSchemas) {
  Schema dup = make_schema("d", {{"t", {"a"}}, {"T", {"b"}}});
  EXPECT_THROW(dup.validate(), Error);
  Schema cols = make_schema("d", {{"t", {"a", "A"}}});
  EXPECT_THROW(cols.validate(), Error);
  Schema pk = make_schema("d", {{"t", {"a"}}});
  pk.tables[0].primary_key = {"zz"};
  EXPECT_THROW(pk.validate(), Error);
  Schema fk = make_schema("d", {{"t", {"a"}}});
  fk.tables[0].foreign_keys.push_back({"a", "missing", "x"});
  EXPECT_THROW(fk.validate(), Error);
}

}  // namespace
}  // namespace senseforge
