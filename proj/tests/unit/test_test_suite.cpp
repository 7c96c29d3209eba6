// Copyright 2026 The senseforge Authors
// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>
#include <sqlite3.h>

#include <random>

#include "fixtures.hpp"
#include "senseforge/error.hpp"
#include "senseforge/metrics.hpp"

namespace senseforge {
namespace {

using testing::TempDir;
namespace fs = std::filesystem;

class SuiteFixture : public ::testing::Test {
 protected:
  void SetUp() override { testing::build_fixture_root(dir_.path()); }
  fs::path db(std::string_view id) const { return database_path(dir_.path(), id); }
  fs::path out(std::string_view name) const { return dir_.path() / "out" / name; }
  TempDir dir_;
};

std::int64_t scalar(const fs::path& file, const std::string& sql) {
  auto r = execute(file, sql);
  const auto& rows = std::get<Rows>(r);
  return std::get<std::int64_t>(rows.rows.at(0).at(0));
}

// PRAGMA foreign_key_check is not a SELECT, so it goes through the raw API.
int foreign_key_violations(const fs::path& file) {
  sqlite3* handle = nullptr;
  EXPECT_EQ(sqlite3_open_v2(file.c_str(), &handle, SQLITE_OPEN_READONLY, nullptr), SQLITE_OK);
  sqlite3_stmt* stmt = nullptr;
  sqlite3_prepare_v2(handle, "PRAGMA foreign_key_check", -1, &stmt, nullptr);
  int violations = 0;
  while (sqlite3_step(stmt) == SQLITE_ROW) ++violations;
  sqlite3_finalize(stmt);
  sqlite3_close(handle);
  return violations;
}

std::vector<Table> tables_of(const fs::path& file) { return introspect_schema(file).tables; }

TEST_F(SuiteFixture, ZeroVariantsIsOriginalOnly) {
  TestSuite s = generate_test_suite(db("campus"), 0, 1, out("zero"));
  EXPECT_EQ(s.db_id, "campus");
  ASSERT_EQ(s.variants.size(), 1u);
  EXPECT_EQ(s.variants[0], db("campus"));
  EXPECT_THROW(generate_test_suite(db("campus"), -1, 1, out("neg")), Error);
}

TEST_F(SuiteFixture, SameSeedSameBytes) {
  TestSuite a = generate_test_suite(db("campus"), 4, 42, out("a"));
  TestSuite b = generate_test_suite(db("campus"), 4, 42, out("b"));
  TestSuite c = generate_test_suite(db("campus"), 4, 43, out("c"));
  ASSERT_EQ(a.variants.size(), 5u);
  bool any_difference = false;
  for (std::size_t i = 1; i < a.variants.size(); ++i) {
    EXPECT_EQ(testing::file_digest(a.variants[i]), testing::file_digest(b.variants[i]));
    EXPECT_NE(testing::file_digest(a.variants[i]), testing::file_digest(db("campus")));
    any_difference |= testing::file_digest(a.variants[i]) != testing::file_digest(c.variants[i]);
  }
  EXPECT_TRUE(any_difference);
}

TEST_F(SuiteFixture, VariantsKeepSchemaAndKeys) {
  for (const char* id : {"campus", "school"}) {
    const auto original = tables_of(db(id));
    ASSERT_EQ(foreign_key_violations(db(id)), 0);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      for (bool resample : {false, true}) {
        AugmentOptions options;
        options.resample_rows = resample;
        TestSuite s = generate_test_suite(db(id), 2, seed,
                                          out(std::string(id) + std::to_string(seed) + (resample ? "r" : "")),
                                          options);
        for (const auto& v : s.variants) {
          EXPECT_EQ(tables_of(v), original) << v;
          EXPECT_EQ(foreign_key_violations(v), 0) << v;
        }
      }
    }
  }
}

TEST_F(SuiteFixture, CellPerturbationKeepsRowCounts) {
  TestSuite s = generate_test_suite(db("campus"), 3, 9, out("counts"));
  for (const auto& v : s.variants) {
    EXPECT_EQ(scalar(v, "SELECT count(*) FROM students"), scalar(db("campus"), "SELECT count(*) FROM students"));
    // Primary keys never move.
    EXPECT_EQ(scalar(v, "SELECT sum(StuID) FROM students"), scalar(db("campus"), "SELECT sum(StuID) FROM students"));
  }
}

TEST_F(SuiteFixture, ResamplingBreaksConstantCount) {
  std::vector<Example> gold = {{1, "school", "How many students are there?",
                                "SELECT count(*) FROM list", std::nullopt}};
  std::vector<Prediction> pred = {{1, "SELECT 12"}};
  AugmentOptions options;
  options.resample_rows = true;
  std::map<std::string, TestSuite> suites = {
      {"school", generate_test_suite(db("school"), kDefaultSuiteSize, 3, out("rs"), options)}};
  bool count_changed = false;
  for (const auto& v : suites["school"].variants) count_changed |= scalar(v, "SELECT count(*) FROM list") != 12;
  ASSERT_TRUE(count_changed);
  EXPECT_EQ(ex_accuracy(gold, pred, dir_.path()).correct(), 1u);
  EXPECT_EQ(ts_accuracy(gold, pred, suites).correct(), 0u);
}

class TsProperties : public SuiteFixture {
 protected:
  void SetUp() override {
    SuiteFixture::SetUp();
    gold_ = read_examples(testing::data_path("mixed_gold.jsonl"));
    auto pred = read_predictions(testing::data_path("mixed_pred.jsonl"));
    // Candidate pool per example: the gold, the fixture prediction, and a
    // query that is right on the original data only by coincidence.
    for (std::size_t i = 0; i < gold_.size(); ++i) {
      pool_.push_back({gold_[i].gold_sql, pred[i].sql, "SELECT 12", "SELECT 1"});
    }
    for (const char* id : {"school", "campus"}) {
      suites_[id] = generate_test_suite(db(id), kDefaultSuiteSize, 17, out(std::string("p") + id));
    }
  }
  std::vector<Prediction> random_predictions(std::mt19937& rng) const {
    std::vector<Prediction> out;
    for (std::size_t i = 0; i < gold_.size(); ++i) {
      out.push_back({gold_[i].id, pool_[i][rng() % pool_[i].size()]});
    }
    return out;
  }
  std::vector<Example> gold_;
  std::vector<std::vector<std::string>> pool_;
  std::map<std::string, TestSuite> suites_;
};

TEST_F(TsProperties, TsNeverExceedsEx) {
  std::mt19937 rng(123);
  for (int trial = 0; trial < 20; ++trial) {
    auto pred = random_predictions(rng);
    MetricsReport ex = ex_accuracy(gold_, pred, dir_.path());
    MetricsReport ts = ts_accuracy(gold_, pred, suites_);
    EXPECT_LE(ts.correct(), ex.correct()) << trial;
    for (std::size_t i = 0; i < ts.per_example.size(); ++i) {
      if (ts.per_example[i].verdict.is_match()) EXPECT_TRUE(ex.per_example[i].verdict.is_match());
    }
  }
}

TEST_F(TsProperties, SingletonSuiteEqualsEx) {
  std::map<std::string, TestSuite> originals;
  for (const char* id : {"school", "campus"}) originals[id] = TestSuite{id, {db(id)}};
  std::mt19937 rng(9);
  for (int trial = 0; trial < 3; ++trial) {
    auto pred = random_predictions(rng);
    auto ex = to_json(ex_accuracy(gold_, pred, dir_.path()));
    auto ts = to_json(ts_accuracy(gold_, pred, originals));
    ex.erase("metric");
    ts.erase("metric");
    EXPECT_EQ(ex, ts);
  }
}

TEST_F(TsProperties, AddingVariantsNeverHelps) {
  std::mt19937 rng(77);
  auto pred = random_predictions(rng);
  std::vector<bool> previous(gold_.size(), true);
  for (std::size_t k = 1; k <= kDefaultSuiteSize + 1; ++k) {
    std::map<std::string, TestSuite> prefix;
    for (const auto& [id, suite] : suites_) {
      prefix[id] = TestSuite{id, {suite.variants.begin(), suite.variants.begin() + static_cast<long>(k)}};
    }
    MetricsReport r = ts_accuracy(gold_, pred, prefix);
    ASSERT_EQ(r.per_example.size(), gold_.size());
    for (std::size_t i = 0; i < gold_.size(); ++i) {
      const bool now = r.per_example[i].verdict.is_match();
      EXPECT_FALSE(now && !previous[i]) << "example " << gold_[i].id << " at size " << k;
      previous[i] = now;
    }
  }
}

TEST_F(SuiteFixture, TsNeedsSuiteForEveryDatabase) {
  std::vector<Example> gold = {{1, "campus", "q", "SELECT 1", std::nullopt}};
  std::vector<Prediction> pred = {{1, "SELECT 1"}};
  try {
    ts_accuracy(gold, pred, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingDatabase);
  }
}

}  // namespace
}  // namespace senseforge
