// Copyright 2026 The senseforge Authors
// SPDX-License-Identifier: Apache-2.0
#include "senseforge/preference.hpp"

#include <gtest/gtest.h>

#include <map>
#include <set>

#include "fixtures.hpp"
#include "senseforge/error.hpp"
#include "stub_server.hpp"

namespace senseforge {
namespace {

using namespace std::chrono_literals;
using testing::StubLlmServer;
using testing::TempDir;

class PreferenceTest : public ::testing::Test {
 protected:
  void SetUp() override { testing::build_fixture_root(dir_.path()); }
  const std::filesystem::path& root() const { return dir_.path(); }
  TempDir dir_;
  const Example count_example_{7, "school", "How many students are there?",
                               "SELECT count(*) FROM list", std::nullopt};
};

TEST_F(PreferenceTest, LabelsFollowExecution) {
  auto label = [&](std::string sql) {
    return label_candidate(count_example_, Candidate{7, std::move(sql), "weak"}, root());
  };
  PreferenceLabel same = label("SELECT count(*) FROM list");
  EXPECT_EQ(same.value, LabelValue::Positive);
  EXPECT_EQ(same.reason, LabelReason::ExecMatch);
  PreferenceLabel wrong = label("SELECT 999");
  EXPECT_EQ(wrong.value, LabelValue::Negative);
  EXPECT_EQ(wrong.reason, LabelReason::ExecMismatch);
  PreferenceLabel broken = label("SELEC count(*) FROM list");
  EXPECT_EQ(broken.value, LabelValue::Negative);
  EXPECT_EQ(broken.reason, LabelReason::ExecError);
  MatchOptions quick;
  quick.timeout = 100ms;
  PreferenceLabel slow = label_candidate(
      count_example_,
      Candidate{7, "WITH RECURSIVE c(x) AS (SELECT 1 UNION ALL SELECT x+1 FROM c) SELECT count(*) FROM c", "w"},
      root(), quick);
  EXPECT_EQ(slow.reason, LabelReason::Timeout);
}

TEST_F(PreferenceTest, LabelErrors) {
  auto code = [](auto fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::InvalidArgument;
  };
  Example broken = count_example_;
  broken.gold_sql = "SELECT * FROM nowhere";
  EXPECT_EQ(code([&] { label_candidate(broken, Candidate{7, "SELECT 1", "w"}, root()); }),
            ErrorCode::GoldExecutionFailed);
  Example elsewhere = count_example_;
  elsewhere.db_id = "atlantis";
  EXPECT_EQ(code([&] { label_candidate(elsewhere, Candidate{7, "SELECT 1", "w"}, root()); }),
            ErrorCode::MissingDatabase);
  EXPECT_THROW(label_candidate(count_example_, Candidate{8, "SELECT 1", "w"}, root()), Error);
}

TEST_F(PreferenceTest, PolicyBasics) {
  std::vector<Example> examples = {count_example_};
  std::vector<Candidate> mixed = {{7, "SELECT 999", "w"}, {7, "SELECT count(*) FROM list;", "w"}};
  auto r = build_preference_dataset(examples, mixed, root());
  ASSERT_EQ(r.pairs.size(), 1u);
  EXPECT_EQ(r.pairs[0].chosen_source, ChosenSource::WeakModel);
  EXPECT_EQ(r.pairs[0].chosen, "SELECT count(*) FROM list;");
  EXPECT_EQ(r.pairs[0].rejected, "SELECT 999");
  EXPECT_EQ(r.pairs[0].prompt,
            build_inference_prompt(database_path(root(), "school"), count_example_.question, std::nullopt).text);
  EXPECT_EQ(r.pairs[0].meta_extra["rejected_reason"], "ExecMismatch");

  std::vector<Candidate> all_bad = {{7, "SELECT 999", "w"}, {7, "SELEC 1", "w"}};
  auto backstop = build_preference_dataset(examples, all_bad, root());
  ASSERT_EQ(backstop.pairs.size(), 2u);
  for (const auto& p : backstop.pairs) {
    EXPECT_EQ(p.chosen, count_example_.gold_sql);
    EXPECT_EQ(p.chosen_source, ChosenSource::Gold);
  }
  PreferenceOptions purist;
  purist.policy = PairingPolicy::WeakVsWeak;
  EXPECT_TRUE(build_preference_dataset(examples, all_bad, root(), purist).pairs.empty());

  std::vector<Candidate> all_good = {{7, "SELECT count(*) FROM list", "w"}};
  EXPECT_TRUE(build_preference_dataset(examples, all_good, root()).pairs.empty());

  std::vector<Candidate> stray = {{99, "SELECT 1", "w"}};
  EXPECT_THROW(build_preference_dataset(examples, stray, root()), Error);
  EXPECT_EQ(parse_pairing_policy("weak_vs_weak"), PairingPolicy::WeakVsWeak);
  EXPECT_THROW(parse_pairing_policy("best"), Error);
}

// Brute force: label every candidate straight through the executor and
// count the pairs each policy must produce.
TEST_F(PreferenceTest, FiftyExampleFixtureMatchesBruteForce) {
  auto fixture = testing::preference_fixture(50);
  std::map<std::int64_t, const Example*> by_id;
  for (const auto& e : fixture.examples) by_id[e.id] = &e;
  std::map<std::int64_t, std::pair<int, int>> tally;  // positives, negatives
  std::size_t positives = 0;
  for (const auto& c : fixture.candidates) {
    const Example& e = *by_id.at(c.example_id);
    const bool match = results_match(database_path(root(), e.db_id), c.sql, e.gold_sql).is_match();
    auto& [pos, neg] = tally[c.example_id];
    (match ? pos : neg) += 1;
    positives += match;
  }
  ASSERT_GT(positives, 10u);
  ASSERT_LT(positives, fixture.candidates.size() - 10);

  for (PairingPolicy policy : {PairingPolicy::GoldBackstop, PairingPolicy::WeakVsWeak}) {
    std::size_t expected = 0;
    for (const auto& [id, counts] : tally) {
      const auto [pos, neg] = counts;
      if (neg == 0) continue;
      if (policy == PairingPolicy::GoldBackstop || pos > 0) expected += static_cast<std::size_t>(neg);
    }
    PreferenceOptions options;
    options.policy = policy;
    options.concurrency = 3;
    auto r = build_preference_dataset(fixture.examples, fixture.candidates, root(), options);
    EXPECT_EQ(r.pairs.size(), expected) << to_string(policy);
    EXPECT_EQ(r.labeled.size(), fixture.candidates.size());
    for (const auto& l : r.labeled) EXPECT_EQ(l.label.positive(), l.label.reason == LabelReason::ExecMatch);
    for (const auto& p : r.pairs) {
      EXPECT_NE(p.chosen, p.rejected);
      const Example& e = *by_id.at(p.example_id);
      const auto db = database_path(root(), e.db_id);
      EXPECT_TRUE(results_match(db, p.chosen, e.gold_sql).is_match());
      EXPECT_FALSE(results_match(db, p.rejected, e.gold_sql).is_match());
    }
    auto again = build_preference_dataset(fixture.examples, fixture.candidates, root(), options);
    EXPECT_EQ(again.pairs, r.pairs);
  }
}

TEST(ExtractFirstSql, FixtureCases) {
  auto cases = testing::read_json_lines(testing::data_path("extraction.jsonl"));
  ASSERT_EQ(cases.size(), 10u);
  for (const auto& c : cases) {
    EXPECT_EQ(extract_first_sql(c["completion"].get<std::string>()), c["expected"].get<std::string>())
        << c["completion"];
  }
}

TEST_F(PreferenceTest, GenerateCandidatesAgainstStub) {
  std::vector<Example> examples;
  for (std::int64_t i = 0; i < 10; ++i) {
    examples.push_back({i * 2, i % 2 ? "campus" : "school", "question " + std::to_string(i),
                        i % 2 ? "SELECT count(*) FROM clubs" : "SELECT count(*) FROM list", std::nullopt});
  }
  // The stub answers with the gold of whichever example the prompt asks about.
  StubLlmServer server([&](const nlohmann::json& body, int) {
    const std::string prompt = body["messages"][0]["content"];
    for (const auto& e : examples) {
      if (prompt.ends_with("Question: " + e.question + "\n")) {
        return StubLlmServer::Reply{200, "Sure:\n```sql\n" + e.gold_sql + ";\n```"};
      }
    }
    return StubLlmServer::Reply{200, "I cannot help."};
  });
  Endpoint endpoint;
  endpoint.url = server.url();
  endpoint.model = "weak-stub";
  CandidateOptions options;
  options.k_samples = 3;
  options.seed = 5;
  auto result = generate_candidates(endpoint, examples, root(), options);
  ASSERT_EQ(result.candidates.size(), 30u);
  EXPECT_EQ(server.request_count(), 30);
  for (std::size_t i = 0; i < result.candidates.size(); ++i) {
    const Example& e = examples[i / 3];
    EXPECT_EQ(result.candidates[i].example_id, e.id);
    EXPECT_EQ(result.candidates[i].sql, e.gold_sql + ";");
    EXPECT_EQ(result.candidates[i].source_model, "weak-stub");
  }
  std::set<std::uint64_t> seeds;
  for (const auto& body : server.requests()) {
    seeds.insert(body["seed"].get<std::uint64_t>());
    EXPECT_EQ(body["temperature"], 0.8);
  }
  EXPECT_EQ(seeds.size(), 30u);
  // Closed loop: gold-echoing candidates all label positive.
  auto labeled = build_preference_dataset(examples, result.candidates, root());
  EXPECT_TRUE(labeled.pairs.empty());
  for (const auto& l : labeled.labeled) EXPECT_TRUE(l.label.positive());
}

}  // namespace
}  // namespace senseforge
