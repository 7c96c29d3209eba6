// Copyright 2026 The senseforge Authors
// SPDX-License-Identifier: Apache-2.0
#include "senseforge/dataset.hpp"

#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "senseforge/error.hpp"

namespace senseforge {
namespace {

using testing::TempDir;

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::InvalidArgument;
}

TEST(Dataset, ReadsSpiderStyleLine) {
  TempDir dir;
  write_text_file(dir / "g.jsonl",
                  R"({"db_id":"school","question":"How many students are there?","query":"SELECT count(*) FROM list;"})"
                  "\n");
  auto examples = read_examples(dir / "g.jsonl");
  ASSERT_EQ(examples.size(), 1u);
  EXPECT_EQ(examples[0].id, 0);
  EXPECT_EQ(examples[0].db_id, "school");
  EXPECT_EQ(examples[0].question, "How many students are there?");
  EXPECT_EQ(examples[0].gold_sql, "SELECT count(*) FROM list;");
  EXPECT_FALSE(examples[0].knowledge.has_value());
}

TEST(Dataset, EmptyFileIsEmptyList) {
  TempDir dir;
  write_text_file(dir / "e.jsonl", "");
  EXPECT_TRUE(read_examples(dir / "e.jsonl").empty());
  EXPECT_TRUE(read_preference_pairs(dir / "e.jsonl").empty());
}

TEST(Dataset, MissingFieldNamesFieldAndLine) {
  TempDir dir;
  write_text_file(dir / "m.jsonl",
                  "{\"db_id\":\"a\",\"question\":\"q\",\"query\":\"SELECT 1\"}\n"
                  "{\"db_id\":\"a\",\"question\":\"q\"}\n");
  try {
    read_examples(dir / "m.jsonl");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingField);
    EXPECT_NE(std::string(e.what()).find("\"query\""), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
}

TEST(Dataset, ErrorCodes) {
  TempDir dir;
  write_text_file(dir / "bad.jsonl", "{\"db_id\": \n");
  EXPECT_EQ(code_of([&] { read_examples(dir / "bad.jsonl"); }), ErrorCode::ParseError);
  write_text_file(dir / "arr.jsonl", "[1,2]\n");
  EXPECT_EQ(code_of([&] { read_examples(dir / "arr.jsonl"); }), ErrorCode::ParseError);
  EXPECT_EQ(code_of([&] { read_examples(dir / "none.jsonl"); }), ErrorCode::FileNotFound);
  write_text_file(dir / "dup.jsonl",
                  "{\"id\":4,\"db_id\":\"a\",\"question\":\"q\",\"query\":\"SELECT 1\"}\n"
                  "{\"id\":4,\"db_id\":\"a\",\"question\":\"r\",\"query\":\"SELECT 2\"}\n");
  EXPECT_EQ(code_of([&] { read_examples(dir / "dup.jsonl"); }), ErrorCode::DuplicateId);
  write_text_file(dir / "empty_q.jsonl", "{\"db_id\":\"a\",\"question\":\"\",\"query\":\"SELECT 1\"}\n");
  EXPECT_EQ(code_of([&] { read_examples(dir / "empty_q.jsonl"); }), ErrorCode::InvalidRecord);
  write_text_file(dir / "type.jsonl", "{\"id\":\"x\",\"db_id\":\"a\",\"question\":\"q\",\"query\":\"S\"}\n");
  EXPECT_EQ(code_of([&] { read_examples(dir / "type.jsonl"); }), ErrorCode::InvalidRecord);
  write_text_file(dir / "pdup.jsonl", "{\"example_id\":1,\"sql\":\"a\"}\n{\"example_id\":1,\"sql\":\"b\"}\n");
  EXPECT_EQ(code_of([&] { read_predictions(dir / "pdup.jsonl"); }), ErrorCode::DuplicateId);
  write_text_file(dir / "meta.jsonl",
                  "{\"prompt\":\"p\",\"chosen\":\"a\",\"rejected\":\"b\",\"meta\":{\"example_id\":1,"
                  "\"chosen_source\":\"oracle\"}}\n");
  EXPECT_EQ(code_of([&] { read_preference_pairs(dir / "meta.jsonl"); }), ErrorCode::InvalidRecord);
  EXPECT_EQ(code_of([&] { write_text_file(dir / "no" / "such" / "dir.txt", "x"); }),
            ErrorCode::IoError);
}

TEST(Dataset, IdsDefaultToLineNumbersAndKnowledgeIsOptional) {
  TempDir dir;
  write_text_file(dir / "g.jsonl",
                  "{\"db_id\":\"a\",\"question\":\"q0\",\"query\":\"SELECT 0\"}\n"
                  "\n"
                  "{\"db_id\":\"a\",\"question\":\"q2\",\"query\":\"SELECT 2\",\"evidence\":\"k\"}\r\n");
  auto examples = read_examples(dir / "g.jsonl");
  ASSERT_EQ(examples.size(), 2u);
  EXPECT_EQ(examples[0].id, 0);
  EXPECT_EQ(examples[1].id, 2);
  EXPECT_EQ(examples[1].knowledge, std::optional<std::string>("k"));
}

std::string random_text(std::mt19937& rng) {
  static const std::vector<std::string> pieces = {
      "SELECT", " ", "\n", "\t", "\"", "\\", "'", "é", "数据", "🙂", "x", "--", ";", "\r\n", "{}"};
  std::string out;
  const int n = 1 + static_cast<int>(rng() % 12);
  for (int i = 0; i < n; ++i) out += pieces[rng() % pieces.size()];
  return out;
}

TEST(Dataset, PreferencePairsRoundTrip) {
  TempDir dir;
  std::vector<PreferencePair> none;
  write_preference_pairs(none, dir / "empty.jsonl");
  EXPECT_EQ(testing::read_file(dir / "empty.jsonl"), "");

  std::mt19937 rng(2026);
  std::vector<PreferencePair> pairs;
  for (int i = 0; i < 1000; ++i) {
    PreferencePair p;
    p.example_id = i;
    p.prompt = random_text(rng);
    p.chosen = "c" + random_text(rng);
    p.rejected = "r" + random_text(rng);
    p.chosen_source = rng() % 2 ? ChosenSource::Gold : ChosenSource::WeakModel;
    if (rng() % 2) p.meta_extra["rejected_reason"] = "ExecError";
    pairs.push_back(std::move(p));
  }
  write_preference_pairs(pairs, dir / "pairs.jsonl");
  const std::string text = testing::read_file(dir / "pairs.jsonl");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1000);
  EXPECT_EQ(read_preference_pairs(dir / "pairs.jsonl"), pairs);

  std::vector<PreferencePair> one(pairs.begin(), pairs.begin() + 1);
  write_preference_pairs(one, dir / "one.jsonl");
  EXPECT_EQ(read_preference_pairs(dir / "one.jsonl"), one);
}

TEST(Dataset, OtherTypesRoundTrip) {
  TempDir dir;
  std::mt19937 rng(7);
  std::vector<Example> examples;
  std::vector<Prediction> predictions;
  std::vector<Candidate> candidates;
  std::vector<SynthDataPoint> points;
  for (int i = 0; i < 100; ++i) {
    Example e{i * 3, "db" + std::to_string(i % 4), "q" + random_text(rng), "S" + random_text(rng),
              std::nullopt};
    if (i % 3 == 0) e.knowledge = "k" + random_text(rng);
    examples.push_back(e);
    predictions.push_back({i, random_text(rng)});
    candidates.push_back({i / 4, "S" + random_text(rng), "weak-" + std::to_string(i % 2)});
    points.push_back({"d" + random_text(rng), "CREATE" + random_text(rng), "q" + random_text(rng),
                      "S" + random_text(rng), static_cast<HardnessTarget>(i % 3)});
  }
  write_examples(examples, dir / "e.jsonl");
  write_predictions(predictions, dir / "p.jsonl");
  write_candidates(candidates, dir / "c.jsonl");
  write_synth_points(points, dir / "s.jsonl");
  EXPECT_EQ(read_examples(dir / "e.jsonl"), examples);
  EXPECT_EQ(read_predictions(dir / "p.jsonl"), predictions);
  EXPECT_EQ(read_candidates(dir / "c.jsonl"), candidates);
  EXPECT_EQ(read_synth_points(dir / "s.jsonl"), points);
}

TEST(Dataset, WireFieldNames) {
  PreferencePair p{3, "x", "good", "bad", ChosenSource::Gold, nlohmann::json::object()};
  auto j = to_json(p);
  EXPECT_EQ(j["meta"]["example_id"], 3);
  EXPECT_EQ(j["meta"]["chosen_source"], "gold");
  EXPECT_TRUE(j.contains("prompt") && j.contains("chosen") && j.contains("rejected"));
  auto s = to_json(SynthDataPoint{"d", "CREATE TABLE t(x)", "q", "SELECT 1", HardnessTarget::Hard});
  EXPECT_EQ(s["schema_ddl"], "CREATE TABLE t(x)");
  EXPECT_EQ(s["answer"], "SELECT 1");
  EXPECT_EQ(s["level"], "hard");
  EXPECT_EQ(to_json(Example{1, "a", "q", "SELECT 1", "k"})["evidence"], "k");
}

TEST(Dataset, StrongDatasetTagsProvenance) {
  StrongDataset ds;
  Schema school{"school", {}};
  std::vector<Example> examples = {{5, "school", "q", "SELECT 1", std::nullopt}};
  ds.add_examples(examples, std::vector<Schema>{school});
  std::vector<SynthDataPoint> points = {
      {"Farming", "CREATE TABLE farms(id INTEGER)", "q", "SELECT 1", HardnessTarget::Easy},
      {"Broken", "CREATE TABLE (", "q", "SELECT 1", HardnessTarget::Easy}};
  ds.add_synth_points(points);
  ASSERT_EQ(ds.entries.size(), 3u);
  EXPECT_EQ(ds.entries[0].id, "human:5");
  EXPECT_EQ(ds.entries[0].provenance, Provenance::Human);
  EXPECT_EQ(ds.entries[1].provenance, Provenance::Synthetic);
  EXPECT_EQ(ds.entries[1].domain, "Farming");
  ASSERT_EQ(ds.schemas.size(), 3u);
  EXPECT_EQ(ds.schemas[1].tables.size(), 1u);
  EXPECT_TRUE(ds.schemas[2].tables.empty());
}

}  // namespace
}  // namespace senseforge
