// Copyright 2026 The senseforge Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <stop_token>
#include <string>
#include <vector>

#include "json.hpp"
#include "senseforge/dataset.hpp"
#include "senseforge/executor.hpp"
#include "senseforge/hardness.hpp"

namespace senseforge {

struct ExampleOutcome {
  std::int64_t example_id = 0;
  std::string db_id;
  MatchVerdict verdict;
  Hardness hardness = Hardness::ExtraHard;
};

struct BucketStats {
  std::size_t count = 0;
  std::size_t correct = 0;
};

struct MetricsReport {
  std::string metric = "ex";  // "ex" or "ts"
  /// Scored examples, ascending by id. GoldError examples are not here.
  std::vector<ExampleOutcome> per_example;
  std::vector<ExampleOutcome> gold_errors;
  std::array<BucketStats, 4> by_hardness{};  // indexed by Hardness
  /// False when evaluation was cancelled; the report covers a prefix.
  bool complete = true;

  std::size_t total() const noexcept { return per_example.size(); }
  std::size_t correct() const noexcept;
  /// Exact fraction correct / total; 0 for an empty report.
  double overall_accuracy() const noexcept;
};

/// Percentage with one decimal, rounded half up from the exact ratio, or
/// "-" when `total` is 0.
std::string format_percent(std::size_t correct, std::size_t total);

struct EvalOptions {
  MatchOptions match;
  unsigned concurrency = 1;
  std::stop_token stop;
};

/// Examples are scored against the database db_root/<db_id>/<db_id>.sqlite.
/// Throws MissingDatabase, MissingPrediction, or UnknownExample for a
/// prediction whose example_id is not in `examples`.
MetricsReport ex_accuracy(std::span<const Example> examples,
                          std::span<const Prediction> predictions,
                          const std::filesystem::path& db_root, const EvalOptions& options = {});

struct TestSuite {
  std::string db_id;
  std::vector<std::filesystem::path> variants;  // variants[0] is the original
};

inline constexpr int kDefaultSuiteSize = 8;

struct AugmentOptions {
  double cell_probability = 0.5;
  /// Also drop and duplicate whole rows so row counts vary.
  bool resample_rows = false;
  double row_probability = 0.2;
};

/// Writes n_variants perturbed copies of `db_file` to
/// out_dir/<db_id>/variant_<i>.sqlite (i from 1). Keys and foreign-key
/// references stay consistent, the schema is untouched, and output files
/// are byte-identical for the same seed.
TestSuite generate_test_suite(const std::filesystem::path& db_file, int n_variants,
                              std::uint64_t seed, const std::filesystem::path& out_dir,
                              const AugmentOptions& options = {});

/// An example is correct iff it matches on every variant of its suite. A
/// gold query that fails on the original makes the example a GoldError; a
/// variant on which the gold fails is skipped.
MetricsReport ts_accuracy(std::span<const Example> examples,
                          std::span<const Prediction> predictions,
                          const std::map<std::string, TestSuite>& suites,
                          const EvalOptions& options = {});

/// Plain-text table with rows easy/medium/hard/extra/all.
std::string report_by_hardness(const MetricsReport& report);

nlohmann::json to_json(const MetricsReport& report);

}  // namespace senseforge
