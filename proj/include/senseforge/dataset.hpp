// Copyright 2026 The senseforge Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "senseforge/schema.hpp"

namespace senseforge {

/// One text-to-SQL pair. On disk the gold SQL is "query" and the external
/// knowledge is "evidence" (Spider / BIRD field names).
struct Example {
  std::int64_t id = 0;
  std::string db_id;
  std::string question;
  std::string gold_sql;
  std::optional<std::string> knowledge;

  friend bool operator==(const Example&, const Example&) = default;
};

struct Prediction {
  std::int64_t example_id = 0;
  std::string sql;

  friend bool operator==(const Prediction&, const Prediction&) = default;
};

struct Candidate {
  std::int64_t example_id = 0;
  std::string sql;
  std::string source_model;

  friend bool operator==(const Candidate&, const Candidate&) = default;
};

enum class HardnessTarget { Easy, Medium, Hard };

std::string_view to_string(HardnessTarget level) noexcept;
HardnessTarget parse_hardness_target(std::string_view text);

struct SynthDataPoint {
  std::string domain;
  std::string ddl;
  std::string question;
  std::string answer_sql;
  HardnessTarget level = HardnessTarget::Easy;

  friend bool operator==(const SynthDataPoint&, const SynthDataPoint&) = default;
};

enum class ChosenSource { WeakModel, Gold };

std::string_view to_string(ChosenSource source) noexcept;

struct PreferencePair {
  std::int64_t example_id = 0;
  std::string prompt;
  std::string chosen;
  std::string rejected;
  ChosenSource chosen_source = ChosenSource::WeakModel;
  /// Extra provenance stored under "meta" next to example_id/chosen_source.
  nlohmann::json meta_extra = nlohmann::json::object();

  friend bool operator==(const PreferencePair&, const PreferencePair&) = default;
};

enum class Provenance { Human, Synthetic };

struct StrongEntry {
  std::string id;
  std::string db_id;
  std::string domain;
  std::string question;
  std::string sql;
  Provenance provenance = Provenance::Human;
};

/// Strong-data pool: human examples plus synthetic datapoints, each tied to
/// a schema so databases can be merged by similarity.
struct StrongDataset {
  std::vector<StrongEntry> entries;
  std::vector<Schema> schemas;

  /// Human examples; `schemas` must hold each referenced db_id.
  void add_examples(std::span<const Example> examples, std::span<const Schema> example_schemas);
  /// Synthetic datapoints; each gets its own database built from its DDL.
  void add_synth_points(std::span<const SynthDataPoint> points);
};

nlohmann::json to_json(const Example& example);
nlohmann::json to_json(const Prediction& prediction);
nlohmann::json to_json(const Candidate& candidate);
nlohmann::json to_json(const SynthDataPoint& point);
nlohmann::json to_json(const PreferencePair& pair);

/// Serializes one record on one line; invalid UTF-8 is replaced, never fatal.
std::string dump_line(const nlohmann::json& record);

std::vector<Example> read_examples(const std::filesystem::path& path);
std::vector<Prediction> read_predictions(const std::filesystem::path& path);
std::vector<Candidate> read_candidates(const std::filesystem::path& path);
std::vector<SynthDataPoint> read_synth_points(const std::filesystem::path& path);
std::vector<PreferencePair> read_preference_pairs(const std::filesystem::path& path);

void write_examples(std::span<const Example> examples, const std::filesystem::path& path);
void write_predictions(std::span<const Prediction> predictions, const std::filesystem::path& path);
void write_candidates(std::span<const Candidate> candidates, const std::filesystem::path& path);
void write_synth_points(std::span<const SynthDataPoint> points, const std::filesystem::path& path);
void write_preference_pairs(std::span<const PreferencePair> pairs, const std::filesystem::path& path);

/// Writes `text` to `path`, throwing IoError on failure.
void write_text_file(const std::filesystem::path& path, std::string_view text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace senseforge
