// Copyright 2026 The senseforge Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "senseforge/dataset.hpp"
#include "senseforge/error.hpp"
#include "senseforge/schema.hpp"

namespace senseforge {

enum class PromptKind { Inference, Synthesis };

struct PromptText {
  std::string text;
  PromptKind kind = PromptKind::Inference;
};

inline constexpr std::size_t kDefaultSampleRows = 3;

inline constexpr std::string_view kInstruction =
    "-- Using valid SQLite, answer the following questions for the tables provided above.";
inline constexpr std::string_view kInstructionWithKnowledge =
    "-- Using valid SQLite and understanding External Knowledge, answer the following questions "
    "for the tables provided above.";

/// CREATE TABLE block: quoted table and column names, one column per line,
/// then PRIMARY KEY and FOREIGN KEY lines, closed by ");".
std::string render_create_table(const Table& table);

/// All CREATE TABLE blocks of a schema, newline separated.
std::string render_schema_ddl(const Schema& schema);

/// The "/* k example rows: ... */" block. Columns are left-aligned to the
/// widest cell plus three spaces; the last column is not padded.
std::string render_row_sample(const RowSample& sample, std::size_t k = kDefaultSampleRows);

PromptText build_inference_prompt(const Schema& schema, std::span<const RowSample> samples,
                                  std::string_view question,
                                  const std::optional<std::string>& knowledge,
                                  std::size_t sample_rows = kDefaultSampleRows);

/// Introspects `db_file`, samples every table and renders the prompt.
PromptText build_inference_prompt(const std::filesystem::path& db_file, std::string_view question,
                                  const std::optional<std::string>& knowledge,
                                  std::size_t sample_rows = kDefaultSampleRows);

/// Domain/Schema/Question/Answer block used for few-shot demonstrations.
std::string render_demonstration(const SynthDataPoint& point);

/// Turns a human example into a demonstration datapoint for the synthesis
/// prompt; the domain is the database id.
SynthDataPoint to_demonstration(const Example& example, const Schema& schema, HardnessTarget level);

PromptText build_synthesis_prompt(HardnessTarget level, std::span<const SynthDataPoint> few_shot);

/// Uniform sample of `n` distinct indices out of `size`, returned ascending.
std::vector<std::size_t> sample_indices(std::size_t size, std::size_t n, std::uint64_t seed);

template <class T>
std::vector<T> draw_few_shot(std::span<const T> dataset, std::size_t n, std::uint64_t seed) {
  if (n > dataset.size()) {
    throw Error(ErrorCode::NotEnoughExamples, "cannot draw " + std::to_string(n) + " of " +
                                                  std::to_string(dataset.size()) + " examples");
  }
  std::vector<T> out;
  out.reserve(n);
  for (std::size_t i : sample_indices(dataset.size(), n, seed)) out.push_back(dataset[i]);
  return out;
}

}  // namespace senseforge
