// Copyright 2026 The senseforge Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stop_token>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "senseforge/dataset.hpp"
#include "senseforge/llm.hpp"
#include "senseforge/prompt.hpp"

namespace senseforge {

struct GenerationRequest {
  PromptText prompt;
  HardnessTarget level = HardnessTarget::Easy;
  int max_tokens = 1024;
  double temperature = 1.0;
  std::optional<std::uint64_t> seed;
};

/// Throws InvalidArgument unless the prompt is a synthesis prompt; transport
/// errors as for complete().
std::string request_generation(const Endpoint& endpoint, const GenerationRequest& request,
                               std::stop_token stop = {});

/// Splits model output into Domain / Schema / Question / Answer. Headers are
/// matched case-insensitively at line start and may carry markdown
/// decoration ("**Answer:**", "## Schema:", "4. Answer:"); text before the
/// first header is ignored. Code fences around Schema and Answer are
/// removed, leaving the inside byte-exact. An unfenced answer ends at the
/// first blank line. Throws MissingSection naming the first absent section,
/// or TrailingContent for anything after the answer.
SynthDataPoint parse_datapoint(std::string_view raw, HardnessTarget level);

enum class ValidationStatus { Valid, InvalidDdl, InvalidSql };

std::string_view to_string(ValidationStatus status) noexcept;

struct ValidationVerdict {
  ValidationStatus status = ValidationStatus::Valid;
  std::string message;
  /// The answer returned no rows, or the schema holds no rows at all.
  bool empty_result = false;

  bool valid() const noexcept { return status == ValidationStatus::Valid; }
};

/// Runs the DDL in a fresh in-memory database, then the answer.
ValidationVerdict validate_datapoint(const SynthDataPoint& point,
                                     std::chrono::milliseconds timeout = std::chrono::seconds(5));

struct DatasetStats {
  std::size_t n_examples = 0;
  std::size_t n_databases = 0;
  double avg_tokens = 0;
  double avg_joins = 0;
  /// Descending by count, ties by name.
  std::vector<std::pair<std::string, std::size_t>> domain_density;
  /// SQL that did not parse; counted as zero joins.
  std::size_t unparsable_sql = 0;

  /// n_examples / n_databases, or NaN when there are no databases.
  double examples_per_db() const noexcept;
};

/// Databases are merged with merge_similar_databases before counting; a
/// schema with no tables is never merged. Tokens are whitespace-separated
/// tokens of question + " " + sql.
DatasetStats dataset_stats(const StrongDataset& dataset,
                           double merge_threshold = kDefaultMergeThreshold);

/// One decimal, or "-" for NaN.
std::string format_ratio(double value);
std::string format_stats(const DatasetStats& stats);
nlohmann::json to_json(const DatasetStats& stats);

struct SynthesisOptions {
  /// "easy", "medium", "hard", or "mix" for a round-robin schedule.
  std::string level = "mix";
  std::size_t n = 1;
  std::uint64_t seed = 0;
  int max_tokens = 1024;
  double temperature = 1.0;
  unsigned concurrency = 4;
  std::chrono::milliseconds validation_timeout{5000};
};

struct SynthesizedPoint {
  std::size_t index = 0;
  SynthDataPoint point;
  bool empty_result = false;
};

struct RejectedPoint {
  std::size_t index = 0;
  HardnessTarget level = HardnessTarget::Easy;
  std::string reason;  // an ErrorCode or ValidationStatus name
  std::string message;
  std::string raw;
};

struct SynthesisResult {
  std::vector<SynthesizedPoint> accepted;  // ascending index
  std::vector<RejectedPoint> rejected;     // ascending index
  bool complete = true;
};

HardnessTarget scheduled_level(std::string_view level, std::size_t index);

/// Request i uses the scheduled level, two demonstrations drawn from
/// `demonstrations` with seed + i, and sampling seed seed + i. Parse,
/// validation and transport failures become rejects; AuthError aborts.
SynthesisResult synthesize_batch(const Endpoint& endpoint,
                                 std::span<const SynthDataPoint> demonstrations,
                                 const SynthesisOptions& options, std::stop_token stop = {});

nlohmann::json to_json(const SynthesizedPoint& point);
nlohmann::json to_json(const RejectedPoint& reject);

}  // namespace senseforge
