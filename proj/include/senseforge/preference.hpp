// Copyright 2026 The senseforge Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <stop_token>
#include <string>
#include <string_view>
#include <vector>

#include "senseforge/dataset.hpp"
#include "senseforge/executor.hpp"
#include "senseforge/llm.hpp"
#include "senseforge/prompt.hpp"

namespace senseforge {

enum class LabelValue { Positive, Negative };
enum class LabelReason { ExecMatch, ExecMismatch, ExecError, Timeout };

std::string_view to_string(LabelValue value) noexcept;
std::string_view to_string(LabelReason reason) noexcept;

struct PreferenceLabel {
  LabelValue value = LabelValue::Negative;
  LabelReason reason = LabelReason::ExecMismatch;
  std::string message;

  bool positive() const noexcept { return value == LabelValue::Positive; }
};

/// Positive iff the candidate's result matches the gold's. A failing
/// candidate is Negative (ExecError or Timeout); a failing gold throws
/// GoldExecutionFailed.
PreferenceLabel label_candidate(const Example& example, const Candidate& candidate,
                                const std::filesystem::path& db_root,
                                const MatchOptions& options = {});

enum class PairingPolicy { GoldBackstop, WeakVsWeak };

std::string_view to_string(PairingPolicy policy) noexcept;
PairingPolicy parse_pairing_policy(std::string_view text);

struct PreferenceOptions {
  PairingPolicy policy = PairingPolicy::GoldBackstop;
  MatchOptions match;
  std::size_t sample_rows = kDefaultSampleRows;
  unsigned concurrency = 1;
  std::stop_token stop;
};

struct LabeledCandidate {
  Candidate candidate;
  PreferenceLabel label;
};

struct PreferenceResult {
  std::vector<PreferencePair> pairs;        // ascending example id
  std::vector<LabeledCandidate> labeled;    // same order
  bool complete = true;
};

/// Every Negative is paired with the first Positive candidate of its
/// example, or under GoldBackstop with the gold query when there is none.
/// Pairs whose two sides are identical text are dropped.
PreferenceResult build_preference_dataset(std::span<const Example> examples,
                                          std::span<const Candidate> candidates,
                                          const std::filesystem::path& db_root,
                                          const PreferenceOptions& options = {});

/// The first SQL statement in a completion: the first fenced block if there
/// is one, then from the first SELECT (or WITH ... AS () up to the first
/// semicolon outside literals and comments (kept), a blank line, or the end.
/// Returns "" when no statement is found.
std::string extract_first_sql(std::string_view completion);

struct CandidateOptions {
  std::size_t k_samples = 4;
  double temperature = 0.8;
  std::uint64_t seed = 0;
  int max_tokens = 512;
  std::size_t sample_rows = kDefaultSampleRows;
  unsigned concurrency = 4;
};

struct CandidateResult {
  std::vector<Candidate> candidates;  // by example order, then sample index
  std::size_t empty_completions = 0;
  bool complete = true;
};

/// k_samples completions per example; sample j of example i uses seed
/// seed + i * k_samples + j. Completions with no recognizable statement are
/// kept verbatim (they label as errors) unless blank.
CandidateResult generate_candidates(const Endpoint& endpoint, std::span<const Example> examples,
                                    const std::filesystem::path& db_root,
                                    const CandidateOptions& options, std::stop_token stop = {});

}  // namespace senseforge
