// Copyright 2026 The senseforge Authors
// SPDX-License-Identifier: Apache-2.0
#include "senseforge/preference.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <optional>
#include <regex>

#include "senseforge/error.hpp"
#include "senseforge/logging.hpp"
#include "senseforge/parallel.hpp"

namespace senseforge {

std::string_view to_string(LabelValue value) noexcept {
  return value == LabelValue::Positive ? "Positive" : "Negative";
}

std::string_view to_string(LabelReason reason) noexcept {
  switch (reason) {
    case LabelReason::ExecMatch: return "ExecMatch";
    case LabelReason::ExecMismatch: return "ExecMismatch";
    case LabelReason::ExecError: return "ExecError";
    case LabelReason::Timeout: return "Timeout";
  }
  return "ExecError";
}

std::string_view to_string(PairingPolicy policy) noexcept {
  return policy == PairingPolicy::GoldBackstop ? "gold_backstop" : "weak_vs_weak";
}

PairingPolicy parse_pairing_policy(std::string_view text) {
  if (text == "gold_backstop") return PairingPolicy::GoldBackstop;
  if (text == "weak_vs_weak") return PairingPolicy::WeakVsWeak;
  throw Error(ErrorCode::InvalidArgument, "unknown pairing policy: " + std::string(text));
}

namespace {

std::filesystem::path require_database(const std::filesystem::path& db_root,
                                       const std::string& db_id) {
  auto path = database_path(db_root, db_id);
  if (!std::filesystem::is_regular_file(path)) {
    throw Error(ErrorCode::MissingDatabase, "no database for db_id " + db_id + " at " +
                                                path.string());
  }
  return path;
}

PreferenceLabel label_on(const std::filesystem::path& db_file, const Example& example,
                         const Candidate& candidate, const MatchOptions& options) {
  const MatchVerdict verdict = results_match(db_file, candidate.sql, example.gold_sql, options);
  switch (verdict.kind) {
    case VerdictKind::Match: return {LabelValue::Positive, LabelReason::ExecMatch, {}};
    case VerdictKind::Mismatch: return {LabelValue::Negative, LabelReason::ExecMismatch, {}};
    case VerdictKind::PredError:
      return {LabelValue::Negative,
              verdict.failure == FailureKind::Timeout ? LabelReason::Timeout
                                                      : LabelReason::ExecError,
              verdict.message};
    case VerdictKind::GoldError: break;
  }
  throw Error(ErrorCode::GoldExecutionFailed, "gold query of example " +
                                                  std::to_string(example.id) +
                                                  " failed: " + verdict.message);
}

}  // namespace

PreferenceLabel label_candidate(const Example& example, const Candidate& candidate,
                                const std::filesystem::path& db_root,
                                const MatchOptions& options) {
  if (example.id != candidate.example_id) {
    throw Error(ErrorCode::InvalidArgument, "candidate for example " +
                                                std::to_string(candidate.example_id) +
                                                " labeled against example " +
                                                std::to_string(example.id));
  }
  return label_on(require_database(db_root, example.db_id), example, candidate, options);
}

PreferenceResult build_preference_dataset(std::span<const Example> examples,
                                          std::span<const Candidate> candidates,
                                          const std::filesystem::path& db_root,
                                          const PreferenceOptions& options) {
  std::vector<std::size_t> order(examples.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return examples[a].id < examples[b].id;
  });
  std::map<std::int64_t, std::vector<const Candidate*>> grouped;
  for (const auto& e : examples) grouped[e.id];
  for (const auto& c : candidates) {
    auto it = grouped.find(c.example_id);
    if (it == grouped.end()) {
      throw Error(ErrorCode::UnknownExample,
                  "candidate for unknown example " + std::to_string(c.example_id));
    }
    it->second.push_back(&c);
  }
  std::map<std::string, std::filesystem::path> databases;
  for (const auto& e : examples) {
    if (!databases.contains(e.db_id)) databases.emplace(e.db_id, require_database(db_root, e.db_id));
  }

  struct PerExample {
    std::vector<LabeledCandidate> labeled;
    std::vector<PreferencePair> pairs;
  };
  std::vector<std::optional<PerExample>> results(order.size());

  parallel_for(
      order.size(), options.concurrency,
      [&](std::size_t slot) {
        const Example& example = examples[order[slot]];
        const auto& db_file = databases.at(example.db_id);
        PerExample out;
        for (const Candidate* c : grouped.at(example.id)) {
          out.labeled.push_back({*c, label_on(db_file, example, *c, options.match)});
        }
        const auto first_positive =
            std::find_if(out.labeled.begin(), out.labeled.end(),
                         [](const LabeledCandidate& l) { return l.label.positive(); });
        const bool any_negative =
            std::any_of(out.labeled.begin(), out.labeled.end(),
                        [](const LabeledCandidate& l) { return !l.label.positive(); });
        if (any_negative &&
            (first_positive != out.labeled.end() || options.policy == PairingPolicy::GoldBackstop)) {
          const bool from_weak = first_positive != out.labeled.end();
          const std::string prompt =
              build_inference_prompt(db_file, example.question, example.knowledge,
                                     options.sample_rows)
                  .text;
          const std::string& chosen = from_weak ? first_positive->candidate.sql : example.gold_sql;
          for (const auto& l : out.labeled) {
            if (l.label.positive() || l.candidate.sql == chosen) continue;
            nlohmann::json extra = {{"rejected_reason", to_string(l.label.reason)},
                                    {"rejected_source_model", l.candidate.source_model}};
            if (from_weak) extra["chosen_source_model"] = first_positive->candidate.source_model;
            out.pairs.push_back(PreferencePair{example.id, prompt, chosen, l.candidate.sql,
                                               from_weak ? ChosenSource::WeakModel
                                                         : ChosenSource::Gold,
                                               std::move(extra)});
          }
        }
        results[slot] = std::move(out);
      },
      options.stop);

  PreferenceResult result;
  for (auto& r : results) {
    if (!r) {
      result.complete = false;
      continue;
    }
    std::move(r->labeled.begin(), r->labeled.end(), std::back_inserter(result.labeled));
    std::move(r->pairs.begin(), r->pairs.end(), std::back_inserter(result.pairs));
  }
  return result;
}

namespace {

std::string_view trim_view(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  return s.substr(first, s.find_last_not_of(" \t\r\n") - first + 1);
}

// Contents of the first ``` block, or the whole text when there is none.
std::string_view fenced_or_all(std::string_view text) {
  const auto open = text.find("```");
  if (open == std::string_view::npos) return text;
  auto body = text.find('\n', open);
  if (body == std::string_view::npos) return text;
  ++body;
  const auto close = text.find("```", body);
  return text.substr(body, close == std::string_view::npos ? std::string_view::npos : close - body);
}

std::optional<std::size_t> statement_start(std::string_view text) {
  static const std::regex kSelect(R"(\bselect\b)", std::regex::icase);
  static const std::regex kWith(
      R"(\bwith\s+(recursive\s+)?("[^"]+"|`[^`]+`|\[[^\]]+\]|\w+)\s*(\([^)]*\))?\s*as\s*(not\s+materialized\s+|materialized\s+)?\()",
      std::regex::icase);
  const std::string s(text);
  std::optional<std::size_t> best;
  std::smatch m;
  if (std::regex_search(s, m, kSelect)) best = static_cast<std::size_t>(m.position(0));
  if (std::regex_search(s, m, kWith)) {
    const auto pos = static_cast<std::size_t>(m.position(0));
    if (!best || pos < *best) best = pos;
  }
  return best;
}

// End of the statement starting at `from`: just past the first semicolon
// outside quotes and comments, else the first blank line, else the end.
std::size_t statement_end(std::string_view text, std::size_t from) {
  std::size_t i = from;
  while (i < text.size()) {
    const char c = text[i];
    if (c == '\'' || c == '"' || c == '`' || c == '[') {
      const char close = c == '[' ? ']' : c;
      std::size_t j = i + 1;
      for (; j < text.size(); ++j) {
        if (text[j] == close) {
          if (close != ']' && j + 1 < text.size() && text[j + 1] == close) {
            ++j;  // doubled quote
            continue;
          }
          break;
        }
      }
      i = j + 1;
    } else if (c == '-' && i + 1 < text.size() && text[i + 1] == '-') {
      const auto nl = text.find('\n', i);
      i = nl == std::string_view::npos ? text.size() : nl;
    } else if (c == '/' && i + 1 < text.size() && text[i + 1] == '*') {
      const auto end = text.find("*/", i + 2);
      i = end == std::string_view::npos ? text.size() : end + 2;
    } else if (c == ';') {
      return i + 1;
    } else if (c == '\n') {
      std::size_t j = i + 1;
      while (j < text.size() && (text[j] == ' ' || text[j] == '\t' || text[j] == '\r')) ++j;
      if (j < text.size() && text[j] == '\n') return i;
      i = j;
    } else {
      ++i;
    }
  }
  return std::min(i, text.size());
}

}  // namespace

std::string extract_first_sql(std::string_view completion) {
  const std::string_view text = fenced_or_all(completion);
  const auto start = statement_start(text);
  if (!start) return {};
  return std::string(trim_view(text.substr(*start, statement_end(text, *start) - *start)));
}

CandidateResult generate_candidates(const Endpoint& endpoint, std::span<const Example> examples,
                                    const std::filesystem::path& db_root,
                                    const CandidateOptions& options, std::stop_token stop) {
  const std::size_t k = options.k_samples;
  if (k == 0 || examples.empty()) return {};
  std::map<std::string, std::filesystem::path> databases;
  for (const auto& e : examples) {
    if (!databases.contains(e.db_id)) databases.emplace(e.db_id, require_database(db_root, e.db_id));
  }
  std::vector<std::optional<std::string>> completions(examples.size() * k);

  parallel_for(
      examples.size() * k, options.concurrency,
      [&](std::size_t task) {
        const std::size_t i = task / k;
        const Example& e = examples[i];
        std::string prompt = build_inference_prompt(databases.at(e.db_id), e.question,
                                                    e.knowledge, options.sample_rows)
                                 .text;
        CompletionParams params{options.max_tokens, options.temperature, options.seed + task};
        try {
          completions[task] = complete(endpoint, prompt, params, stop);
        } catch (const Error&) {
          if (stop.stop_requested()) return;
          throw;
        }
      },
      stop);

  CandidateResult result;
  for (std::size_t task = 0; task < completions.size(); ++task) {
    if (!completions[task]) {
      result.complete = false;
      continue;
    }
    std::string sql = extract_first_sql(*completions[task]);
    if (sql.empty()) sql = std::string(trim_view(*completions[task]));
    if (sql.empty()) {
      ++result.empty_completions;
      logger()->warn("empty completion for example {}", examples[task / k].id);
      continue;
    }
    result.candidates.push_back(Candidate{examples[task / k].id, std::move(sql), endpoint.model});
  }
  return result;
}

}  // namespace senseforge
