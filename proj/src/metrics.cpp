// Copyright 2026 The senseforge Authors
// SPDX-License-Identifier: Apache-2.0
#include "senseforge/metrics.hpp"

#include <algorithm>
#include <unordered_map>

#include "senseforge/error.hpp"
#include "senseforge/logging.hpp"
#include "senseforge/parallel.hpp"

namespace senseforge {

std::size_t MetricsReport::correct() const noexcept {
  return static_cast<std::size_t>(std::count_if(
      per_example.begin(), per_example.end(),
      [](const ExampleOutcome& o) { return o.verdict.is_match(); }));
}

double MetricsReport::overall_accuracy() const noexcept {
  return per_example.empty() ? 0.0
                             : static_cast<double>(correct()) /
                                   static_cast<double>(per_example.size());
}

std::string format_percent(std::size_t correct, std::size_t total) {
  if (total == 0) return "-";
  // Tenths of a percent, rounded half up in integer arithmetic.
  const std::uint64_t tenths = (2000 * static_cast<std::uint64_t>(correct) + total) /
                               (2 * static_cast<std::uint64_t>(total));
  return std::to_string(tenths / 10) + "." + std::to_string(tenths % 10);
}

namespace {

Hardness hardness_or_extra(const Example& example) {
  try {
    return classify_hardness(example.gold_sql);
  } catch (const Error&) {
    return Hardness::ExtraHard;
  }
}

// Pairs each example with its prediction; validates both directions.
std::vector<const Prediction*> align(std::span<const Example> examples,
                                     std::span<const Prediction> predictions) {
  std::unordered_map<std::int64_t, const Prediction*> by_id;
  for (const auto& p : predictions) by_id.emplace(p.example_id, &p);
  std::unordered_map<std::int64_t, bool> known;
  for (const auto& e : examples) known.emplace(e.id, true);
  for (const auto& p : predictions) {
    if (!known.contains(p.example_id)) {
      throw Error(ErrorCode::UnknownExample,
                  "prediction for unknown example " + std::to_string(p.example_id));
    }
  }
  std::vector<const Prediction*> aligned;
  aligned.reserve(examples.size());
  for (const auto& e : examples) {
    auto it = by_id.find(e.id);
    if (it == by_id.end()) {
      throw Error(ErrorCode::MissingPrediction, "no prediction for example " + std::to_string(e.id));
    }
    aligned.push_back(it->second);
  }
  return aligned;
}

template <class Judge>
MetricsReport evaluate(std::string metric, std::span<const Example> examples,
                       std::span<const Prediction> predictions, const EvalOptions& options,
                       Judge&& judge) {
  const auto aligned = align(examples, predictions);
  std::vector<std::optional<ExampleOutcome>> outcomes(examples.size());
  parallel_for(
      examples.size(), options.concurrency,
      [&](std::size_t i) {
        const Example& e = examples[i];
        outcomes[i] = ExampleOutcome{e.id, e.db_id, judge(e, aligned[i]->sql), hardness_or_extra(e)};
      },
      options.stop);

  MetricsReport report;
  report.metric = std::move(metric);
  for (auto& outcome : outcomes) {
    if (!outcome) {
      report.complete = false;
      continue;
    }
    if (outcome->verdict.kind == VerdictKind::GoldError) {
      logger()->warn("gold query for example {} failed: {}", outcome->example_id,
                     outcome->verdict.message);
      report.gold_errors.push_back(std::move(*outcome));
    } else {
      report.per_example.push_back(std::move(*outcome));
    }
  }
  auto by_id = [](const ExampleOutcome& a, const ExampleOutcome& b) {
    return a.example_id < b.example_id;
  };
  std::sort(report.per_example.begin(), report.per_example.end(), by_id);
  std::sort(report.gold_errors.begin(), report.gold_errors.end(), by_id);
  for (const auto& o : report.per_example) {
    auto& bucket = report.by_hardness[static_cast<std::size_t>(o.hardness)];
    ++bucket.count;
    bucket.correct += o.verdict.is_match() ? 1 : 0;
  }
  return report;
}

}  // namespace

MetricsReport ex_accuracy(std::span<const Example> examples,
                          std::span<const Prediction> predictions,
                          const std::filesystem::path& db_root, const EvalOptions& options) {
  std::map<std::string, std::filesystem::path> databases;
  for (const auto& e : examples) {
    if (databases.contains(e.db_id)) continue;
    auto path = database_path(db_root, e.db_id);
    if (!std::filesystem::is_regular_file(path)) {
      throw Error(ErrorCode::MissingDatabase, "no database for db_id " + e.db_id + " at " +
                                                  path.string());
    }
    databases.emplace(e.db_id, std::move(path));
  }
  return evaluate("ex", examples, predictions, options,
                  [&](const Example& e, const std::string& sql) {
                    return results_match(databases.at(e.db_id), sql, e.gold_sql, options.match);
                  });
}

MetricsReport ts_accuracy(std::span<const Example> examples,
                          std::span<const Prediction> predictions,
                          const std::map<std::string, TestSuite>& suites,
                          const EvalOptions& options) {
  for (const auto& e : examples) {
    auto it = suites.find(e.db_id);
    if (it == suites.end() || it->second.variants.empty()) {
      throw Error(ErrorCode::MissingDatabase, "no test suite for db_id " + e.db_id);
    }
  }
  return evaluate("ts", examples, predictions, options,
                  [&](const Example& e, const std::string& sql) {
                    const auto& variants = suites.at(e.db_id).variants;
                    MatchVerdict verdict =
                        results_match(variants.front(), sql, e.gold_sql, options.match);
                    for (std::size_t v = 1; v < variants.size() && verdict.is_match(); ++v) {
                      MatchVerdict next = results_match(variants[v], sql, e.gold_sql, options.match);
                      if (next.kind == VerdictKind::GoldError) continue;
                      verdict = std::move(next);
                    }
                    return verdict;
                  });
}

std::string report_by_hardness(const MetricsReport& report) {
  static constexpr std::array<Hardness, 4> kLevels = {Hardness::Easy, Hardness::Medium,
                                                      Hardness::Hard, Hardness::ExtraHard};
  auto line = [](std::string_view label, const std::string& count, const std::string& accuracy) {
    std::string out(label);
    out.resize(8, ' ');
    out.append(8 - std::min<std::size_t>(8, count.size()), ' ');
    out += count;
    out.append(10 - std::min<std::size_t>(10, accuracy.size()), ' ');
    out += accuracy;
    return out + '\n';
  };
  std::string out = line("level", "count", report.metric == "ts" ? "ts (%)" : "ex (%)");
  for (Hardness level : kLevels) {
    const auto& bucket = report.by_hardness[static_cast<std::size_t>(level)];
    out += line(to_string(level), std::to_string(bucket.count),
                format_percent(bucket.correct, bucket.count));
  }
  out += line("all", std::to_string(report.total()),
              format_percent(report.correct(), report.total()));
  if (!report.gold_errors.empty()) {
    out += "excluded (gold error): " + std::to_string(report.gold_errors.size()) + '\n';
  }
  return out;
}

namespace {

nlohmann::json outcome_json(const ExampleOutcome& o) {
  nlohmann::json j = {{"example_id", o.example_id},
                      {"db_id", o.db_id},
                      {"verdict", to_string(o.verdict.kind)},
                      {"hardness", to_string(o.hardness)}};
  if (o.verdict.failure) j["failure"] = to_string(*o.verdict.failure);
  if (!o.verdict.message.empty()) j["message"] = o.verdict.message;
  return j;
}

}  // namespace

nlohmann::json to_json(const MetricsReport& report) {
  nlohmann::json by_hardness = nlohmann::json::object();
  for (std::size_t i = 0; i < report.by_hardness.size(); ++i) {
    const auto& bucket = report.by_hardness[i];
    by_hardness[std::string(to_string(static_cast<Hardness>(i)))] = {
        {"count", bucket.count},
        {"correct", bucket.correct},
        {"accuracy", format_percent(bucket.correct, bucket.count)}};
  }
  nlohmann::json per_example = nlohmann::json::array();
  for (const auto& o : report.per_example) per_example.push_back(outcome_json(o));
  nlohmann::json gold_errors = nlohmann::json::array();
  for (const auto& o : report.gold_errors) gold_errors.push_back(outcome_json(o));
  return {{"metric", report.metric},
          {"total", report.total()},
          {"correct", report.correct()},
          {"overall_accuracy", report.overall_accuracy()},
          {"overall_accuracy_display", format_percent(report.correct(), report.total())},
          {"by_hardness", by_hardness},
          {"per_example", per_example},
          {"gold_errors", gold_errors},
          {"complete", report.complete}};
}

}  // namespace senseforge
