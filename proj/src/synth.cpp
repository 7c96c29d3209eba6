// Copyright 2026 The senseforge Authors
// SPDX-License-Identifier: Apache-2.0
#include "senseforge/synth.hpp"

#include <sqlite3.h>

#include <algorithm>
#include <array>
#include <cstdio>
#include <cmath>
#include <map>
#include <regex>
#include <set>
#include <sstream>
#include <variant>

#include "executor_internal.hpp"
#include "senseforge/error.hpp"
#include "senseforge/hardness.hpp"
#include "senseforge/logging.hpp"
#include "senseforge/parallel.hpp"
#include "sqlite_util.hpp"

namespace senseforge {

std::string request_generation(const Endpoint& endpoint, const GenerationRequest& request,
                               std::stop_token stop) {
  if (request.prompt.kind != PromptKind::Synthesis) {
    throw Error(ErrorCode::InvalidArgument, "generation request needs a synthesis prompt");
  }
  return complete(endpoint, request.prompt.text,
                  CompletionParams{request.max_tokens, request.temperature, request.seed},
                  std::move(stop));
}

namespace {

constexpr std::array<std::string_view, 4> kSections = {"Domain", "Schema", "Question", "Answer"};

std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string line(text.substr(start, end - start));
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    start = end + 1;
  }
  return lines;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

bool blank(std::string_view s) { return trim(s).empty(); }
bool is_fence(std::string_view s) { return trim(s).starts_with("```"); }

std::string join(std::span<const std::string> lines, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (i) out += sep;
    out += lines[i];
  }
  return out;
}

// Index into kSections and the text after the colon, for a header line.
std::optional<std::pair<std::size_t, std::string>> match_header(const std::string& line) {
  static const std::regex kHeader(
      R"(^\s*(?:#+\s*|>\s*|[-*+]\s+|\d+[.)]\s*)*(?:\*\*|__)?\s*(domain|schema|question|answer)\s*(?:\*\*|__)?\s*:\s*(?:\*\*|__)?\s?(.*)$)",
      std::regex::icase);
  std::smatch m;
  if (!std::regex_match(line, m, kHeader)) return std::nullopt;
  const std::string label = to_lower(m[1].str());
  for (std::size_t i = 0; i < kSections.size(); ++i) {
    if (label == to_lower(kSections[i])) return std::pair{i, m[2].str()};
  }
  return std::nullopt;
}

void drop_blank_edges(std::vector<std::string>& lines) {
  while (!lines.empty() && blank(lines.front())) lines.erase(lines.begin());
  while (!lines.empty() && blank(lines.back())) lines.pop_back();
}

std::string inline_text(std::vector<std::string> lines) {
  std::vector<std::string> parts;
  for (const auto& l : lines) {
    if (!blank(l)) parts.emplace_back(trim(l));
  }
  std::string text = join(parts, " ");
  // "**Domain:** Retail**" style leftovers.
  while (text.ends_with("**")) text.resize(text.size() - 2);
  return std::string(trim(text));
}

// Lines between an opening fence and its closing fence, and whatever
// follows the closing fence. An unclosed fence runs to the end.
std::pair<std::vector<std::string>, std::vector<std::string>> unfence(
    const std::vector<std::string>& lines) {
  auto close = std::find_if(lines.begin() + 1, lines.end(),
                            [](const std::string& l) { return is_fence(l); });
  std::vector<std::string> inside(lines.begin() + 1, close);
  std::vector<std::string> after(close == lines.end() ? lines.end() : close + 1, lines.end());
  if (close == lines.end()) {
    // A closing fence glued to the last non-blank line: "SELECT 1;```".
    while (!inside.empty() && blank(inside.back())) inside.pop_back();
    if (!inside.empty()) {
      auto& last = inside.back();
      const auto pos = last.rfind("```");
      if (pos != std::string::npos && blank(std::string_view(last).substr(pos + 3))) {
        last.erase(pos);
        if (blank(last)) inside.pop_back();
      }
    }
  }
  return {std::move(inside), std::move(after)};
}

std::string schema_text(std::vector<std::string> lines) {
  drop_blank_edges(lines);
  if (!lines.empty() && is_fence(lines.front())) return join(unfence(lines).first, "\n");
  return join(lines, "\n");
}

std::string answer_text(std::vector<std::string> lines) {
  while (!lines.empty() && blank(lines.front())) lines.erase(lines.begin());
  if (lines.empty()) return {};
  std::vector<std::string> body, rest;
  if (is_fence(lines.front())) {
    std::tie(body, rest) = unfence(lines);
  } else {
    auto end = std::find_if(lines.begin(), lines.end(), [](const std::string& l) { return blank(l); });
    body.assign(lines.begin(), end);
    rest.assign(end, lines.end());
    for (auto& l : body) {
      while (!l.empty() && (l.back() == ' ' || l.back() == '\t')) l.pop_back();
    }
  }
  if (std::any_of(rest.begin(), rest.end(), [](const std::string& l) { return !blank(l); })) {
    throw Error(ErrorCode::TrailingContent, "unrelated text after the Answer section");
  }
  std::string sql = join(body, "\n");
  if (sql.size() >= 2 && sql.front() == '`' && sql.back() == '`' &&
      sql.find('`', 1) == sql.size() - 1) {
    sql = sql.substr(1, sql.size() - 2);
  }
  return sql;
}

}  // namespace

SynthDataPoint parse_datapoint(std::string_view raw, HardnessTarget level) {
  std::array<std::optional<std::vector<std::string>>, 4> sections;
  std::optional<std::size_t> current;
  for (const auto& line : split_lines(raw)) {
    if (auto header = match_header(line)) {
      if (sections[3] || sections[header->first]) {
        throw Error(ErrorCode::TrailingContent,
                    "unexpected " + std::string(kSections[header->first]) + " header");
      }
      current = header->first;
      sections[*current].emplace();
      if (!blank(header->second)) sections[*current]->push_back(header->second);
      continue;
    }
    if (current) sections[*current]->push_back(line);
  }
  std::array<std::string, 4> text;
  for (std::size_t i = 0; i < 4; ++i) {
    if (sections[i]) {
      switch (i) {
        case 1: text[i] = schema_text(*sections[i]); break;
        case 3: text[i] = answer_text(*sections[i]); break;
        default: text[i] = inline_text(*sections[i]); break;
      }
    }
    if (blank(text[i])) {
      throw Error(ErrorCode::MissingSection, std::string(kSections[i]));
    }
  }
  return SynthDataPoint{std::move(text[0]), std::move(text[1]), std::move(text[2]),
                        std::move(text[3]), level};
}

std::string_view to_string(ValidationStatus status) noexcept {
  switch (status) {
    case ValidationStatus::Valid: return "Valid";
    case ValidationStatus::InvalidDdl: return "InvalidDdl";
    case ValidationStatus::InvalidSql: return "InvalidSql";
  }
  return "InvalidSql";
}

namespace {

struct DdlDeadline {
  std::chrono::steady_clock::time_point at;
};

int ddl_progress(void* arg) {
  return std::chrono::steady_clock::now() >= static_cast<DdlDeadline*>(arg)->at ? 1 : 0;
}

std::int64_t total_rows(sqlite3* db) {
  auto tables = detail::prepare(
      db, "SELECT name FROM sqlite_master WHERE type = 'table' AND name NOT LIKE 'sqlite_%'");
  std::int64_t total = 0;
  while (sqlite3_step(tables.get()) == SQLITE_ROW) {
    auto count = detail::prepare(
        db, "SELECT count(*) FROM " + detail::quote_identifier(detail::column_text(tables.get(), 0)));
    if (sqlite3_step(count.get()) == SQLITE_ROW) total += sqlite3_column_int64(count.get(), 0);
  }
  return total;
}

}  // namespace

ValidationVerdict validate_datapoint(const SynthDataPoint& point, std::chrono::milliseconds timeout) {
  ValidationVerdict verdict;
  auto db = detail::open_memory_database();
  // The DDL comes from a model: keep it inside this scratch database.
  sqlite3_limit(db.get(), SQLITE_LIMIT_ATTACHED, 0);
  DdlDeadline deadline{std::chrono::steady_clock::now() + timeout};
  sqlite3_progress_handler(db.get(), 1000, ddl_progress, &deadline);
  char* message = nullptr;
  const int rc = sqlite3_exec(db.get(), point.ddl.c_str(), nullptr, nullptr, &message);
  sqlite3_progress_handler(db.get(), 0, nullptr, nullptr);
  if (rc != SQLITE_OK) {
    verdict.status = ValidationStatus::InvalidDdl;
    verdict.message = message ? message : sqlite3_errstr(rc);
    sqlite3_free(message);
    return verdict;
  }
  const ExecutionResult result = detail::execute_on(db.get(), point.answer_sql, timeout);
  if (const auto* rows = std::get_if<Rows>(&result)) {
    verdict.empty_result = rows->rows.empty() || total_rows(db.get()) == 0;
  } else if (const auto* err = std::get_if<ExecError>(&result)) {
    verdict.status = ValidationStatus::InvalidSql;
    verdict.message = err->message;
  } else {
    verdict.status = ValidationStatus::InvalidSql;
    verdict.message = "execution timed out";
  }
  return verdict;
}

double DatasetStats::examples_per_db() const noexcept {
  return n_databases == 0 ? std::nan("")
                          : static_cast<double>(n_examples) / static_cast<double>(n_databases);
}

DatasetStats dataset_stats(const StrongDataset& dataset, double merge_threshold) {
  DatasetStats stats;
  stats.n_examples = dataset.entries.size();

  std::set<std::string> db_ids;
  for (const auto& e : dataset.entries) db_ids.insert(e.db_id);
  std::vector<Schema> mergeable;
  std::size_t singletons = 0;
  for (const auto& id : db_ids) {
    auto it = std::find_if(dataset.schemas.begin(), dataset.schemas.end(),
                           [&](const Schema& s) { return s.db_id == id; });
    if (it == dataset.schemas.end() || it->tables.empty()) {
      ++singletons;
    } else {
      mergeable.push_back(*it);
    }
  }
  stats.n_databases = singletons + merge_similar_databases(mergeable, merge_threshold).size();

  std::map<std::string, std::size_t> domains;
  double tokens = 0, joins = 0;
  for (const auto& e : dataset.entries) {
    std::istringstream words(e.question + " " + e.sql);
    std::string word;
    while (words >> word) tokens += 1;
    try {
      joins += count_joins(e.sql);
    } catch (const Error&) {
      ++stats.unparsable_sql;
    }
    ++domains[e.domain];
  }
  if (stats.n_examples > 0) {
    stats.avg_tokens = tokens / static_cast<double>(stats.n_examples);
    stats.avg_joins = joins / static_cast<double>(stats.n_examples);
  }
  stats.domain_density.assign(domains.begin(), domains.end());
  std::stable_sort(stats.domain_density.begin(), stats.domain_density.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  return stats;
}

std::string format_ratio(double value) {
  if (std::isnan(value)) return "-";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1f", value);
  return buf;
}

std::string format_stats(const DatasetStats& stats) {
  std::string out;
  out += "examples        " + std::to_string(stats.n_examples) + "\n";
  out += "databases       " + std::to_string(stats.n_databases) + "\n";
  out += "examples/db     " + format_ratio(stats.examples_per_db()) + "\n";
  out += "avg tokens      " + format_ratio(stats.n_examples ? stats.avg_tokens : std::nan("")) + "\n";
  out += "avg joins       " + format_ratio(stats.n_examples ? stats.avg_joins : std::nan("")) + "\n";
  if (stats.unparsable_sql) {
    out += "unparsable sql  " + std::to_string(stats.unparsable_sql) + "\n";
  }
  out += "domains\n";
  for (const auto& [domain, count] : stats.domain_density) {
    out += "  " + std::to_string(count) + "\t" + domain + "\n";
  }
  return out;
}

nlohmann::json to_json(const DatasetStats& stats) {
  nlohmann::json density = nlohmann::json::array();
  for (const auto& [domain, count] : stats.domain_density) {
    density.push_back({{"domain", domain}, {"count", count}});
  }
  const double per_db = stats.examples_per_db();
  return {{"n_examples", stats.n_examples},
          {"n_databases", stats.n_databases},
          {"examples_per_db", std::isnan(per_db) ? nlohmann::json(nullptr) : nlohmann::json(per_db)},
          {"examples_per_db_display", format_ratio(per_db)},
          {"avg_tokens", stats.avg_tokens},
          {"avg_joins", stats.avg_joins},
          {"token_definition", "whitespace tokens of question + \" \" + sql"},
          {"unparsable_sql", stats.unparsable_sql},
          {"domain_density", density}};
}

HardnessTarget scheduled_level(std::string_view level, std::size_t index) {
  if (iequals(level, "mix")) {
    static constexpr std::array<HardnessTarget, 3> kCycle = {
        HardnessTarget::Easy, HardnessTarget::Medium, HardnessTarget::Hard};
    return kCycle[index % kCycle.size()];
  }
  return parse_hardness_target(level);
}

SynthesisResult synthesize_batch(const Endpoint& endpoint,
                                 std::span<const SynthDataPoint> demonstrations,
                                 const SynthesisOptions& options, std::stop_token stop) {
  scheduled_level(options.level, 0);  // reject a bad level before any request
  if (demonstrations.size() < 2) {
    throw Error(ErrorCode::NotEnoughExamples, "synthesis needs at least 2 demonstrations");
  }
  using Outcome = std::variant<std::monostate, SynthesizedPoint, RejectedPoint>;
  std::vector<Outcome> outcomes(options.n);

  parallel_for(
      options.n, std::max(1u, options.concurrency),
      [&](std::size_t i) {
        const HardnessTarget level = scheduled_level(options.level, i);
        const auto few_shot = draw_few_shot(demonstrations, 2, options.seed + i);
        GenerationRequest request{build_synthesis_prompt(level, few_shot), level,
                                  options.max_tokens, options.temperature, options.seed + i};
        RejectedPoint reject{i, level, {}, {}, {}};
        try {
          reject.raw = request_generation(endpoint, request, stop);
        } catch (const Error& e) {
          if (e.code() == ErrorCode::AuthError) throw;
          if (stop.stop_requested()) return;
          reject.reason = to_string(e.code());
          reject.message = e.what();
          outcomes[i] = std::move(reject);
          return;
        }
        try {
          SynthDataPoint point = parse_datapoint(reject.raw, level);
          const ValidationVerdict verdict = validate_datapoint(point, options.validation_timeout);
          if (!verdict.valid()) {
            reject.reason = to_string(verdict.status);
            reject.message = verdict.message;
            outcomes[i] = std::move(reject);
            return;
          }
          outcomes[i] = SynthesizedPoint{i, std::move(point), verdict.empty_result};
        } catch (const Error& e) {
          reject.reason = to_string(e.code());
          reject.message = e.what();
          outcomes[i] = std::move(reject);
        }
      },
      stop);

  SynthesisResult result;
  for (auto& outcome : outcomes) {
    if (auto* ok = std::get_if<SynthesizedPoint>(&outcome)) {
      result.accepted.push_back(std::move(*ok));
    } else if (auto* bad = std::get_if<RejectedPoint>(&outcome)) {
      logger()->info("datapoint {} rejected: {} {}", bad->index, bad->reason, bad->message);
      result.rejected.push_back(std::move(*bad));
    } else {
      result.complete = false;
    }
  }
  return result;
}

nlohmann::json to_json(const SynthesizedPoint& point) {
  nlohmann::json j = to_json(point.point);
  j["empty_result"] = point.empty_result;
  return j;
}

nlohmann::json to_json(const RejectedPoint& reject) {
  return {{"index", reject.index},
          {"level", to_string(reject.level)},
          {"reason", reject.reason},
          {"message", reject.message},
          {"raw", reject.raw}};
}

}  // namespace senseforge
