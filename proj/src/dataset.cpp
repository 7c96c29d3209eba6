// Copyright 2026 The senseforge Authors
// SPDX-License-Identifier: Apache-2.0
#include "senseforge/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "senseforge/error.hpp"

namespace senseforge {

using nlohmann::json;

std::string_view to_string(HardnessTarget level) noexcept {
  switch (level) {
    case HardnessTarget::Easy: return "easy";
    case HardnessTarget::Medium: return "medium";
    case HardnessTarget::Hard: return "hard";
  }
  return "easy";
}

HardnessTarget parse_hardness_target(std::string_view text) {
  const std::string lower = to_lower(text);
  if (lower == "easy") return HardnessTarget::Easy;
  if (lower == "medium") return HardnessTarget::Medium;
  if (lower == "hard") return HardnessTarget::Hard;
  throw Error(ErrorCode::InvalidArgument, "unknown hardness level: " + std::string(text));
}

std::string_view to_string(ChosenSource source) noexcept {
  return source == ChosenSource::Gold ? "gold" : "weak_model";
}

namespace {

std::string where(std::size_t line) { return "line " + std::to_string(line); }

const json& require(const json& record, const char* field, std::size_t line) {
  auto it = record.find(field);
  if (it == record.end() || it->is_null()) {
    throw Error(ErrorCode::MissingField,
                std::string("missing field \"") + field + "\" at " + where(line));
  }
  return *it;
}

std::string require_string(const json& record, const char* field, std::size_t line,
                           bool allow_empty = false) {
  const json& value = require(record, field, line);
  if (!value.is_string()) {
    throw Error(ErrorCode::InvalidRecord,
                std::string("field \"") + field + "\" must be a string at " + where(line));
  }
  auto text = value.get<std::string>();
  if (!allow_empty && text.empty()) {
    throw Error(ErrorCode::InvalidRecord,
                std::string("field \"") + field + "\" must be non-empty at " + where(line));
  }
  return text;
}

std::int64_t require_int(const json& record, const char* field, std::size_t line) {
  const json& value = require(record, field, line);
  if (!value.is_number_integer()) {
    throw Error(ErrorCode::InvalidRecord,
                std::string("field \"") + field + "\" must be an integer at " + where(line));
  }
  return value.get<std::int64_t>();
}

template <class Parse>
auto read_jsonl(const std::filesystem::path& path, Parse parse) {
  using T = decltype(parse(json{}, std::size_t{}));
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::FileNotFound, "cannot open " + path.string());
  std::vector<T> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    json record;
    try {
      record = json::parse(line);
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::ParseError, path.string() + ": " + where(line_no) + ": " + e.what());
    }
    if (!record.is_object()) {
      throw Error(ErrorCode::ParseError,
                  path.string() + ": " + where(line_no) + ": record is not a JSON object");
    }
    out.push_back(parse(record, line_no));
  }
  if (in.bad()) throw Error(ErrorCode::IoError, "read failed: " + path.string());
  return out;
}

template <class T, class ToJson>
void write_jsonl(std::span<const T> items, const std::filesystem::path& path, ToJson encode) {
  std::string text;
  for (const auto& item : items) {
    text += dump_line(encode(item));
    text += '\n';
  }
  write_text_file(path, text);
}

template <class T, class Key>
void check_unique(const std::vector<T>& items, Key key, const std::filesystem::path& path) {
  std::set<std::int64_t> seen;
  for (const auto& item : items) {
    if (!seen.insert(key(item)).second) {
      throw Error(ErrorCode::DuplicateId,
                  path.string() + ": duplicate id " + std::to_string(key(item)));
    }
  }
}

}  // namespace

json to_json(const Example& example) {
  json j = {{"id", example.id},
            {"db_id", example.db_id},
            {"question", example.question},
            {"query", example.gold_sql}};
  if (example.knowledge) j["evidence"] = *example.knowledge;
  return j;
}

json to_json(const Prediction& prediction) {
  return {{"example_id", prediction.example_id}, {"sql", prediction.sql}};
}

json to_json(const Candidate& candidate) {
  return {{"example_id", candidate.example_id},
          {"sql", candidate.sql},
          {"source_model", candidate.source_model}};
}

json to_json(const SynthDataPoint& point) {
  return {{"domain", point.domain},
          {"schema_ddl", point.ddl},
          {"question", point.question},
          {"answer", point.answer_sql},
          {"level", to_string(point.level)}};
}

json to_json(const PreferencePair& pair) {
  json meta = pair.meta_extra.is_object() ? pair.meta_extra : json::object();
  meta["example_id"] = pair.example_id;
  meta["chosen_source"] = to_string(pair.chosen_source);
  return {{"prompt", pair.prompt},
          {"chosen", pair.chosen},
          {"rejected", pair.rejected},
          {"meta", std::move(meta)}};
}

std::string dump_line(const json& record) {
  return record.dump(-1, ' ', false, json::error_handler_t::replace);
}

std::vector<Example> read_examples(const std::filesystem::path& path) {
  auto examples = read_jsonl(path, [](const json& r, std::size_t line) {
    Example e;
    e.id = r.contains("id") && !r["id"].is_null() ? require_int(r, "id", line)
                                                   : static_cast<std::int64_t>(line - 1);
    e.db_id = require_string(r, "db_id", line);
    e.question = require_string(r, "question", line);
    e.gold_sql = require_string(r, "query", line);
    if (r.contains("evidence") && !r["evidence"].is_null()) {
      e.knowledge = require_string(r, "evidence", line, /*allow_empty=*/true);
      if (e.knowledge->empty()) e.knowledge.reset();
    }
    return e;
  });
  check_unique(examples, [](const Example& e) { return e.id; }, path);
  return examples;
}

std::vector<Prediction> read_predictions(const std::filesystem::path& path) {
  auto predictions = read_jsonl(path, [](const json& r, std::size_t line) {
    return Prediction{require_int(r, "example_id", line),
                      require_string(r, "sql", line, /*allow_empty=*/true)};
  });
  check_unique(predictions, [](const Prediction& p) { return p.example_id; }, path);
  return predictions;
}

std::vector<Candidate> read_candidates(const std::filesystem::path& path) {
  return read_jsonl(path, [](const json& r, std::size_t line) {
    Candidate c{require_int(r, "example_id", line), require_string(r, "sql", line), "unknown"};
    if (r.contains("source_model")) c.source_model = require_string(r, "source_model", line);
    return c;
  });
}

std::vector<SynthDataPoint> read_synth_points(const std::filesystem::path& path) {
  return read_jsonl(path, [](const json& r, std::size_t line) {
    SynthDataPoint p;
    p.domain = require_string(r, "domain", line);
    p.ddl = require_string(r, "schema_ddl", line);
    p.question = require_string(r, "question", line);
    p.answer_sql = require_string(r, "answer", line);
    try {
      p.level = parse_hardness_target(require_string(r, "level", line));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::InvalidArgument) throw;
      throw Error(ErrorCode::InvalidRecord, std::string(e.what()) + " at " + where(line));
    }
    return p;
  });
}

std::vector<PreferencePair> read_preference_pairs(const std::filesystem::path& path) {
  return read_jsonl(path, [](const json& r, std::size_t line) {
    PreferencePair p;
    p.prompt = require_string(r, "prompt", line, /*allow_empty=*/true);
    p.chosen = require_string(r, "chosen", line);
    p.rejected = require_string(r, "rejected", line);
    const json& meta = require(r, "meta", line);
    if (!meta.is_object()) {
      throw Error(ErrorCode::InvalidRecord, "field \"meta\" must be an object at " + where(line));
    }
    p.example_id = require_int(meta, "example_id", line);
    const std::string source = require_string(meta, "chosen_source", line);
    if (source == "gold") {
      p.chosen_source = ChosenSource::Gold;
    } else if (source == "weak_model") {
      p.chosen_source = ChosenSource::WeakModel;
    } else {
      throw Error(ErrorCode::InvalidRecord, "unknown chosen_source at " + where(line));
    }
    p.meta_extra = meta;
    p.meta_extra.erase("example_id");
    p.meta_extra.erase("chosen_source");
    return p;
  });
}

void write_examples(std::span<const Example> examples, const std::filesystem::path& path) {
  write_jsonl(examples, path, [](const Example& e) { return to_json(e); });
}

void write_predictions(std::span<const Prediction> predictions, const std::filesystem::path& path) {
  write_jsonl(predictions, path, [](const Prediction& p) { return to_json(p); });
}

void write_candidates(std::span<const Candidate> candidates, const std::filesystem::path& path) {
  write_jsonl(candidates, path, [](const Candidate& c) { return to_json(c); });
}

void write_synth_points(std::span<const SynthDataPoint> points, const std::filesystem::path& path) {
  write_jsonl(points, path, [](const SynthDataPoint& p) { return to_json(p); });
}

void write_preference_pairs(std::span<const PreferencePair> pairs,
                            const std::filesystem::path& path) {
  write_jsonl(pairs, path, [](const PreferencePair& p) { return to_json(p); });
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot open for writing: " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.close();
  if (!out) throw Error(ErrorCode::IoError, "write failed: " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileNotFound, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void StrongDataset::add_examples(std::span<const Example> examples,
                                 std::span<const Schema> example_schemas) {
  for (const auto& schema : example_schemas) {
    const bool known = std::any_of(schemas.begin(), schemas.end(),
                                   [&](const Schema& s) { return s.db_id == schema.db_id; });
    if (!known) schemas.push_back(schema);
  }
  for (const auto& e : examples) {
    entries.push_back(StrongEntry{"human:" + std::to_string(e.id), e.db_id, e.db_id, e.question,
                                  e.gold_sql, Provenance::Human});
  }
}

void StrongDataset::add_synth_points(std::span<const SynthDataPoint> points) {
  for (const auto& p : points) {
    const std::string index = std::to_string(entries.size());
    const std::string db_id = "synth-" + index;
    Schema schema;
    try {
      schema = schema_from_ddl(p.ddl, db_id);
    } catch (const Error&) {
      // Unparseable DDL still counts as its own database, just unmergeable.
      schema.db_id = db_id;
    }
    schemas.push_back(std::move(schema));
    entries.push_back(StrongEntry{"synth:" + index, db_id, p.domain, p.question, p.answer_sql,
                                  Provenance::Synthetic});
  }
}

}  // namespace senseforge
