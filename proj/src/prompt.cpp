// Copyright 2026 The senseforge Authors
// SPDX-License-Identifier: Apache-2.0
#include "senseforge/prompt.hpp"

#include <sqlite3.h>

#include <algorithm>
#include <cctype>
#include <numeric>

#include "sqlite_util.hpp"

namespace senseforge {
namespace {

bool is_plain_identifier(std::string_view name) {
  if (name.empty()) return false;
  auto alpha = [](unsigned char c) { return std::isalpha(c) || c == '_'; };
  if (!alpha(static_cast<unsigned char>(name.front()))) return false;
  const bool simple = std::all_of(name.begin(), name.end(), [&](unsigned char c) {
    return alpha(c) || std::isdigit(c);
  });
  return simple && sqlite3_keyword_check(name.data(), static_cast<int>(name.size())) == 0;
}

// Constraint lines and the SELECT in the sample header keep names bare, as
// in the reference template, unless a bare name would not parse.
std::string bare_or_quoted(std::string_view name) {
  return is_plain_identifier(name) ? std::string(name) : detail::quote_identifier(name);
}

std::size_t display_width(std::string_view text) {
  return static_cast<std::size_t>(std::count_if(
      text.begin(), text.end(), [](unsigned char c) { return (c & 0xC0) != 0x80; }));
}

std::string join_names(const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out += ", ";
    out += bare_or_quoted(names[i]);
  }
  return out;
}

constexpr std::string_view kSynthesisTemplate =
    "Your task is to generate one additional data point at the {the_level} difficulty level, in "
    "alignment with the format of the two provided data points.\n"
    "1. Domain: Avoid domains that have been over-represented in our repository. Do not opt for "
    "themes like Education/Universities, Healthcare/Medical, Travel/Airlines, or "
    "Entertainment/Media.\n"
    "2. Schema: Post your domain selection, craft an associated set of tables. These should "
    "feature logical columns, appropriate data types, and clear relationships.\n"
    "3. Question Difficulty - {the_level}:\n"
    "    - Easy: Simple queries focusing on a single table.\n"
    "    - Medium: More comprehensive queries involving joins or aggregate functions across "
    "multiple tables.\n"
    "    - Hard: Complex queries demanding deep comprehension, with answers that use multiple "
    "advanced features.\n"
    "4. Answer: Formulate the SQL query that accurately addresses your question and is "
    "syntactically correct.\n"
    "Additional Guidelines:\n"
    "    - Venture into diverse topics or areas for your questions.\n"
    "    - Ensure the SQL engages multiple tables and utilizes advanced constructs, especially for "
    "higher difficulty levels.\n"
    "Ensure your submission only contains the Domain, Schema, Question, and Answer. Refrain from "
    "adding unrelated content or remarks.\n";

std::string trim_trailing_newlines(std::string text) {
  while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.pop_back();
  return text;
}

}  // namespace

std::string render_create_table(const Table& table) {
  std::vector<std::string> lines;
  for (const auto& column : table.columns) {
    lines.push_back("  " + detail::quote_identifier(column.name) + " " +
                    std::string(to_string(column.type)));
  }
  if (!table.primary_key.empty()) {
    lines.push_back("  PRIMARY KEY(" + join_names(table.primary_key) + ")");
  }
  for (const auto& fk : table.foreign_keys) {
    lines.push_back("  FOREIGN KEY(" + bare_or_quoted(fk.column) + ") REFERENCES " +
                    bare_or_quoted(fk.ref_table) + "(" + bare_or_quoted(fk.ref_column) + ")");
  }
  std::string out = "CREATE TABLE " + detail::quote_identifier(table.name) + " (\n";
  for (std::size_t i = 0; i < lines.size(); ++i) {
    out += lines[i];
    if (i + 1 < lines.size()) out += ',';
    out += '\n';
  }
  out += ");\n";
  return out;
}

std::string render_schema_ddl(const Schema& schema) {
  std::string out;
  for (const auto& table : schema.tables) out += render_create_table(table);
  return out;
}

std::string render_row_sample(const RowSample& sample, std::size_t k) {
  const std::size_t ncol = sample.header.size();
  std::vector<std::size_t> widths(ncol, 0);
  for (std::size_t c = 0; c < ncol; ++c) {
    widths[c] = display_width(sample.header[c]);
    for (const auto& row : sample.rows) widths[c] = std::max(widths[c], display_width(row[c]));
  }
  auto render_line = [&](const std::vector<std::string>& cells) {
    std::string line;
    for (std::size_t c = 0; c < ncol; ++c) {
      line += cells[c];
      if (c + 1 < ncol) line.append(widths[c] + 3 - display_width(cells[c]), ' ');
    }
    return line + '\n';
  };

  std::string out = "/* " + std::to_string(k) + " example rows:\n";
  out += "SELECT * FROM " + bare_or_quoted(sample.table_name) + " LIMIT " + std::to_string(k) +
         ";\n";
  out += render_line(sample.header);
  for (const auto& row : sample.rows) out += render_line(row);
  out += "*/\n";
  return out;
}

PromptText build_inference_prompt(const Schema& schema, std::span<const RowSample> samples,
                                  std::string_view question,
                                  const std::optional<std::string>& knowledge,
                                  std::size_t sample_rows) {
  for (const auto& sample : samples) {
    if (schema.find_table(sample.table_name) == nullptr) {
      throw Error(ErrorCode::UnknownTableInSample,
                  "row sample names unknown table: " + sample.table_name);
    }
  }
  std::string text;
  for (const auto& table : schema.tables) {
    text += render_create_table(table);
    for (const auto& sample : samples) {
      if (iequals(sample.table_name, table.name)) text += render_row_sample(sample, sample_rows);
    }
  }
  if (knowledge) {
    text += "-- External Knowledge: " + *knowledge + "\n";
    text += kInstructionWithKnowledge;
  } else {
    text += kInstruction;
  }
  text += "\nQuestion: ";
  text += question;
  text += '\n';
  return PromptText{std::move(text), PromptKind::Inference};
}

PromptText build_inference_prompt(const std::filesystem::path& db_file, std::string_view question,
                                  const std::optional<std::string>& knowledge,
                                  std::size_t rows) {
  const Schema schema = introspect_schema(db_file);
  std::vector<RowSample> samples;
  samples.reserve(schema.tables.size());
  for (const auto& table : schema.tables) {
    samples.push_back(sample_rows(db_file, table.name, rows));
  }
  return build_inference_prompt(schema, samples, question, knowledge, rows);
}

std::string render_demonstration(const SynthDataPoint& point) {
  std::string out;
  out += "Domain: " + point.domain + "\n";
  out += "Schema:\n" + trim_trailing_newlines(point.ddl) + "\n";
  out += "Question: " + point.question + "\n";
  out += "Answer: " + trim_trailing_newlines(point.answer_sql) + "\n";
  return out;
}

SynthDataPoint to_demonstration(const Example& example, const Schema& schema,
                                HardnessTarget level) {
  return SynthDataPoint{example.db_id, render_schema_ddl(schema), example.question,
                        example.gold_sql, level};
}

PromptText build_synthesis_prompt(HardnessTarget level, std::span<const SynthDataPoint> few_shot) {
  if (few_shot.size() != 2) {
    throw Error(ErrorCode::WrongFewShotCount,
                "synthesis prompt needs exactly 2 demonstrations, got " +
                    std::to_string(few_shot.size()));
  }
  std::string text(kSynthesisTemplate);
  const std::string_view placeholder = "{the_level}";
  const std::string_view name = to_string(level);
  for (auto pos = text.find(placeholder); pos != std::string::npos;
       pos = text.find(placeholder, pos + name.size())) {
    text.replace(pos, placeholder.size(), name);
  }
  for (const auto& demo : few_shot) {
    text += '\n';
    text += render_demonstration(demo);
  }
  return PromptText{std::move(text), PromptKind::Synthesis};
}

std::vector<std::size_t> sample_indices(std::size_t size, std::size_t n, std::uint64_t seed) {
  if (n > size) {
    throw Error(ErrorCode::NotEnoughExamples, "cannot draw " + std::to_string(n) + " of " +
                                                  std::to_string(size) + " items");
  }
  std::vector<std::size_t> pool(size);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  // Partial Fisher-Yates; modulo bias is below 2^-40 for any realistic size.
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng() % (size - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(n);
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace senseforge
