// Copyright 2026 The senseforge Authors
// SPDX-License-Identifier: Apache-2.0
#include "senseforge/cli.hpp"

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "senseforge/dataset.hpp"
#include "senseforge/error.hpp"
#include "senseforge/hardness.hpp"
#include "senseforge/llm.hpp"
#include "senseforge/logging.hpp"
#include "senseforge/loss.hpp"
#include "senseforge/metrics.hpp"
#include "senseforge/parallel.hpp"
#include "senseforge/preference.hpp"
#include "senseforge/prompt.hpp"
#include "senseforge/synth.hpp"
#include "senseforge/version.hpp"

namespace senseforge {
namespace {

namespace fs = std::filesystem;

// Errors that mean the invocation itself is wrong rather than the data.
bool is_config_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::FileNotFound:
    case ErrorCode::MissingDatabase:
    case ErrorCode::AuthError: return true;
    default: return false;
  }
}

struct Output {
  std::optional<fs::path> path;
  std::ostream& out;

  // Writes `text` to the --out path (suffixed when partial) or to stdout.
  void write(const std::string& text, bool complete) const {
    if (!path) {
      out << text;
      return;
    }
    fs::path target = *path;
    if (!complete) target += ".incomplete";
    write_text_file(target, text);
  }
};

std::string jsonl(const std::vector<nlohmann::json>& records) {
  std::string text;
  for (const auto& r : records) text += dump_line(r) + "\n";
  return text;
}

void require_file(const fs::path& path) {
  if (!fs::is_regular_file(path)) {
    throw Error(ErrorCode::FileNotFound, "no such file: " + path.string());
  }
}

void require_dir(const fs::path& path) {
  if (!fs::is_directory(path)) {
    throw Error(ErrorCode::FileNotFound, "no such directory: " + path.string());
  }
}

std::chrono::milliseconds millis(std::int64_t ms) {
  if (ms <= 0) throw Error(ErrorCode::InvalidArgument, "--timeout-ms must be positive");
  return std::chrono::milliseconds(ms);
}

HardnessTarget target_for(const Example& e) {
  try {
    switch (classify_hardness(e.gold_sql)) {
      case Hardness::Easy: return HardnessTarget::Easy;
      case Hardness::Medium: return HardnessTarget::Medium;
      default: return HardnessTarget::Hard;
    }
  } catch (const Error&) {
    return HardnessTarget::Hard;
  }
}

std::vector<SynthDataPoint> demonstrations_from(const std::optional<fs::path>& demos,
                                                const std::optional<fs::path>& gold,
                                                const std::optional<fs::path>& db_root) {
  if (demos) {
    require_file(*demos);
    return read_synth_points(*demos);
  }
  if (!gold || !db_root) {
    throw Error(ErrorCode::InvalidArgument, "demonstrations need --demos, or --gold with --db-root");
  }
  require_file(*gold);
  require_dir(*db_root);
  std::map<std::string, Schema> schemas;
  std::vector<SynthDataPoint> out;
  for (const auto& e : read_examples(*gold)) {
    auto it = schemas.find(e.db_id);
    if (it == schemas.end()) {
      const auto path = database_path(*db_root, e.db_id);
      if (!fs::is_regular_file(path)) {
        throw Error(ErrorCode::MissingDatabase, "no database for db_id " + e.db_id);
      }
      it = schemas.emplace(e.db_id, introspect_schema(path)).first;
    }
    out.push_back(to_demonstration(e, it->second, target_for(e)));
  }
  return out;
}

// ---- render-prompt --------------------------------------------------------

struct RenderArgs {
  std::optional<fs::path> db, db_root, demos, gold, out;
  std::string db_id, question, level = "easy";
  std::optional<std::string> knowledge;
  std::size_t rows = kDefaultSampleRows;
  bool synthesis = false;
  std::uint64_t seed = 0;
};

int run_render(const RenderArgs& a, std::ostream& out) {
  std::string text;
  if (a.synthesis) {
    const auto pool = demonstrations_from(a.demos, a.gold, a.db_root);
    const auto few_shot = draw_few_shot<SynthDataPoint>(pool, 2, a.seed);
    text = build_synthesis_prompt(parse_hardness_target(a.level), few_shot).text;
  } else {
    fs::path db_file;
    if (a.db) {
      db_file = *a.db;
    } else if (a.db_root && !a.db_id.empty()) {
      db_file = database_path(*a.db_root, a.db_id);
    } else {
      throw Error(ErrorCode::InvalidArgument, "need --db, or --db-root with --db-id");
    }
    require_file(db_file);
    if (a.question.empty()) throw Error(ErrorCode::InvalidArgument, "--question is required");
    text = build_inference_prompt(db_file, a.question, a.knowledge, a.rows).text;
  }
  Output{a.out, out}.write(text, true);
  return kExitOk;
}

// ---- synth ------------------------------------------------------------------

struct SynthArgs {
  std::string endpoint, model = "gpt-4";
  std::optional<fs::path> demos, gold, db_root, rejects;
  fs::path out;
  SynthesisOptions options;
  std::int64_t timeout_ms = 5000;
};

int run_synth(SynthArgs a, std::ostream& out, std::stop_token stop) {
  const auto pool = demonstrations_from(a.demos, a.gold, a.db_root);
  a.options.validation_timeout = millis(a.timeout_ms);
  const Endpoint endpoint = endpoint_from_environment(a.endpoint, a.model);
  const SynthesisResult result = synthesize_batch(endpoint, pool, a.options, stop);

  std::vector<nlohmann::json> accepted, rejected;
  for (const auto& p : result.accepted) accepted.push_back(to_json(p));
  for (const auto& r : result.rejected) rejected.push_back(to_json(r));
  const fs::path rejects = a.rejects.value_or(fs::path(a.out.string() + ".rejects.jsonl"));
  Output{a.out, out}.write(jsonl(accepted), result.complete);
  Output{rejects, out}.write(jsonl(rejected), result.complete);
  out << "accepted " << result.accepted.size() << ", rejected " << result.rejected.size() << "\n";
  return result.complete ? kExitOk : kExitInterrupted;
}

// ---- gen-candidates ---------------------------------------------------------

struct CandidateArgs {
  std::string endpoint, model = "weak-model";
  fs::path gold, db_root, out;
  CandidateOptions options;
};

int run_candidates(const CandidateArgs& a, std::ostream& out, std::stop_token stop) {
  require_file(a.gold);
  require_dir(a.db_root);
  const auto examples = read_examples(a.gold);
  const Endpoint endpoint = endpoint_from_environment(a.endpoint, a.model);
  const CandidateResult result = generate_candidates(endpoint, examples, a.db_root, a.options, stop);
  std::vector<nlohmann::json> records;
  for (const auto& c : result.candidates) records.push_back(to_json(c));
  Output{a.out, out}.write(jsonl(records), result.complete);
  out << "candidates " << result.candidates.size() << "\n";
  return result.complete ? kExitOk : kExitInterrupted;
}

// ---- label --------------------------------------------------------------------

struct LabelArgs {
  fs::path gold, candidates, db_root, out;
  std::optional<fs::path> labels;
  std::string policy = "gold_backstop";
  std::int64_t timeout_ms = kDefaultTimeout.count();
  std::size_t rows = kDefaultSampleRows;
  unsigned concurrency = default_concurrency();
  std::uint64_t seed = 0;  // labeling draws no randomness; accepted for uniformity
};

int run_label(const LabelArgs& a, std::ostream& out, std::stop_token stop) {
  require_file(a.gold);
  require_file(a.candidates);
  require_dir(a.db_root);
  PreferenceOptions options;
  options.policy = parse_pairing_policy(a.policy);
  options.match.timeout = millis(a.timeout_ms);
  options.sample_rows = a.rows;
  options.concurrency = a.concurrency;
  options.stop = stop;
  const auto examples = read_examples(a.gold);
  const auto candidates = read_candidates(a.candidates);
  const PreferenceResult result = build_preference_dataset(examples, candidates, a.db_root, options);

  std::vector<nlohmann::json> pairs;
  for (const auto& p : result.pairs) pairs.push_back(to_json(p));
  Output{a.out, out}.write(jsonl(pairs), result.complete);
  std::size_t positives = 0;
  if (a.labels) {
    std::vector<nlohmann::json> labels;
    for (const auto& l : result.labeled) {
      nlohmann::json j = to_json(l.candidate);
      j["label"] = to_string(l.label.value);
      j["reason"] = to_string(l.label.reason);
      labels.push_back(std::move(j));
    }
    Output{a.labels, out}.write(jsonl(labels), result.complete);
  }
  for (const auto& l : result.labeled) positives += l.label.positive() ? 1 : 0;
  out << "candidates " << result.labeled.size() << " (positive " << positives << ", negative "
      << result.labeled.size() - positives << "), pairs " << result.pairs.size() << "\n";
  return result.complete ? kExitOk : kExitInterrupted;
}

// ---- eval ---------------------------------------------------------------------

struct EvalArgs {
  fs::path gold, pred, db_root;
  std::optional<fs::path> out, suite_dir;
  std::string metric = "ex";
  int suite_size = kDefaultSuiteSize;
  std::uint64_t seed = 0;
  std::int64_t timeout_ms = kDefaultTimeout.count();
  unsigned concurrency = default_concurrency();
  bool resample_rows = false;
  bool allow_gold_errors = false;
};

int run_eval(const EvalArgs& a, std::ostream& out, std::ostream& err, std::stop_token stop) {
  require_file(a.gold);
  require_file(a.pred);
  require_dir(a.db_root);
  if (a.metric != "ex" && a.metric != "ts") {
    throw Error(ErrorCode::InvalidArgument, "--metric must be ex or ts");
  }
  EvalOptions options;
  options.match.timeout = millis(a.timeout_ms);
  options.concurrency = a.concurrency;
  options.stop = stop;
  const auto examples = read_examples(a.gold);
  const auto predictions = read_predictions(a.pred);

  MetricsReport report;
  if (a.metric == "ex") {
    report = ex_accuracy(examples, predictions, a.db_root, options);
  } else {
    if (a.suite_size < 0) throw Error(ErrorCode::InvalidArgument, "--suite-size must be >= 0");
    const fs::path scratch =
        a.suite_dir.value_or(a.out ? fs::path(a.out->string() + ".suites")
                                   : fs::temp_directory_path() / "senseforge-suites");
    AugmentOptions augment;
    augment.resample_rows = a.resample_rows;
    std::map<std::string, TestSuite> suites;
    for (const auto& e : examples) {
      if (suites.contains(e.db_id)) continue;
      const auto db_file = database_path(a.db_root, e.db_id);
      if (!fs::is_regular_file(db_file)) {
        throw Error(ErrorCode::MissingDatabase, "no database for db_id " + e.db_id);
      }
      suites.emplace(e.db_id, generate_test_suite(db_file, a.suite_size, a.seed, scratch, augment));
    }
    report = ts_accuracy(examples, predictions, suites, options);
  }

  nlohmann::json doc = to_json(report);
  doc["identifiers"] = version_json();
  doc["config"] = {{"metric", a.metric},
                   {"suite_size", a.metric == "ts" ? nlohmann::json(a.suite_size) : nlohmann::json()},
                   {"seed", a.seed},
                   {"timeout_ms", a.timeout_ms},
                   {"resample_rows", a.resample_rows}};
  if (a.out) {
    Output{a.out, out}.write(doc.dump(2) + "\n", report.complete);
    out << report_by_hardness(report);
  } else {
    out << doc.dump(2) << "\n";
  }
  if (!report.complete) return kExitInterrupted;
  if (!report.gold_errors.empty()) {
    for (const auto& g : report.gold_errors) {
      err << "gold query failed for example " << g.example_id << ": " << g.verdict.message << "\n";
    }
    if (!a.allow_gold_errors) return kExitFailure;
  }
  return kExitOk;
}

// ---- stats --------------------------------------------------------------------

struct StatsArgs {
  std::optional<fs::path> gold, db_root, synth, out;
  double merge_threshold = kDefaultMergeThreshold;
};

int run_stats(const StatsArgs& a, std::ostream& out) {
  if (!a.gold && !a.synth) throw Error(ErrorCode::InvalidArgument, "need --gold and/or --synth");
  StrongDataset dataset;
  if (a.gold) {
    if (!a.db_root) throw Error(ErrorCode::InvalidArgument, "--gold needs --db-root");
    require_file(*a.gold);
    require_dir(*a.db_root);
    const auto examples = read_examples(*a.gold);
    std::vector<Schema> schemas;
    std::set<std::string> seen;
    for (const auto& e : examples) {
      if (!seen.insert(e.db_id).second) continue;
      const auto path = database_path(*a.db_root, e.db_id);
      if (!fs::is_regular_file(path)) {
        throw Error(ErrorCode::MissingDatabase, "no database for db_id " + e.db_id);
      }
      schemas.push_back(introspect_schema(path));
    }
    dataset.add_examples(examples, schemas);
  }
  if (a.synth) {
    require_file(*a.synth);
    dataset.add_synth_points(read_synth_points(*a.synth));
  }
  const DatasetStats stats = dataset_stats(dataset, a.merge_threshold);
  if (a.out) Output{a.out, out}.write(to_json(stats).dump(2) + "\n", true);
  out << format_stats(stats);
  return kExitOk;
}

// ---- loss ---------------------------------------------------------------------

struct LossArgs {
  fs::path in;
  std::optional<fs::path> out;
  double beta = 0.2;
};

int run_loss(const LossArgs& a, std::ostream& out) {
  require_file(a.in);
  std::ifstream in(a.in);
  std::string line, text;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto r = nlohmann::json::parse(line, nullptr, false);
    const std::string where = a.in.string() + ":" + std::to_string(line_no);
    if (r.is_discarded() || !r.is_object()) {
      throw Error(ErrorCode::ParseError, "invalid JSON at " + where);
    }
    auto number = [&](const char* field) {
      if (!r.contains(field)) {
        throw Error(ErrorCode::MissingField, std::string("missing field \"") + field + "\" at " + where);
      }
      if (!r[field].is_number()) {
        throw Error(ErrorCode::InvalidRecord, std::string("field \"") + field + "\" must be a number at " + where);
      }
      return r[field].get<double>();
    };
    DpoInputs inputs{number("logp_theta_w"), number("logp_ref_w"), number("logp_theta_l"),
                     number("logp_ref_l"), r.contains("beta") ? number("beta") : a.beta};
    const double loss = dpo_loss(inputs);
    text += dump_line({{"margin", dpo_margin(inputs)}, {"loss", loss}}) + "\n";
  }
  Output{a.out, out}.write(text, true);
  return kExitOk;
}

// -----------------------------------------------------------------------------

template <class T>
void optional_path(CLI::App* app, const std::string& name, std::optional<T>& target,
                   const std::string& help) {
  app->add_option_function<std::string>(
      name, [&target](const std::string& v) { target = T(v); }, help);
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
             std::stop_token stop) {
  CLI::App app{"Text-to-SQL data synthesis, preference labeling, and evaluation", "senseforge"};
  app.require_subcommand(0, 1);
  bool show_version = false, log_json = false;
  int verbosity = 0;
  app.add_flag("--version", show_version, "Print version and rule-set identifiers");
  app.add_flag("--log-json", log_json, "Emit logs as JSON lines on stderr");
  app.add_flag("-v,--verbose", verbosity, "More logging (repeatable)");

  RenderArgs render;
  auto* render_cmd = app.add_subcommand("render-prompt", "Print an inference or synthesis prompt");
  optional_path(render_cmd, "--db", render.db, "SQLite database file");
  optional_path(render_cmd, "--db-root", render.db_root, "Directory of <db_id>/<db_id>.sqlite");
  render_cmd->add_option("--db-id", render.db_id, "Database id under --db-root");
  render_cmd->add_option("--question", render.question, "Natural-language question");
  optional_path(render_cmd, "--knowledge", render.knowledge, "External knowledge text");
  render_cmd->add_option("--rows", render.rows, "Sample rows per table")->capture_default_str();
  render_cmd->add_flag("--synthesis", render.synthesis, "Render the synthesis prompt instead");
  render_cmd->add_option("--level", render.level, "easy|medium|hard (synthesis)");
  optional_path(render_cmd, "--demos", render.demos, "Demonstrations JSONL (synthesis)");
  optional_path(render_cmd, "--gold", render.gold, "Examples JSONL used as demonstrations");
  render_cmd->add_option("--seed", render.seed, "Demonstration sampling seed");
  optional_path(render_cmd, "--out", render.out, "Output file (default stdout)");

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "Generate strong datapoints with an LLM");
  synth_cmd->add_option("--endpoint", synth.endpoint, "Chat-completion URL")->required();
  synth_cmd->add_option("--model", synth.model, "Model name")->capture_default_str();
  synth_cmd->add_option("--level", synth.options.level, "easy|medium|hard|mix")
      ->capture_default_str();
  synth_cmd->add_option("--n", synth.options.n, "Number of requests")->capture_default_str();
  synth_cmd->add_option("--seed", synth.options.seed, "Seed")->capture_default_str();
  synth_cmd->add_option("--max-tokens", synth.options.max_tokens)->capture_default_str();
  synth_cmd->add_option("--temperature", synth.options.temperature)->capture_default_str();
  synth_cmd->add_option("--concurrency", synth.options.concurrency, "Requests in flight")
      ->capture_default_str();
  synth_cmd->add_option("--timeout-ms", synth.timeout_ms, "Validation timeout")
      ->capture_default_str();
  optional_path(synth_cmd, "--demos", synth.demos, "Demonstrations JSONL");
  optional_path(synth_cmd, "--gold", synth.gold, "Examples JSONL used as demonstrations");
  optional_path(synth_cmd, "--db-root", synth.db_root, "Databases for --gold");
  synth_cmd->add_option("--out", synth.out, "Accepted datapoints JSONL")->required();
  optional_path(synth_cmd, "--rejects", synth.rejects, "Rejected datapoints JSONL");

  CandidateArgs cand;
  auto* cand_cmd = app.add_subcommand("gen-candidates", "Sample candidate SQL from a weak model");
  cand_cmd->add_option("--endpoint", cand.endpoint, "Chat-completion URL")->required();
  cand_cmd->add_option("--model", cand.model, "Model name")->capture_default_str();
  cand_cmd->add_option("--gold", cand.gold, "Examples JSONL")->required();
  cand_cmd->add_option("--db-root", cand.db_root, "Database directory")->required();
  cand_cmd->add_option("--k", cand.options.k_samples, "Samples per example")->capture_default_str();
  cand_cmd->add_option("--temperature", cand.options.temperature)->capture_default_str();
  cand_cmd->add_option("--max-tokens", cand.options.max_tokens)->capture_default_str();
  cand_cmd->add_option("--seed", cand.options.seed)->capture_default_str();
  cand_cmd->add_option("--rows", cand.options.sample_rows, "Sample rows per table")
      ->capture_default_str();
  cand_cmd->add_option("--concurrency", cand.options.concurrency)->capture_default_str();
  cand_cmd->add_option("--out", cand.out, "Candidates JSONL")->required();

  LabelArgs label;
  auto* label_cmd = app.add_subcommand("label", "Label candidates by execution and build pairs");
  label_cmd->add_option("--gold", label.gold, "Examples JSONL")->required();
  label_cmd->add_option("--candidates", label.candidates, "Candidates JSONL")->required();
  label_cmd->add_option("--db-root", label.db_root, "Database directory")->required();
  label_cmd->add_option("--policy", label.policy, "gold_backstop|weak_vs_weak")
      ->capture_default_str();
  label_cmd->add_option("--out", label.out, "Preference pairs JSONL")->required();
  optional_path(label_cmd, "--labels", label.labels, "Per-candidate labels JSONL");
  label_cmd->add_option("--timeout-ms", label.timeout_ms)->capture_default_str();
  label_cmd->add_option("--rows", label.rows, "Sample rows per table")->capture_default_str();
  label_cmd->add_option("--concurrency", label.concurrency);
  label_cmd->add_option("--seed", label.seed);

  EvalArgs eval;
  auto* eval_cmd = app.add_subcommand("eval", "Score predictions by execution");
  eval_cmd->add_option("--gold", eval.gold, "Examples JSONL")->required();
  eval_cmd->add_option("--pred", eval.pred, "Predictions JSONL")->required();
  eval_cmd->add_option("--db-root", eval.db_root, "Database directory")->required();
  eval_cmd->add_option("--metric", eval.metric, "ex|ts")->capture_default_str();
  eval_cmd->add_option("--suite-size", eval.suite_size, "Perturbed variants per database (ts)")
      ->capture_default_str();
  eval_cmd->add_option("--seed", eval.seed)->capture_default_str();
  eval_cmd->add_option("--timeout-ms", eval.timeout_ms)->capture_default_str();
  eval_cmd->add_option("--concurrency", eval.concurrency);
  optional_path(eval_cmd, "--out", eval.out, "Report JSON (default stdout)");
  optional_path(eval_cmd, "--suite-dir", eval.suite_dir, "Scratch directory for ts variants");
  eval_cmd->add_flag("--resample-rows", eval.resample_rows, "Vary row counts in ts variants");
  eval_cmd->add_flag("--allow-gold-errors", eval.allow_gold_errors,
                     "Exit 0 even if some gold queries fail");

  StatsArgs stats;
  auto* stats_cmd = app.add_subcommand("stats", "Dataset statistics and domain density");
  optional_path(stats_cmd, "--gold", stats.gold, "Examples JSONL");
  optional_path(stats_cmd, "--db-root", stats.db_root, "Database directory for --gold");
  optional_path(stats_cmd, "--synth", stats.synth, "Synthetic datapoints JSONL");
  stats_cmd->add_option("--merge-threshold", stats.merge_threshold)->capture_default_str();
  optional_path(stats_cmd, "--out", stats.out, "Stats JSON");

  LossArgs loss;
  auto* loss_cmd = app.add_subcommand("loss", "Preference loss for logged log-probabilities");
  loss_cmd->add_option("--in", loss.in, "JSONL of log-probabilities")->required();
  loss_cmd->add_option("--beta", loss.beta, "Beta when a record has none")->capture_default_str();
  optional_path(loss_cmd, "--out", loss.out, "Output JSONL (default stdout)");

  CLI::App* active = &app;
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    for (auto* sub : app.get_subcommands()) active = sub;
    out << active->help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    for (auto* sub : app.get_subcommands()) active = sub;
    err << "error: " << e.what() << "\n\n" << active->help();
    return kExitUsage;
  }

  if (show_version) {
    out << version_info() << "\n";
    return kExitOk;
  }
  configure_logging(log_json, verbosity >= 2   ? spdlog::level::debug
                              : verbosity == 1 ? spdlog::level::info
                                               : spdlog::level::warn);
  if (app.get_subcommands().empty()) {
    err << app.help();
    return kExitUsage;
  }

  try {
    if (render_cmd->parsed()) return run_render(render, out);
    if (synth_cmd->parsed()) return run_synth(synth, out, stop);
    if (cand_cmd->parsed()) return run_candidates(cand, out, stop);
    if (label_cmd->parsed()) return run_label(label, out, stop);
    if (eval_cmd->parsed()) return run_eval(eval, out, err, stop);
    if (stats_cmd->parsed()) return run_stats(stats, out);
    if (loss_cmd->parsed()) return run_loss(loss, out);
  } catch (const Error& e) {
    err << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
    return is_config_error(e.code()) ? kExitUsage : kExitFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace senseforge
