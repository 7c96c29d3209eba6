// Copyright 2026 The senseforge Authors
// SPDX-License-Identifier: Apache-2.0
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "senseforge/cli.hpp"
#include "senseforge/error.hpp"
#include "senseforge/executor.hpp"
#include "senseforge/hardness.hpp"
#include "senseforge/loss.hpp"
#include "senseforge/preference.hpp"
#include "senseforge/prompt.hpp"
#include "senseforge/schema.hpp"
#include "senseforge/synth.hpp"
#include "senseforge/version.hpp"

namespace py = pybind11;
namespace sf = senseforge;

namespace {

py::object cell(const sf::Value& v) {
  return std::visit(
      [](const auto& x) -> py::object {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, sf::Null>) {
          return py::none();
        } else if constexpr (std::is_same_v<T, sf::Blob>) {
          return py::bytes(reinterpret_cast<const char*>(x.data()), x.size());
        } else {
          return py::cast(x);
        }
      },
      v);
}

py::dict schema_dict(const sf::Schema& schema) {
  py::list tables;
  for (const auto& t : schema.tables) {
    py::list columns, fks;
    for (const auto& c : t.columns) columns.append(py::make_tuple(c.name, sf::to_string(c.type)));
    for (const auto& fk : t.foreign_keys) {
      fks.append(py::make_tuple(fk.column, fk.ref_table, fk.ref_column));
    }
    py::dict d;
    d["name"] = t.name;
    d["columns"] = columns;
    d["primary_key"] = t.primary_key;
    d["foreign_keys"] = fks;
    tables.append(d);
  }
  py::dict out;
  out["db_id"] = schema.db_id;
  out["tables"] = tables;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "senseforge native core";

  py::register_exception<sf::Error>(m, "SenseforgeError", PyExc_RuntimeError);

  m.def("version_info", &sf::version_info);

  m.def("introspect_schema", [](const std::filesystem::path& db) {
    return schema_dict(sf::introspect_schema(db));
  });

  m.def(
      "build_inference_prompt",
      [](const std::filesystem::path& db, const std::string& question,
         std::optional<std::string> knowledge, std::size_t rows) {
        return sf::build_inference_prompt(db, question, knowledge, rows).text;
      },
      py::arg("db"), py::arg("question"), py::arg("knowledge") = py::none(),
      py::arg("rows") = sf::kDefaultSampleRows);

  m.def(
      "execute",
      [](const std::filesystem::path& db, const std::string& sql, long timeout_ms) -> py::object {
        sf::ExecutionResult result;
        {
          py::gil_scoped_release release;
          result = sf::execute(db, sql, std::chrono::milliseconds(timeout_ms));
        }
        if (const auto* rows = std::get_if<sf::Rows>(&result)) {
          py::list out;
          for (const auto& row : rows->rows) {
            py::tuple t(row.size());
            for (std::size_t i = 0; i < row.size(); ++i) t[i] = cell(row[i]);
            out.append(t);
          }
          py::dict d;
          d["columns"] = rows->columns;
          d["rows"] = out;
          return d;
        }
        py::dict d;
        if (const auto* err = std::get_if<sf::ExecError>(&result)) {
          d["error"] = sf::to_string(err->kind);
          d["message"] = err->message;
        } else {
          d["error"] = "Timeout";
        }
        return d;
      },
      py::arg("db"), py::arg("sql"), py::arg("timeout_ms") = sf::kDefaultTimeout.count());

  m.def(
      "results_match",
      [](const std::filesystem::path& db, const std::string& pred, const std::string& gold,
         long timeout_ms) {
        sf::MatchOptions options;
        options.timeout = std::chrono::milliseconds(timeout_ms);
        sf::MatchVerdict v;
        {
          py::gil_scoped_release release;
          v = sf::results_match(db, pred, gold, options);
        }
        return std::string(sf::to_string(v.kind));
      },
      py::arg("db"), py::arg("pred"), py::arg("gold"),
      py::arg("timeout_ms") = sf::kDefaultTimeout.count());

  m.def("classify_hardness",
        [](const std::string& sql) { return std::string(sf::to_string(sf::classify_hardness(sql))); });
  m.def("hardness_components", [](const std::string& sql) {
    const auto c = sf::hardness_components(std::string_view(sql));
    return py::make_tuple(c.comp1, c.comp2, c.others);
  });
  m.def("count_joins", [](const std::string& sql) { return sf::count_joins(std::string_view(sql)); });

  m.def(
      "parse_datapoint",
      [](const std::string& raw, const std::string& level) {
        const auto p = sf::parse_datapoint(raw, sf::parse_hardness_target(level));
        py::dict d;
        d["domain"] = p.domain;
        d["schema_ddl"] = p.ddl;
        d["question"] = p.question;
        d["answer"] = p.answer_sql;
        d["level"] = sf::to_string(p.level);
        return d;
      },
      py::arg("raw"), py::arg("level") = "easy");

  m.def("validate_datapoint", [](const std::string& ddl, const std::string& answer) {
    sf::SynthDataPoint p;
    p.ddl = ddl;
    p.answer_sql = answer;
    const auto v = sf::validate_datapoint(p);
    return py::make_tuple(std::string(sf::to_string(v.status)), v.empty_result, v.message);
  });

  m.def("extract_first_sql", &sf::extract_first_sql);

  m.def("sft_loss", [](const std::vector<double>& logprobs, bool mean) {
    return sf::sft_loss(logprobs, mean ? sf::SftReduction::MeanPerToken : sf::SftReduction::Sum);
  }, py::arg("logprobs"), py::arg("mean") = false);
  m.def(
      "dpo_loss",
      [](double tw, double rw, double tl, double rl, double beta) {
        return sf::dpo_loss({tw, rw, tl, rl, beta});
      },
      py::arg("logp_theta_w"), py::arg("logp_ref_w"), py::arg("logp_theta_l"),
      py::arg("logp_ref_l"), py::arg("beta"));
  m.def(
      "dpo_gradient_check",
      [](double tw, double rw, double tl, double rl, double beta, double h) {
        return sf::dpo_gradient_check({tw, rw, tl, rl, beta}, h);
      },
      py::arg("logp_theta_w"), py::arg("logp_ref_w"), py::arg("logp_theta_l"),
      py::arg("logp_ref_l"), py::arg("beta"), py::arg("h") = 1e-5);

  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code;
    {
      py::gil_scoped_release release;
      code = sf::dispatch(args, out, err);
    }
    return py::make_tuple(code, out.str(), err.str());
  });
}
