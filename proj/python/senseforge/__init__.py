# Copyright 2026 The senseforge Authors
# SPDX-License-Identifier: Apache-2.0
"""Python bindings for the senseforge text-to-SQL data and evaluation core."""

import json as _json

from ._core import (
    SenseforgeError,
    build_inference_prompt,
    classify_hardness,
    count_joins,
    dpo_gradient_check,
    dpo_loss,
    execute,
    extract_first_sql,
    hardness_components,
    introspect_schema,
    parse_datapoint,
    results_match,
    run_cli,
    sft_loss,
    validate_datapoint,
    version_info,
)

__version__ = version_info().split()[1]


def evaluate(gold, pred, db_root, metric="ex", suite_size=8, seed=0, timeout_ms=30000):
    """Run the `eval` subcommand and return the report as a dict."""
    code, out, err = run_cli([
        "eval", "--gold", str(gold), "--pred", str(pred), "--db-root", str(db_root),
        "--metric", metric, "--suite-size", str(suite_size), "--seed", str(seed),
        "--timeout-ms", str(timeout_ms), "--allow-gold-errors",
    ])
    if code != 0:
        raise SenseforgeError(err.strip())
    return _json.loads(out)


__all__ = [
    "SenseforgeError",
    "build_inference_prompt",
    "classify_hardness",
    "count_joins",
    "dpo_gradient_check",
    "dpo_loss",
    "evaluate",
    "execute",
    "extract_first_sql",
    "hardness_components",
    "introspect_schema",
    "parse_datapoint",
    "results_match",
    "run_cli",
    "sft_loss",
    "validate_datapoint",
    "version_info",
]
