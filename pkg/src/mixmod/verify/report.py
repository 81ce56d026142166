"""Experiment reports and their JSON / CSV encodings."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

# JSON Schema (draft 2020-12) for emitted reports
REPORT_SCHEMA: dict = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["experiment", "config", "trials", "aggregate"],
    "additionalProperties": False,
    "properties": {
        "experiment": {"type": "string"},
        "config": {"type": "object"},
        "trials": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["trial", "digest", "violation", "values"],
                "additionalProperties": False,
                "properties": {
                    "trial": {"type": "integer", "minimum": 0},
                    "digest": {"type": "string"},
                    "violation": {"type": "number"},
                    "values": {
                        "type": "object",
                        "additionalProperties": {"type": ["number", "string"]},
                    },
                },
            },
        },
        "aggregate": {
            "type": "object",
            "required": ["primary", "max_violation", "tolerance", "pass", "checks", "observed"],
            "additionalProperties": False,
            "properties": {
                "primary": {"type": "string"},
                "max_violation": {"type": "number"},
                "tolerance": {"type": "number"},
                "pass": {"type": "boolean"},
                "checks": {
                    "type": "object",
                    "additionalProperties": {
                        "type": "object",
                        "required": ["max", "tolerance", "pass"],
                        "properties": {
                            "max": {"type": "number"},
                            "tolerance": {"type": "number"},
                            "pass": {"type": "boolean"},
                        },
                    },
                },
                "observed": {"type": "object"},
            },
        },
    },
}


@dataclass
class TrialRecord:
    trial: int
    digest: str
    violation: float
    values: dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "trial": self.trial,
            "digest": self.digest,
            "violation": self.violation,
            "values": dict(self.values),
        }


@dataclass
class Report:
    """Result of one experiment run.

    ``checks`` maps a check name to ``(max, tolerance)``. Trial-level checks
    take their maximum from the ``values`` entry of the same name; the
    primary check also fills each record's ``violation``.
    """

    experiment: str
    config: dict
    trials: list[TrialRecord]
    checks: dict[str, tuple[float, float]]
    primary: str
    observed: dict[str, Any] = field(default_factory=dict)

    @property
    def tolerance(self) -> float:
        return self.checks[self.primary][1] if self.primary in self.checks else 0.0

    @property
    def max_violation(self) -> float:
        return self.checks[self.primary][0] if self.primary in self.checks else 0.0

    @property
    def passed(self) -> bool:
        return all(mx <= tol for mx, tol in self.checks.values())

    def to_dict(self) -> dict:
        return {
            "experiment": self.experiment,
            "config": self.config,
            "trials": [t.to_dict() for t in self.trials],
            "aggregate": {
                "primary": self.primary,
                "max_violation": self.max_violation,
                "tolerance": self.tolerance,
                "pass": self.passed,
                "checks": {
                    name: {"max": mx, "tolerance": tol, "pass": mx <= tol}
                    for name, (mx, tol) in self.checks.items()
                },
                "observed": self.observed,
            },
        }


def _clean(obj):
    # JSON has no inf/nan; encode them as strings
    if isinstance(obj, float) and not math.isfinite(obj):
        return "inf" if obj > 0 else ("-inf" if obj < 0 else "nan")
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def report_to_json(r: Report) -> str:
    return json.dumps(_clean(r.to_dict()), indent=2, sort_keys=False, allow_nan=False) + "\n"


def _fmt(x) -> str:
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def report_to_csv(r: Report) -> str:
    keys: list[str] = []
    for t in r.trials:
        for k in t.values:
            if k not in keys:
                keys.append(k)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["trial", "digest", "violation", *keys])
    for t in r.trials:
        writer.writerow([t.trial, t.digest, _fmt(t.violation), *(_fmt(t.values.get(k, "")) for k in keys)])
    return buf.getvalue()


def emit_report(r: Report, format: str = "json", path: str | Path | None = None) -> str:
    """Render ``r`` as JSON or CSV, writing to ``path`` when given."""
    if format == "json":
        text = report_to_json(r)
    elif format == "csv":
        text = report_to_csv(r)
    else:
        raise ValueError(f"format must be 'json' or 'csv', got {format!r}")
    if path is not None:
        Path(path).write_text(text)
    return text


def report_from_json(text: str) -> Report:
    """Parse JSON produced by :func:`report_to_json` back into a :class:`Report`."""
    obj = json.loads(text)
    agg = obj["aggregate"]
    checks = {name: (float(c["max"]), float(c["tolerance"])) for name, c in agg["checks"].items()}
    trials = [TrialRecord(t["trial"], t["digest"], t["violation"], t["values"]) for t in obj["trials"]]
    return Report(obj["experiment"], obj["config"], trials, checks, agg["primary"], agg["observed"])
