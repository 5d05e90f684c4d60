"""Experiment reports: declarative assertions over stored tables.

Every assertion names an operation and the table columns it reads, so a
saved report can be re-checked without re-running its experiment.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from fractions import Fraction

from ..errors import InvalidInput


@dataclass
class Table:
    columns: list
    rows: list = field(default_factory=list)

    def add(self, *row):
        if len(row) != len(self.columns):
            raise ValueError(f"row has {len(row)} cells, table has {len(self.columns)} columns")
        self.rows.append([cell(v) for v in row])

    def column(self, name):
        i = self.columns.index(name)
        return [r[i] for r in self.rows]

    def to_dict(self):
        return {"columns": list(self.columns), "rows": [list(r) for r in self.rows]}


def cell(v):
    """Normalize a value into a JSON scalar with stable formatting."""
    if isinstance(v, bool) or v is None or isinstance(v, (int, str)):
        return v
    if isinstance(v, Fraction):
        return v.numerator if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(v, float):
        return float(f"{v:.12g}")
    if isinstance(v, (tuple, list)):
        return [cell(x) for x in v]
    return str(v)


def value(v):
    """Inverse of :func:`cell` for numbers stored as ``p/q`` strings."""
    if isinstance(v, str) and "/" in v:
        try:
            return Fraction(v)
        except ValueError:
            return v
    return v


@dataclass
class Report:
    experiment: str
    claim: str
    params: dict = field(default_factory=dict)
    tables: dict = field(default_factory=dict)
    assertions: list = field(default_factory=list)
    constants: dict = field(default_factory=dict)
    sampling: dict = field(default_factory=dict)
    status: str = "pass"
    reason: str = ""
    runtime: float | None = None
    curves: list = field(default_factory=list, repr=False)

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_dict(self, include_runtime: bool = False) -> dict:
        out = {
            "experiment": self.experiment,
            "claim": self.claim,
            "params": self.params,
            "tables": {k: (t.to_dict() if isinstance(t, Table) else t) for k, t in self.tables.items()},
            "assertions": self.assertions,
            "constants": {k: cell(v) for k, v in self.constants.items()},
            "sampling": self.sampling,
            "status": self.status,
            "reason": self.reason,
        }
        if include_runtime:
            out["runtime"] = None if self.runtime is None else round(self.runtime, 3)
        return out


# ---------------------------------------------------------------------------
# assertion evaluation


def _rows(tables, a):
    t = tables[a["table"]]
    cols = t["columns"]
    rows = [dict(zip(cols, r)) for r in t["rows"]]
    where = a.get("where")
    if where:
        rows = [r for r in rows if all(r.get(k) == v for k, v in where.items())]
    return rows


def _cmp(op, x, y):
    x, y = value(x), value(y)
    if x is None or y is None:
        return False
    return {"le": x <= y, "lt": x < y, "ge": x >= y, "eq": x == y}[op]


def evaluate(a: dict, tables: dict) -> bool:
    """Evaluate one assertion against serialized tables."""
    op = a["op"]
    rows = _rows(tables, a)
    if not rows:
        return False
    if op in ("all_le", "all_lt", "all_ge", "all_eq"):
        rel = op[4:]
        return all(_cmp(rel, r[a["lhs"]], r[a["rhs"]]) for r in rows)
    if op in ("all_le_const", "all_lt_const", "all_ge_const", "all_eq_const"):
        rel = op[4:-6]
        return all(_cmp(rel, r[a["col"]], a["value"]) for r in rows)
    if op == "all_true":
        return all(r[a["col"]] is True for r in rows)
    if op == "any_true":
        return any(r[a["col"]] is True for r in rows)
    if op == "strictly_increasing":
        vals = [value(r[a["col"]]) for r in rows]
        return len(vals) >= 2 and all(x < y for x, y in zip(vals, vals[1:]))
    if op == "constant":
        vals = [value(r[a["col"]]) for r in rows]
        return len(set(vals)) == 1
    raise InvalidInput(f"unknown assertion op {op!r}")


def check(report: Report) -> Report:
    """Fill in ``passed`` on every assertion and the overall status."""
    tables = report.to_dict()["tables"]
    ok = True
    for a in report.assertions:
        a["passed"] = evaluate(a, tables)
        ok = ok and a["passed"]
    if report.status != "error":
        report.status = "pass" if ok else "fail"
        if not ok:
            failed = [a["name"] for a in report.assertions if not a["passed"]]
            report.reason = "failed: " + ", ".join(failed)
    return report


def recheck(doc: dict) -> bool:
    """Recompute pass/fail of a saved report from its own tables."""
    if doc.get("status") == "error":
        return False
    return all(evaluate(a, doc["tables"]) for a in doc["assertions"])


# ---------------------------------------------------------------------------
# emission


def dumps(report: Report, fmt: str = "json", include_runtime: bool = False) -> str:
    doc = report.to_dict(include_runtime)
    if fmt == "json":
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        for name in sorted(doc["tables"]):
            t = doc["tables"][name]
            buf.write(f"# {name}\n")
            w.writerow(t["columns"])
            for r in t["rows"]:
                w.writerow(["" if c is None else c for c in r])
            buf.write("\n")
        return buf.getvalue()
    raise InvalidInput("format must be 'json' or 'csv'")


def emit_report(report: Report, path, fmt: str = "json", include_runtime: bool = False) -> str:
    """Write a byte-stable rendering of the report and return it."""
    text = dumps(report, fmt, include_runtime)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    return text


def curve_csv(points) -> str:
    """``t,value`` rows for a sampled curve."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "value"])
    for t, v in points:
        w.writerow([cell(t), cell(v)])
    return buf.getvalue()
