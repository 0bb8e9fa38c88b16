"""Verification reports with deterministic JSON output.

Every number that ends up in a report is written as an exact ``"p/q"`` string,
and checks are sorted by name, so two runs on the same inputs produce the same
bytes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Iterable

from .ratlin import qstr, to_q


def _jsonable(x: Any) -> Any:
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in sorted(x.items(), key=lambda kv: str(kv[0]))}
    try:
        return qstr(to_q(x))
    except TypeError:
        return str(x)


@dataclass
class Check:
    name: str
    passed: bool
    expected: Any = None
    actual: Any = None
    cell: Any = None
    degree: int | None = None

    def to_dict(self) -> dict:
        out: dict[str, Any] = {"name": self.name, "status": "pass" if self.passed else "fail",
                               "expected": _jsonable(self.expected), "actual": _jsonable(self.actual)}
        if self.cell is not None:
            out["cell"] = str(self.cell)
        if self.degree is not None:
            out["degree"] = qstr(self.degree)
        return out


@dataclass
class Report:
    suite: str
    checks: list[Check] = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def add(self, name: str, passed: bool, expected: Any = None, actual: Any = None,
            cell: Any = None, degree: int | None = None) -> Check:
        c = Check(name, bool(passed), expected, actual, cell, degree)
        self.checks.append(c)
        return c

    def expect_equal(self, name: str, expected: Any, actual: Any, **kw) -> Check:
        return self.add(name, expected == actual, expected, actual, **kw)

    def merge(self, other: "Report", prefix: str = "") -> "Report":
        for c in other.checks:
            self.checks.append(Check(prefix + c.name, c.passed, c.expected, c.actual, c.cell, c.degree))
        return self

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        checks = sorted((c.to_dict() for c in self.checks),
                        key=lambda d: (d["name"], d.get("cell", ""), d.get("degree", "")))
        n_pass = sum(1 for c in self.checks if c.passed)
        out = {"suite": self.suite}
        out.update({k: _jsonable(v) for k, v in sorted(self.meta.items())})
        out["checks"] = checks
        out["summary"] = {"total": qstr(len(self.checks)), "passed": qstr(n_pass),
                          "failed": qstr(len(self.checks) - n_pass),
                          "status": "pass" if self.ok else "fail"}
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"


def combine(suite: str, reports: Iterable[Report], meta: dict | None = None) -> Report:
    out = Report(suite, meta=dict(meta or {}))
    for r in reports:
        out.merge(r, prefix=f"{r.suite}/")
    return out
