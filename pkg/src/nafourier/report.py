"""Check records shared by the verification routines and the command line."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Any

from .exactnum import CycNum

PASS = "pass"
FAIL = "fail"
SKIPPED = "skipped"


def serialize(value: Any) -> Any:
    """Turn exact values, tuples and nested containers into JSON-friendly data."""
    if isinstance(value, CycNum):
        return str(value)
    if isinstance(value, dict):
        return {str(k): serialize(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [serialize(v) for v in value]
    return value


@dataclass
class Check:
    check_id: str
    description: str
    topic: str
    status: str
    lhs: Any = None
    rhs: Any = None
    scalar: Any = None

    @property
    def passed(self) -> bool:
        return self.status != FAIL

    def to_dict(self) -> dict:
        data = asdict(self)
        for key in ("lhs", "rhs", "scalar"):
            data[key] = serialize(getattr(self, key))
        return data


def make_check(
    check_id: str, description: str, topic: str, ok: bool, lhs: Any = None, rhs: Any = None, scalar: Any = None
) -> Check:
    return Check(check_id, description, topic, PASS if ok else FAIL, lhs, rhs, scalar)


@dataclass
class Report:
    checks: list[Check] = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    def add(self, checks: Check | list[Check]) -> None:
        if isinstance(checks, Check):
            self.checks.append(checks)
        else:
            self.checks.extend(checks)

    def sorted_checks(self) -> list[Check]:
        return sorted(self.checks, key=lambda c: c.check_id)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if c.status == FAIL]

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        out = {"checks": [c.to_dict() for c in self.sorted_checks()]}
        summary = {s: sum(1 for c in self.checks if c.status == s) for s in (PASS, FAIL, SKIPPED)}
        out["summary"] = summary
        if self.extra:
            out["extra"] = serialize(self.extra)
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)
