"""Verification reports: named clauses with pass/fail/skipped status and witnesses.

A witness is a plain JSON-able dict locating the first failure of a clause.
Verifiers take an ``only`` collection of clause names so that a single failing
clause can be re-run in isolation (see :func:`replay`).
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Optional

PASS, FAIL, SKIPPED = "pass", "fail", "skipped"


@dataclass
class Clause:
    name: str
    status: str
    witness: Optional[dict] = None
    note: str = ""

    def to_json(self) -> dict:
        out: dict[str, Any] = {"name": self.name, "status": self.status}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.note:
            out["note"] = self.note
        return out


@dataclass
class Report:
    name: str
    subject: str = ""
    clauses: list[Clause] = field(default_factory=list)

    @staticmethod
    def wants(clause: str, only: Optional[Iterable[str]]) -> bool:
        return only is None or clause in only

    def add(self, name: str, passed: bool, witness: Optional[dict] = None, note: str = "") -> Clause:
        c = Clause(name, PASS if passed else FAIL, None if passed else _jsonable(witness), note)
        self.clauses.append(c)
        return c

    def skip(self, name: str, note: str = "") -> Clause:
        c = Clause(name, SKIPPED, None, note)
        self.clauses.append(c)
        return c

    def extend(self, other: "Report", prefix: str = "") -> "Report":
        for c in other.clauses:
            self.clauses.append(Clause(prefix + c.name, c.status, c.witness, c.note))
        return self

    @property
    def ok(self) -> bool:
        return all(c.status != FAIL for c in self.clauses)

    def failures(self) -> list[Clause]:
        return [c for c in self.clauses if c.status == FAIL]

    def status(self, name: str) -> str:
        for c in self.clauses:
            if c.name == name:
                return c.status
        raise KeyError(name)

    def __getitem__(self, name: str) -> Clause:
        for c in self.clauses:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_json(self) -> dict:
        return {
            "report": self.name,
            "subject": self.subject,
            "ok": self.ok,
            "clauses": [c.to_json() for c in self.clauses],
        }

    def summary(self) -> str:
        lines = [f"{self.name} [{self.subject}]: {'PASS' if self.ok else 'FAIL'}"]
        for c in self.clauses:
            line = f"  {c.status.upper():7s} {c.name}"
            if c.note:
                line += f"  ({c.note})"
            if c.witness is not None:
                line += "  witness=" + json.dumps(c.witness, sort_keys=True)
            lines.append(line)
        return "\n".join(lines)


def _jsonable(obj):
    from .cyclotomic import CycScalar, scalar_to_json

    if obj is None:
        return None
    if isinstance(obj, CycScalar):
        return scalar_to_json(obj)
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if hasattr(obj, "item"):  # numpy scalars
        return obj.item()
    return obj


def replay(clause: Clause, verifier: Callable[..., Report], *args, **kwargs) -> bool:
    """Re-run one clause in isolation; True iff it fails again with the same witness.

    Clause names carrying an aggregation prefix (``"bialgebra/pentagon"``) are
    passed through unchanged; the verifier decides how to route them.
    """
    rerun = verifier(*args, only={clause.name}, **kwargs)
    for c in rerun.clauses:
        if c.name == clause.name:
            return c.status == FAIL and c.witness == clause.witness
    return False
