"""Structured pass/fail records for exhaustive law checks."""

from __future__ import annotations

import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any, Iterator

PASS, FAIL, SKIPPED = "pass", "fail", "skipped"


@dataclass
class Check:
    name: str
    status: str = PASS
    witness: Any = None
    elapsed_ms: float = 0.0
    note: str = ""

    def fail(self, witness: Any = None, note: str = "") -> None:
        # the first counterexample wins; later ones are ignored
        if self.status != FAIL:
            self.status = FAIL
            self.witness = witness
            if note:
                self.note = note

    def skip(self, note: str = "") -> None:
        self.status = SKIPPED
        self.note = note

    @property
    def failed(self) -> bool:
        return self.status == FAIL

    def as_dict(self, timings: bool = False) -> dict:
        out = {"name": self.name, "status": self.status, "witness": self.witness}
        if self.note:
            out["note"] = self.note
        if timings:
            out["elapsed_ms"] = round(self.elapsed_ms, 3)
        return out


@dataclass
class VerificationReport:
    """An ordered list of named checks.

    ``ok`` is true when no check failed; skipped checks do not count
    against it.
    """

    checks: list[Check] = field(default_factory=list)

    @contextmanager
    def check(self, name: str) -> Iterator[Check]:
        chk = Check(name)
        start = time.perf_counter()
        try:
            yield chk
        finally:
            chk.elapsed_ms = (time.perf_counter() - start) * 1000.0
            self.checks.append(chk)

    def record(self, name: str, ok: bool, witness: Any = None, note: str = "") -> Check:
        chk = Check(name, PASS if ok else FAIL, None if ok else witness, 0.0, note)
        self.checks.append(chk)
        return chk

    def extend(self, other: "VerificationReport", prefix: str = "") -> None:
        for chk in other.checks:
            self.checks.append(
                Check(prefix + chk.name, chk.status, chk.witness, chk.elapsed_ms, chk.note)
            )

    @property
    def ok(self) -> bool:
        return not any(c.failed for c in self.checks)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if c.failed]

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def __contains__(self, name: str) -> bool:
        return any(c.name == name for c in self.checks)

    def to_dict(self, timings: bool = False) -> dict:
        return {"checks": [c.as_dict(timings) for c in self.checks]}

    def to_json(self, timings: bool = False) -> str:
        return json.dumps(self.to_dict(timings), sort_keys=True, indent=2, default=str)

    def summary(self) -> str:
        lines = []
        for c in self.checks:
            line = f"[{c.status.upper():>7}] {c.name} ({c.elapsed_ms:.1f} ms)"
            if c.failed:
                line += f"  witness={c.witness!r}"
            elif c.note:
                line += f"  ({c.note})"
            lines.append(line)
        return "\n".join(lines)

    def __str__(self) -> str:
        return self.summary()
