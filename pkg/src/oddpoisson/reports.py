"""Result records shared by the checkers and the CLI."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

PASS = "pass"
FAIL = "fail"
REFUSED = "refused"


@dataclass
class CheckResult:
    name: str
    status: str
    witness: Any = None
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.status == PASS

    def to_json(self) -> dict:
        out = {"name": self.name, "status": self.status, "witness": self.witness}
        if self.details:
            out["details"] = self.details
        return out


def check(name: str, residual, details: dict | None = None) -> CheckResult:
    """Pass iff ``residual`` is zero (falsy); otherwise its text form is the witness."""
    if residual:
        return CheckResult(name, FAIL, str(residual), details or {})
    return CheckResult(name, PASS, None, details or {})


@dataclass
class Report:
    title: str
    checks: list[CheckResult] = field(default_factory=list)
    info: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def add(self, result: CheckResult) -> CheckResult:
        self.checks.append(result)
        return result

    def __getitem__(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_json(self) -> dict:
        return {
            "title": self.title,
            "status": PASS if self.ok else FAIL,
            "info": self.info,
            "checks": [c.to_json() for c in self.checks],
        }
