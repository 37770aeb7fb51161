from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass(frozen=True)
class Violation:
    law: str
    witness: Any
    detail: str = ""

    def as_dict(self):
        return {"law": self.law, "witness": _jsonable(self.witness), "detail": self.detail}


@dataclass
class LawReport:
    """Outcome of an exhaustive law check.

    ``checks`` counts how many instances of each law were evaluated;
    ``violations`` keeps the first (smallest) witness found per law.
    """

    subject: str
    checks: dict[str, int] = field(default_factory=dict)
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok

    def tick(self, law: str, n: int = 1) -> None:
        self.checks[law] = self.checks.get(law, 0) + n

    def fail(self, law: str, witness, detail: str = "") -> None:
        if not self.failed(law):
            self.violations.append(Violation(law, witness, detail))

    def failed(self, law: str) -> bool:
        return any(v.law == law for v in self.violations)

    def passed(self, law: str) -> bool:
        return law in self.checks and not self.failed(law)

    def witness(self, law: str | None = None):
        for v in self.violations:
            if law is None or v.law == law:
                return v.witness
        return None

    def absorb(self, other: LawReport, prefix: str = "") -> LawReport:
        for law, n in other.checks.items():
            self.tick(prefix + law, n)
        for v in other.violations:
            self.fail(prefix + v.law, v.witness, v.detail)
        return self

    def same_outcome(self, other: LawReport) -> bool:
        return self.checks == other.checks and self.violations == other.violations

    def __str__(self):
        status = "pass" if self.ok else "FAIL"
        lines = [f"{self.subject}: {status} ({sum(self.checks.values())} checks)"]
        for v in self.violations:
            lines.append(f"  {v.law}: witness={v.witness!r} {v.detail}".rstrip())
        return "\n".join(lines)


def _jsonable(x):
    if isinstance(x, (str, int, float, bool)) or x is None:
        return x
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (set, frozenset)):
        return sorted((_jsonable(v) for v in x), key=repr)
    return repr(x)
