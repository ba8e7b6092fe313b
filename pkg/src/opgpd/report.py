from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

# Bound on stored counterexamples per check.
MAX_COUNTEREXAMPLES = 10


@dataclass(frozen=True)
class Counterexample:
    """A failing instance of a named check, as a tuple of element indices."""

    check: str
    elements: tuple[int, ...]
    detail: str = ""

    def prefixed(self, prefix: str) -> "Counterexample":
        return Counterexample(f"{prefix}/{self.check}", self.elements, self.detail)

    def to_json(self) -> dict:
        out = {"check": self.check, "elements": list(self.elements)}
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass
class ValidationReport:
    """Outcome of a validator. An empty failure list means the structure is valid."""

    checks: list[str] = field(default_factory=list)
    failures: list[Counterexample] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def record(self, check: str, instances: Iterable[tuple], detail: str = "") -> bool:
        """Register ``check`` and any failing instances. Returns True if it passed."""
        self.checks.append(check)
        n = 0
        for inst in instances:
            if n >= MAX_COUNTEREXAMPLES:
                break
            self.failures.append(
                Counterexample(check, tuple(int(v) for v in inst), detail)
            )
            n += 1
        return n == 0

    def merge(self, other: "ValidationReport", prefix: str | None = None) -> None:
        for name in other.checks:
            self.checks.append(f"{prefix}/{name}" if prefix else name)
        for cx in other.failures:
            self.failures.append(cx.prefixed(prefix) if prefix else cx)

    def failed_checks(self) -> list[str]:
        seen: dict[str, None] = {}
        for cx in self.failures:
            seen.setdefault(cx.check, None)
        return list(seen)

    def by_check(self, check: str) -> list[Counterexample]:
        return [cx for cx in self.failures if cx.check == check]

    def __str__(self) -> str:
        if self.ok:
            return f"ok ({len(self.checks)} checks)"
        lines = [f"{len(self.failures)} failure(s):"]
        lines += [f"  {cx.check} {cx.elements} {cx.detail}".rstrip() for cx in self.failures]
        return "\n".join(lines)
