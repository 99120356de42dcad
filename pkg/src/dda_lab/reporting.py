"""Uniform pass/fail reporting for identity checks.

Every verification routine returns a Report: a list of named checks, each
with an optional witness describing the exact failing element.  Reports are
deterministic (checks are kept sorted by rule id when merged in parallel)
and serialize to the JSON shape used by the CLI:
    {rule: {"holds": bool, "witness": ...}}
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Check:
    rule: str
    holds: bool
    witness: str | None = None

    def as_json(self):
        out = {"holds": self.holds}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


@dataclass
class Report:
    checks: list = field(default_factory=list)

    def add(self, rule: str, holds: bool, witness: str | None = None):
        self.checks.append(Check(rule, bool(holds), witness if not holds else witness))
        return holds

    def require(self, rule: str, holds: bool, witness: str | None = None):
        """add(), but raise if the check fails; for builder postconditions."""
        self.add(rule, holds, witness)
        if not holds:
            raise CheckFailure(rule, witness)
        return True

    def merge(self, other: "Report", prefix: str = ""):
        for c in other.checks:
            rule = f"{prefix}{c.rule}" if prefix else c.rule
            self.checks.append(Check(rule, c.holds, c.witness))
        return self

    def ok(self) -> bool:
        return all(c.holds for c in self.checks)

    def failures(self):
        return [c for c in self.checks if not c.holds]

    def sorted(self) -> "Report":
        return Report(sorted(self.checks, key=lambda c: c.rule))

    def as_json(self):
        return {c.rule: c.as_json() for c in self.sorted().checks}

    def render_text(self) -> str:
        lines = []
        for c in self.sorted().checks:
            mark = "pass" if c.holds else "FAIL"
            line = f"[{mark}] {c.rule}"
            if not c.holds and c.witness:
                line += f"  -- {c.witness}"
            lines.append(line)
        return "\n".join(lines)


class CheckFailure(RuntimeError):
    def __init__(self, rule, witness=None):
        self.rule = rule
        self.witness = witness
        msg = f"check failed: {rule}"
        if witness:
            msg += f" ({witness})"
        super().__init__(msg)
