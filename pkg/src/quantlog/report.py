"""Structured verification reports with a machine-readable summary block."""

from __future__ import annotations

from dataclasses import dataclass, field

KEEP = 25   # counterexamples kept verbatim per report


@dataclass
class Report:
    suite: str
    truncation: str = ""
    instances: int = 0
    failed: int = 0
    skipped: int = 0
    warned: int = 0
    failures: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    sections: list["Report"] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.failed == 0 and all(s.ok for s in self.sections)

    def __bool__(self):
        return self.ok

    def check(self, cond: bool, msg) -> bool:
        """Count one instance; record ``msg`` (a string or a thunk) on failure."""
        self.instances += 1
        if not cond:
            self.fail(msg() if callable(msg) else msg, count=False)
        return cond

    def fail(self, msg: str, count: bool = True):
        if count:
            self.instances += 1
        self.failed += 1
        if len(self.failures) < KEEP:
            self.failures.append(msg)

    def warn(self, msg: str):
        self.warned += 1
        if len(self.warnings) < KEEP:
            self.warnings.append(msg)

    def note(self, msg: str):
        self.notes.append(msg)

    def add(self, sub: "Report") -> "Report":
        self.sections.append(sub)
        return sub

    def find(self, suite: str) -> "Report | None":
        """The first section (depth first, self included) with this suite name."""
        if self.suite == suite:
            return self
        for s in self.sections:
            got = s.find(suite)
            if got is not None:
                return got
        return None

    def totals(self) -> tuple[int, int, int, int]:
        inst, fail, skip, warn = self.instances, self.failed, self.skipped, self.warned
        for s in self.sections:
            a, b, c, d = s.totals()
            inst, fail, skip, warn = inst + a, fail + b, skip + c, warn + d
        return inst, fail, skip, warn

    def render(self, indent: str = "") -> str:
        lines = [f"{indent}== {self.suite} =="]
        for n in self.notes:
            lines.append(f"{indent}  note: {n}")
        if self.instances or not self.sections:
            lines.append(f"{indent}  instances: {self.instances}, failed: {self.failed}, skipped: {self.skipped}")
        for w in self.warnings:
            lines.append(f"{indent}  warning: {w}")
        for f in self.failures:
            lines.append(f"{indent}  counterexample: {f}")
        for s in self.sections:
            lines.append(s.render(indent + "  "))
        return "\n".join(lines)

    def summary(self) -> str:
        inst, fail, skip, warn = self.totals()
        lines = [
            "summary:",
            f"  suite: {self.suite}",
            f"  instances: {inst}",
            f"  passed: {inst - fail}",
            f"  failed: {fail}",
            f"  skipped: {skip}",
            f"  warnings: {warn}",
        ]
        if self.truncation:
            lines.append(f"  truncation: {self.truncation}")
        lines.append(f"  status: {'pass' if self.ok else 'fail'}")
        return "\n".join(lines)

    def text(self) -> str:
        return self.render() + "\n\n" + self.summary() + "\n"
