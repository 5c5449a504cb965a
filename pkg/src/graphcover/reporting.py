"""Uniform pass/fail reports for certificate verifiers."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Tuple


@dataclass
class CheckReport:
    """Named checks with outcomes; passed only when every check holds."""

    checks: List[Tuple[str, bool, str]] = field(default_factory=list)

    def add(self, name: str, ok: bool, detail: str = "") -> bool:
        self.checks.append((name, bool(ok), detail))
        return bool(ok)

    @property
    def passed(self) -> bool:
        return all(ok for _, ok, _ in self.checks)

    def failures(self) -> List[str]:
        return [name for name, ok, _ in self.checks if not ok]

    def format(self) -> str:
        lines = []
        for name, ok, detail in self.checks:
            mark = "PASS" if ok else "FAIL"
            lines.append(f"{mark} {name}" + (f": {detail}" if detail else ""))
        lines.append("verdict: " + ("PASS" if self.passed else "FAIL"))
        return "\n".join(lines)
