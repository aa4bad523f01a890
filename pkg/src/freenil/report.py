"""Structured check reports shared by the library verifiers and the CLI."""

from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass(frozen=True)
class CheckItem:
    """One verified fact: a name, what was expected, what was computed."""

    name: str
    expected: str
    got: str
    ok: bool


@dataclass
class Report:
    """Outcome of a command or verification suite.

    ``status`` is "pass" iff every item is ok ("error" marks aborted
    runs).  ``timing`` lives outside the reproducible region: two runs on
    the same inputs must agree bit for bit once timing is stripped.
    """

    command: str
    items: list[CheckItem] = field(default_factory=list)
    data: dict = field(default_factory=dict)
    status: str = "pass"
    timing: float | None = None

    def add(self, name: str, expected, got, ok: bool | None = None) -> bool:
        if ok is None:
            ok = expected == got
        self.items.append(CheckItem(name, str(expected), str(got), bool(ok)))
        return bool(ok)

    def extend(self, items) -> None:
        self.items.extend(items)

    def finalize(self) -> "Report":
        if self.status != "error":
            self.status = "pass" if all(i.ok for i in self.items) else "fail"
        return self

    def core_dict(self) -> dict:
        """The reproducible region: everything except timing."""
        return {
            "command": self.command,
            "status": self.status,
            "items": [
                {"name": i.name, "expected": i.expected, "got": i.got, "ok": i.ok}
                for i in self.items
            ],
            "data": self.data,
        }

    def to_json(self) -> str:
        payload = self.core_dict()
        if self.timing is not None:
            payload["timing"] = {"seconds": round(self.timing, 6)}
        return json.dumps(payload, indent=2, sort_keys=False)

    def to_plain(self) -> str:
        lines = [f"command: {self.command}", f"status: {self.status}"]
        for i in self.items:
            mark = "ok" if i.ok else "FAIL"
            lines.append(f"  [{mark:4}] {i.name}: expected {i.expected}, got {i.got}")
        for key, value in self.data.items():
            if isinstance(value, list):
                lines.append(f"{key}:")
                lines.extend(f"  {v}" for v in value)
            else:
                lines.append(f"{key}: {value}")
        if self.timing is not None:
            lines.append(f"timing: {self.timing:.6f}s")
        return "\n".join(lines)


def item(name: str, expected, got, ok: bool | None = None) -> CheckItem:
    """Free-standing CheckItem constructor with the same defaulting as Report.add."""
    if ok is None:
        ok = expected == got
    return CheckItem(name, str(expected), str(got), bool(ok))
