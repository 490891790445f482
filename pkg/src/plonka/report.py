"""Check records and reports shared by the validators and the CLI.

A report is a flat list of per-check records plus a summary.  Records are
deterministic given inputs and caps; wall-clock timing lives only in the
summary so that reports can be compared with timing excluded.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass
class CheckRecord:
    name: str
    passed: bool
    checked: int = 0
    out_of_fragment: int = 0
    witnesses: list = field(default_factory=list)

    def to_dict(self):
        return {
            "check": self.name,
            "status": "pass" if self.passed else "fail",
            "checked": self.checked,
            "out_of_fragment": self.out_of_fragment,
            "witnesses": [str(w) for w in self.witnesses],
        }


class Report:
    def __init__(self, tool: str, config: dict | None = None):
        self.tool = tool
        self.config = dict(config or {})
        self.records: list[CheckRecord] = []
        self.elapsed: float | None = None

    def add(self, record: CheckRecord):
        self.records.append(record)
        return record

    def record(self, name, passed, checked=0, out_of_fragment=0, witnesses=()):
        return self.add(CheckRecord(name, passed, checked, out_of_fragment, list(witnesses)))

    def extend(self, other: "Report"):
        self.records.extend(other.records)

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.records)

    def summary(self):
        out = {
            "tool": self.tool,
            "config": self.config,
            "checks": len(self.records),
            "failed": sum(1 for r in self.records if not r.passed),
            "status": "pass" if self.ok else "fail",
        }
        if self.elapsed is not None:
            out["elapsed_s"] = round(self.elapsed, 3)
        return out

    def to_jsonl(self) -> str:
        lines = [json.dumps(r.to_dict(), sort_keys=True) for r in self.records]
        lines.append(json.dumps({"summary": self.summary()}, sort_keys=True))
        return "\n".join(lines) + "\n"

    def comparable_jsonl(self) -> str:
        """Report text with the timing field stripped, for determinism tests."""
        summary = self.summary()
        summary.pop("elapsed_s", None)
        lines = [json.dumps(r.to_dict(), sort_keys=True) for r in self.records]
        lines.append(json.dumps({"summary": summary}, sort_keys=True))
        return "\n".join(lines) + "\n"
