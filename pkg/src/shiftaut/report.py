"""Verdict records shared by the checking operations and the CLI."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

PASS, FAIL, INCONCLUSIVE = "pass", "fail", "inconclusive"


@dataclass
class Report:
    """Outcome of a check.

    ``values`` and ``witness`` hold JSON-ready data. ``raw`` keeps the Python
    objects behind the witness for programmatic use and is never serialized.
    """

    name: str
    verdict: str
    values: dict = field(default_factory=dict)
    witness: Any = None
    label: str = "exact"
    notes: list = field(default_factory=list)
    raw: Any = field(default=None, repr=False, compare=False)

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    def __bool__(self) -> bool:
        return self.passed

    def to_json(self) -> dict:
        doc = {"name": self.name, "verdict": self.verdict, "label": self.label, "values": self.values}
        if self.witness is not None:
            doc["witness"] = self.witness
        if self.notes:
            doc["notes"] = list(self.notes)
        return doc


def verdict(ok: bool) -> str:
    return PASS if ok else FAIL
