# -*- coding: utf-8 -*-
"""Verification reports.

Every verification in LiftSplit produces a :class:`VerificationReport`, a list
of named laws, each passing or failing. Failing laws always carry a witness,
a JSON-friendly mapping from which the failure can be reproduced by hand.
"""

from __future__ import annotations

from typing import Any

import dataclasses


__author__ = "Chariton Karamitas <huku@census-labs.com>"

__all__ = ["Law", "VerificationReport"]


@dataclasses.dataclass
class Law:
    """Outcome of checking one law.

    Args:
        name: Law name, e.g. ``"intersection"``.
        passed: Whether the law holds on every checked object.
        witness: Reproducible counterexample for failing laws.
        checked: Number of objects (events, rectangles, points) checked.
        mode: ``"exhaustive"`` or ``"sampled"``.
    """

    name: str
    passed: bool
    witness: dict[str, Any] | None = None
    checked: int = 0
    mode: str = "exhaustive"

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "pass": self.passed,
            "witness": self.witness,
            "checked": self.checked,
            "mode": self.mode,
        }


@dataclasses.dataclass
class VerificationReport:
    """Collection of law outcomes for one suite."""

    suite: str
    laws: list[Law] = dataclasses.field(default_factory=list)
    counts: dict[str, int] = dataclasses.field(default_factory=dict)
    notes: list[str] = dataclasses.field(default_factory=list)
    timing: float = 0.0

    @property
    def passed(self) -> bool:
        return all(law.passed for law in self.laws)

    def add(
        self,
        name: str,
        passed: bool,
        witness: dict[str, Any] | None = None,
        checked: int = 0,
        mode: str = "exhaustive",
    ) -> Law:
        assert passed or witness is not None, f"Failing law {name} has no witness"
        law = Law(name, passed, None if passed else witness, checked, mode)
        self.laws.append(law)
        return law

    def merge(self, other: VerificationReport, prefix: str = "") -> None:
        """Append the laws and notes of ``other``, prefixing law names."""
        for law in other.laws:
            self.laws.append(dataclasses.replace(law, name=prefix + law.name))
        self.notes.extend(other.notes)
        for key, value in other.counts.items():
            self.counts[prefix + key] = self.counts.get(prefix + key, 0) + value

    def law(self, name: str) -> Law:
        for law in self.laws:
            if law.name == name:
                return law
        raise KeyError(name)

    def failed(self) -> list[str]:
        return [law.name for law in self.laws if not law.passed]

    def to_dict(self, timing: bool = True) -> dict[str, Any]:
        result: dict[str, Any] = {
            "suite": self.suite,
            "pass": self.passed,
            "laws": [law.to_dict() for law in self.laws],
            "counts": dict(self.counts),
            "notes": list(self.notes),
        }
        if timing:
            result["timing"] = round(self.timing, 6)
        return result
