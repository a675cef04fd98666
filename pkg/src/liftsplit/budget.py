# -*- coding: utf-8 -*-
"""Exhaustive-search budgets."""

import dataclasses


__author__ = "Chariton Karamitas <huku@census-labs.com>"

__all__ = ["Budget", "DEFAULT_BUDGET"]


@dataclasses.dataclass(frozen=True)
class Budget:
    """Caps on exhaustive work.

    Args:
        max_points: Largest number of atoms for which all events of an algebra
            are swept; beyond it sweeps sample events.
        max_candidates: Largest number of lifting families searched
            exhaustively.
        spot_checks: Number of sampled events when sweeps fall back to
            randomized checks.
        max_repair_passes: Guard for fixpoint loops.
    """

    max_points: int = 12
    max_candidates: int = 10**6
    spot_checks: int = 4096
    max_repair_passes: int = 4096


DEFAULT_BUDGET = Budget()
