# -*- coding: utf-8 -*-
"""Exhaustive rectangle-formula witness search."""

from typing import Any

import itertools

from liftsplit.errors import BudgetExceeded
from liftsplit.search import WitnessSearch


__author__ = "Chariton Karamitas <huku@census-labs.com>"

__all__ = ["Exhaustive"]


class Exhaustive(WitnessSearch):
    """Examine every family of liftings, in lexicographic gene order.

    The family of the first ``y`` varies slowest, so the order agrees with
    taking the product of :func:`liftsplit.lifting.enumerate_liftings` over
    ``y``.
    """

    def _search(self) -> tuple[list[int] | None, dict[str, Any] | None, int]:

        num_candidates = self.num_candidates
        if num_candidates > self._budget.max_candidates:
            raise BudgetExceeded(
                f"{num_candidates} families exceed the budget of "
                f"{self._budget.max_candidates}",
                {"candidates": num_candidates},
            )

        first_obstruction = None
        candidates = 0

        for genes in itertools.product(*(range(len(c)) for c in self._choices)):
            candidates += 1
            obstruction = self._obstruction(genes)
            if obstruction is None:
                return list(genes), None, candidates
            if first_obstruction is None:
                first_obstruction = obstruction
                self._logger.debug("First obstruction %r", obstruction)

        return None, first_obstruction, candidates
