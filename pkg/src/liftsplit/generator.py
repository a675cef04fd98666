# -*- coding: utf-8 -*-
"""Scenario generator interface.

Scenario generators build the fixtures suites run on: fixed counterexamples
that exhibit a phenomenon on the smallest possible spaces, and seeded random
scenarios for sweeps. Every generator returns a validated
:class:`liftsplit.scenario.Scenario`.
"""

from liftsplit.budget import DEFAULT_BUDGET, Budget
from liftsplit.errors import BudgetExceeded
from liftsplit.scenario import Scenario

import abc
import logging


__author__ = "Chariton Karamitas <huku@census-labs.com>"

__all__ = ["Generator"]


class Generator(abc.ABC):
    """Base class inherited by all scenario generators.

    Args:
        nx: Number of points of ``X``.
        ny: Number of points of ``Y``.
        budget: Exhaustive caps the generated scenario must respect.
    """

    def __init__(self, nx: int, ny: int, budget: Budget = DEFAULT_BUDGET) -> None:
        super(Generator, self).__init__()
        self._logger = logging.getLogger(self.__class__.__name__)
        if nx * ny > budget.max_points:
            raise BudgetExceeded(
                f"Product of {nx * ny} points exceeds {budget.max_points}",
                {"points": nx * ny},
            )
        self._nx = nx
        self._ny = ny

    @abc.abstractmethod
    def generate(self) -> Scenario:
        """Generate a scenario.

        Returns:
            The generated, validated scenario.
        """
        raise NotImplementedError
