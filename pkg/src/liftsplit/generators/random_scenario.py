# -*- coding: utf-8 -*-
"""Seeded random scenarios.

Masses are small random integers normalized to exact rationals. The first
``nx - null_x`` points of ``X`` and ``ny - null_y`` points of ``Y`` (after a
random relabelling) are positive; every positive point of either factor
carries mass, and null points carry none. At ``Q``-null ``y`` the r.c.p. is
either copied from the lowest positive ``y`` or drawn at random over all of
``X``, possibly charging ``P``-null points.
"""

from fractions import Fraction

import numpy

from liftsplit.budget import DEFAULT_BUDGET, Budget
from liftsplit.errors import PreconditionFailed
from liftsplit.generator import Generator
from liftsplit.lifting import AnchorLifting
from liftsplit.measure import FiniteSpace, Measure
from liftsplit.product import JointMeasure, NullYPolicy, ProductSpace, rcp_from_joint
from liftsplit.scenario import Scenario


__author__ = "Chariton Karamitas <huku@census-labs.com>"

__all__ = ["RandomScenario"]


_MAX_WEIGHT = 3


class RandomScenario(Generator):
    """Random scenario generator.

    Args:
        nx: Number of points of ``X``.
        ny: Number of points of ``Y``.
        null_x: How many points of ``X`` are ``P``-null.
        null_y: How many points of ``Y`` are ``Q``-null.
        seed: Seed of the random number generator.
        null_rcp: ``"copy"`` or ``"random"``, the r.c.p. at ``Q``-null ``y``.
        budget: Exhaustive caps.
    """

    def __init__(
        self,
        nx: int,
        ny: int,
        null_x: int = 0,
        null_y: int = 0,
        seed: int = 0,
        null_rcp: str = "copy",
        budget: Budget = DEFAULT_BUDGET,
    ) -> None:
        super(RandomScenario, self).__init__(nx, ny, budget)
        if not (0 <= null_x < nx and 0 <= null_y < ny):
            raise PreconditionFailed(
                "Each factor needs a positive point", {"null_x": null_x, "null_y": null_y}
            )
        if null_rcp not in ("copy", "random"):
            raise PreconditionFailed(f"Unknown null r.c.p. mode {null_rcp!r}")
        self._null_x = null_x
        self._null_y = null_y
        self._seed = seed
        self._null_rcp = null_rcp

    def _positive_weights(self, rng: numpy.random.Generator, rows: int, cols: int) -> numpy.ndarray:
        """Return a random integer matrix with no zero row and no zero column."""
        weights = rng.integers(0, _MAX_WEIGHT + 1, size=(rows, cols))
        for i in range(max(rows, cols)):
            r, c = i % rows, i % cols
            if weights[r].sum() == 0 or weights[:, c].sum() == 0:
                weights[r, c] = rng.integers(1, _MAX_WEIGHT + 1)
        return weights

    def _random_measure(self, rng: numpy.random.Generator, space: FiniteSpace) -> Measure:
        weights = rng.integers(0, _MAX_WEIGHT + 1, size=space.size)
        if weights.sum() == 0:
            weights[rng.integers(space.size)] = 1
        total = int(weights.sum())
        return Measure.from_masses(space, [Fraction(int(w), total) for w in weights])

    def generate(self) -> Scenario:
        rng = numpy.random.default_rng(self._seed)
        nx, ny = self._nx, self._ny

        positive_x = sorted(rng.permutation(nx)[: nx - self._null_x].tolist())
        positive_y = sorted(rng.permutation(ny)[: ny - self._null_y].tolist())
        weights = self._positive_weights(rng, len(positive_x), len(positive_y))
        total = int(weights.sum())

        matrix = [[Fraction(0)] * ny for _ in range(nx)]
        for i, x in enumerate(positive_x):
            for j, y in enumerate(positive_y):
                matrix[x][y] = Fraction(int(weights[i, j]), total)

        x_space, y_space = FiniteSpace.of_size(nx), FiniteSpace.of_size(ny)
        product = ProductSpace(x_space, y_space)
        joint = JointMeasure.from_matrix(product, matrix)

        if self._null_rcp == "copy":
            rcp = rcp_from_joint(joint, NullYPolicy.COPY_LOWEST)
        else:
            explicit = {
                y: self._random_measure(rng, x_space)
                for y in range(ny)
                if y not in positive_y
            }
            rcp = rcp_from_joint(joint, NullYPolicy.EXPLICIT, explicit)

        anchor = [
            y if y in positive_y else int(rng.choice(positive_y)) for y in range(ny)
        ]
        rho = AnchorLifting(joint.q, tuple(anchor))

        self._logger.debug(
            "Generated %dx%d scenario, positive x %s, positive y %s",
            nx,
            ny,
            positive_x,
            positive_y,
        )
        return Scenario(
            joint,
            rcp,
            rho,
            name=f"random-{nx}x{ny}-{self._seed}",
            seed=self._seed,
        )
