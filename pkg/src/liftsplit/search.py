# -*- coding: utf-8 -*-
"""Rectangle-formula witness search base definitions.

This module exports class :class:`WitnessSearch`, subclassed by witness search
implementations; currently the *exhaustive* search and the *genetic* search.

Given a product r.c.p. ``{S_y}``, a lifting ``ρ`` of ``Q`` and the joint
measure ``R``, a witness is a family ``{σ_y}`` of liftings, ``σ_y`` a lifting
of ``S_y``, for which some lifting ``π`` of ``R`` satisfies (RF)::

    π(A × B) = ⋃_{y ∈ ρ(B)} σ_y(A) × {y}

On finite spaces (RF) pins ``π`` down to the anchor map
``(x, y) ↦ (σ_y.anchor(x), ρ.anchor(y))``, and the family is a witness exactly
when every point is mapped to an ``R``-positive point. Searches enumerate
families through their *genes*: one gene per ``S_y``-null point ``x`` of every
``y``, holding the index of its anchor among the ``S_y``-positive points.
"""

from __future__ import annotations

from collections.abc import Sequence
from typing import Any

import abc
import dataclasses
import logging
import math

from liftsplit.budget import DEFAULT_BUDGET, Budget
from liftsplit.lifting import AnchorLifting
from liftsplit.product import JointMeasure, Rcp


__author__ = "Chariton Karamitas <huku@census-labs.com>"

__all__ = ["SearchResult", "WitnessSearch"]


@dataclasses.dataclass(frozen=True)
class SearchResult:
    """Outcome of a witness search.

    Args:
        found: Whether a witness family was found.
        family: The witness family ``{σ_y}``, when found.
        obstruction: First obstruction of the first family examined, when
            not found.
        mode: ``"exhaustive"`` or ``"heuristic"``.
        candidates: Number of families examined.
    """

    found: bool
    family: tuple[AnchorLifting, ...] | None
    obstruction: dict[str, Any] | None
    mode: str
    candidates: int

    def to_dict(self) -> dict[str, Any]:
        return {
            "found": self.found,
            "family": None if self.family is None else [s.to_list() for s in self.family],
            "obstruction": self.obstruction,
            "mode": self.mode,
            "candidates": self.candidates,
        }


class WitnessSearch(abc.ABC):
    """Base class for implementing rectangle-formula witness searches.

    Args:
        rcp: The product r.c.p.
        rho: Lifting of ``Q``.
        joint: The joint measure.
        budget: Search limits.
        seed: Seed for randomized searches.
    """

    mode = "exhaustive"

    def __init__(
        self,
        rcp: Rcp,
        rho: AnchorLifting,
        joint: JointMeasure,
        budget: Budget = DEFAULT_BUDGET,
        seed: int = 0,
    ) -> None:
        super(WitnessSearch, self).__init__()
        self._logger = logging.getLogger(self.__class__.__name__)
        self._rcp = rcp
        self._rho = rho
        self._joint = joint
        self._budget = budget
        self._seed = seed

        product = joint.product
        self._genes: list[tuple[int, int]] = []
        self._choices: list[list[int]] = []
        for y, s in enumerate(rcp):
            positive = [x for x in range(product.nx) if s.mass(x) > 0]
            for x in range(product.nx):
                if s.mass(x) == 0:
                    self._genes.append((x, y))
                    self._choices.append(positive)

    @property
    def num_candidates(self) -> int:
        return math.prod(len(choices) for choices in self._choices)

    def _decode(self, genes: Sequence[int]) -> tuple[AnchorLifting, ...]:
        """Turn a gene vector into a family of liftings."""
        nx = self._joint.product.nx
        anchors = [list(range(nx)) for _ in range(len(self._rcp))]
        for (x, y), choices, gene in zip(self._genes, self._choices, genes):
            anchors[y][x] = choices[int(gene)]
        return tuple(
            AnchorLifting(s, tuple(anchor)) for s, anchor in zip(self._rcp, anchors)
        )

    def _images(self, genes: Sequence[int]) -> list[tuple[int, int]]:
        """Return the ``(x, y)`` image of every product point under the anchor
        map forced by (RF)."""
        product = self._joint.product
        rho = self._rho.anchor
        anchors = [list(range(product.nx)) for _ in range(product.ny)]
        for (x, y), choices, gene in zip(self._genes, self._choices, genes):
            anchors[y][x] = choices[int(gene)]
        return [
            (anchors[y][x], rho[y])
            for x in range(product.nx)
            for y in range(product.ny)
        ]

    def _obstructions(self, genes: Sequence[int]) -> list[int]:
        """Return the product points mapped to ``R``-null points."""
        joint = self._joint
        return [
            p
            for p, (x, y) in enumerate(self._images(genes))
            if joint.mass(x, y) == 0
        ]

    def _obstruction(self, genes: Sequence[int]) -> dict[str, Any] | None:
        obstructions = self._obstructions(genes)
        if not obstructions:
            return None
        product = self._joint.product
        p = obstructions[0]
        x, y = product.coords(p)
        image_x, image_y = self._images(genes)[p]
        return {
            "point": p,
            "x": x,
            "y": y,
            "rectangle": {"a": [image_x], "b": [image_y]},
        }

    @abc.abstractmethod
    def _search(self) -> tuple[list[int] | None, dict[str, Any] | None, int]:
        """Run the search.

        This is an abstract method that descendants of this class must
        implement.

        Returns:
            A tuple holding the witness genes (or ``None``), the obstruction
            to report when no witness was found and the number of families
            examined.
        """
        return None, None, 0

    def search(self) -> SearchResult:
        """Search for a witness family.

        Returns:
            The search result.
        """
        self._logger.info(
            "Searching %d families (%d genes)", self.num_candidates, len(self._genes)
        )
        genes, obstruction, candidates = self._search()
        if genes is not None:
            self._logger.info("Witness found after %d families", candidates)
            return SearchResult(True, self._decode(genes), None, self.mode, candidates)
        self._logger.info("No witness among %d families", candidates)
        return SearchResult(False, None, obstruction, self.mode, candidates)
