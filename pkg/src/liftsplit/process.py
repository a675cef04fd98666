# -*- coding: utf-8 -*-
"""Modifications of bounded processes induced by liftings.

A process indexed by ``Y`` with values on ``X`` is a table ``ξ_y(x)``. Given
liftings ``σ_y`` of the ``Ŝ_y``, the process ``ζ_y = σ_y(ξ_y)`` is a
modification of ``ξ``: ``ζ_y = ξ_y`` ``S_y``-almost everywhere at every
``y``, including the ``Q``-null ones.

Example:
    >>> from liftsplit.generators import no_rf
    >>> from liftsplit.splitting_chain import general_split
    >>> scenario = no_rf.NoRF().generate()
    >>> split = general_split(None, scenario.rcp, scenario.joint, scenario.rho)
    >>> xi = Process.from_matrix(split.product, [[1, 2], [3, 4]])
    >>> check_modification(xi, modify_process(xi, split), scenario.rcp).passed
    True
"""

from __future__ import annotations

from collections.abc import Sequence
from fractions import Fraction

import dataclasses
import logging

from liftsplit.errors import SpaceMismatch, ValidationError
from liftsplit.lifting import lift_function
from liftsplit.measure import SimpleFunction, format_rational, parse_rational
from liftsplit.product import ProductSpace, Rcp
from liftsplit.report import VerificationReport
from liftsplit.splitting_ac import SplitLiftings


__author__ = "Chariton Karamitas <huku@census-labs.com>"

__all__ = [
    "Process",
    "modify_process",
    "check_modification",
    "verify_modification",
]


_logger = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class Process:
    """A process ``y ↦ ξ_y`` of functions on ``X``.

    Args:
        product: The product space ``X × Y``.
        paths: ``paths[y]`` is the function ``ξ_y`` on ``X``.
    """

    product: ProductSpace
    paths: tuple[SimpleFunction, ...]

    def __post_init__(self) -> None:
        if len(self.paths) != self.product.ny:
            raise ValidationError(
                "process", f"Expected {self.product.ny} paths, got {len(self.paths)}"
            )
        for y, path in enumerate(self.paths):
            if path.space != self.product.x_space:
                raise ValidationError("process", "Path lives on another space", {"y": y})

    def __getitem__(self, y: int) -> SimpleFunction:
        return self.paths[y]

    def __add__(self, other: Process) -> Process:
        _require_same_product(self.product, other.product)
        return Process(self.product, tuple(a + b for a, b in zip(self.paths, other.paths)))

    def value(self, x: int, y: int) -> Fraction:
        return self.paths[y](x)

    def as_function(self) -> SimpleFunction:
        """Return the map ``(x, y) ↦ ξ_y(x)`` on the product."""
        product = self.product
        values = [Fraction(0)] * product.space.size
        for y, path in enumerate(self.paths):
            for x in range(product.nx):
                values[product.point(x, y)] = path(x)
        return SimpleFunction(product.space, tuple(values))

    def to_matrix(self) -> list[list[str]]:
        """Serialize as a ``|Y| × |X|`` matrix of rational strings."""
        return [[format_rational(v) for v in path.values] for path in self.paths]

    @classmethod
    def from_matrix(cls, product: ProductSpace, rows: Sequence[Sequence]) -> Process:
        rows = [[parse_rational(v) for v in row] for row in rows]
        if any(len(row) != product.nx for row in rows):
            raise ValidationError("process", f"Every path needs {product.nx} values")
        return cls(
            product, tuple(SimpleFunction(product.x_space, tuple(row)) for row in rows)
        )


def _require_same_product(first: ProductSpace, second: ProductSpace) -> None:
    if first != second:
        raise SpaceMismatch(
            "Objects live on different product spaces",
            {"nx": [first.nx, second.nx], "ny": [first.ny, second.ny]},
        )


def modify_process(xi: Process, split: SplitLiftings) -> Process:
    """Return ``ζ`` with ``ζ_y = σ_y(ξ_y)`` at every ``y``.

    Raises:
        SpaceMismatch: If ``xi`` and ``split`` live on different products.
    """
    _require_same_product(xi.product, split.product)
    return Process(
        xi.product,
        tuple(lift_function(s, path) for s, path in zip(split.sigma_y, xi.paths)),
    )


def check_modification(xi: Process, zeta: Process, rcp: Rcp) -> VerificationReport:
    """Check ``ξ_y = ζ_y`` ``S_y``-almost everywhere, one law per ``y``."""
    _require_same_product(xi.product, zeta.product)
    report = VerificationReport("modification")
    for y, s in enumerate(rcp):
        witness = None
        for x in s.support:
            if xi.value(x, y) != zeta.value(x, y):
                witness = {"y": y, "x": x}
                break
        report.add(f"ae_equal_{y}", witness is None, witness, xi.product.nx)
    return report


def verify_modification(
    xi: Process, zeta: Process, split: SplitLiftings, rcp: Rcp
) -> VerificationReport:
    """Check ``ζ`` as produced by :func:`modify_process`.

    Adds to :func:`check_modification` the fixed-point law ``σ_y(ζ_y) = ζ_y``,
    idempotence, and agreement of ``ζ_y`` with the ``y``-section of the
    lifted product function ``π(ξ̃)`` at every ``Q``-positive ``y``.
    """
    report = VerificationReport("modify-process")
    report.merge(check_modification(xi, zeta, rcp))

    witness = None
    for y, s in enumerate(split.sigma_y):
        if lift_function(s, zeta[y]) != zeta[y]:
            witness = {"y": y}
            break
    report.add("fixed_points", witness is None, witness, len(split.sigma_y))

    twice = modify_process(zeta, split)
    witness = None if twice == zeta else {"paths": twice.to_matrix()}
    report.add("idempotent", witness is None, witness, 1)

    # Measurability of (x, y) ↦ ζ_y(x) is automatic on finite power sets.
    report.add("measurable", True, None, 1)

    product = xi.product
    lifted = lift_function(split.pi, xi.as_function())
    q = split.rho.measure
    witness = None
    for y in range(product.ny):
        if q.mass(y) == 0:
            continue
        for x in range(product.nx):
            if lifted(product.point(x, y)) != zeta.value(x, y):
                witness = {"x": x, "y": y}
                break
        if witness is not None:
            break
    report.add("product_sections", witness is None, witness, product.ny)

    _logger.debug("Checked modification over %d paths", product.ny)
    return report
