# -*- coding: utf-8 -*-
"""Product spaces, joint measures and product regular conditional probabilities.

Points of a product ``X × Y`` are flat-indexed x-major, that is point
``(x, y)`` has index ``x * |Y| + y``. A joint measure ``R`` lives on the power
set of the product; its marginals are ``P`` on ``X`` and ``Q`` on ``Y``. A
product r.c.p. is a family ``{S_y}`` of probabilities on ``X``, one for *every*
``y`` including the ``Q``-null ones, such that::

    R(A × B) = Σ_{y ∈ B} S_y(A) Q({y})

The joint measure cannot determine ``S_y`` at ``Q``-null points, so these are
explicit data, either copied from a positive point or supplied by the caller.

This module also hosts the checks relating an r.c.p. to a lifting ``ρ`` of
``Q``: condition (IT), strongness of ``ρ`` for the topology generated by the
sets ``B_A = {y : S_y(A) > 0}`` and the (finite) uniform absolute continuity.
"""

from __future__ import annotations

from collections.abc import Iterator, Mapping, Sequence
from fractions import Fraction
from typing import Any

import dataclasses
import enum
import functools
import logging

from liftsplit.budget import DEFAULT_BUDGET, Budget
from liftsplit.errors import NotAbsolutelyContinuous, ValidationError
from liftsplit.event import Event
from liftsplit.lifting import AnchorLifting, DensityTable
from liftsplit.measure import (
    FiniteSpace,
    Measure,
    SigmaAlgebra,
    SimpleFunction,
    format_rational,
)
from liftsplit.report import VerificationReport


__author__ = "Chariton Karamitas <huku@census-labs.com>"

__all__ = [
    "ProductSpace",
    "JointMeasure",
    "Rcp",
    "NullYPolicy",
    "Counterexample",
    "product_measure",
    "marginals",
    "rcp_from_joint",
    "make_rcp_ac",
    "validate_rcp",
    "verify_disintegration",
    "disintegrate_integral",
    "radon_nikodym",
    "support_event",
    "positive_section_set",
    "positive_section_sets",
    "generated_topology",
    "check_strong",
    "check_IT",
    "ac_witness",
    "check_uniform_ac",
]


_logger = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class ProductSpace:
    """The product of two finite spaces.

    Args:
        x_space: First factor.
        y_space: Second factor.
    """

    x_space: FiniteSpace
    y_space: FiniteSpace

    @property
    def nx(self) -> int:
        return self.x_space.size

    @property
    def ny(self) -> int:
        return self.y_space.size

    @functools.cached_property
    def space(self) -> FiniteSpace:
        return FiniteSpace(
            tuple(
                f"({xl},{yl})" for xl in self.x_space.labels for yl in self.y_space.labels
            )
        )

    @functools.cached_property
    def _rows(self) -> tuple[Event, ...]:
        size = self.nx * self.ny
        return tuple(
            Event(sum(1 << (x * self.ny + y) for x in range(self.nx)), size)
            for y in range(self.ny)
        )

    def point(self, x: int, y: int) -> int:
        return x * self.ny + y

    def coords(self, p: int) -> tuple[int, int]:
        x, y = divmod(p, self.ny)
        return x, y

    def row(self, y: int) -> Event:
        """Return ``X × {y}``."""
        return self._rows[y]

    def rectangle(self, a: int, b: int) -> Event:
        mask = 0
        for x in Event(int(a), self.nx):
            mask |= int(b) << (x * self.ny)
        return Event(mask, self.nx * self.ny)

    def section_y(self, e: int, y: int) -> Event:
        """Return ``E^y = {x : (x, y) ∈ E}``."""
        ny = self.ny
        mask = 0
        for x in range(self.nx):
            if e >> (x * ny + y) & 1:
                mask |= 1 << x
        return Event(mask, self.nx)

    def section_x(self, e: int, x: int) -> Event:
        """Return ``E_x = {y : (x, y) ∈ E}``."""
        return Event(int(e) >> (x * self.ny) & ((1 << self.ny) - 1), self.ny)

    def from_sections(self, sections: Sequence[int]) -> Event:
        """Return the event whose ``y``-section is ``sections[y]``."""
        assert len(sections) == self.ny, "Expected one section per y"
        mask = 0
        for y, section in enumerate(sections):
            for x in Event(int(section), self.nx):
                mask |= 1 << (x * self.ny + y)
        return Event(mask, self.nx * self.ny)

    def product_algebra(
        self, x_algebra: SigmaAlgebra, y_algebra: SigmaAlgebra | None = None
    ) -> SigmaAlgebra:
        """Return ``x_algebra ⊗ y_algebra`` (``y_algebra`` defaults to the power
        set of ``Y``)."""
        if y_algebra is None:
            y_algebra = SigmaAlgebra.power_set(self.y_space)
        return SigmaAlgebra(
            self.space,
            tuple(
                self.rectangle(a, b) for a in x_algebra.atoms for b in y_algebra.atoms
            ),
        )

    def coords_dict(self, p: int) -> dict[str, int]:
        x, y = self.coords(p)
        return {"x": x, "y": y}


@dataclasses.dataclass(frozen=True)
class JointMeasure:
    """A probability ``R`` on the power set of a product space.

    Args:
        product: The product space.
        r: Measure on the power set of ``product.space``.
    """

    product: ProductSpace
    r: Measure

    def __post_init__(self) -> None:
        if self.r.space != self.product.space or not self.r.algebra.is_power_set:
            raise ValidationError("product", "Joint measure must live on the product power set")

    @classmethod
    def from_matrix(
        cls, product: ProductSpace, matrix: Sequence[Sequence]
    ) -> JointMeasure:
        """Create a joint measure from a dense ``|X| × |Y|`` matrix."""
        if len(matrix) != product.nx or any(len(row) != product.ny for row in matrix):
            raise ValidationError(
                "product", f"Expected a {product.nx}x{product.ny} matrix"
            )
        masses = [Fraction(v) for row in matrix for v in row]
        return cls(product, Measure.from_masses(product.space, masses))

    def mass(self, x: int, y: int) -> Fraction:
        return self.r.mass(self.product.point(x, y))

    def matrix(self) -> list[list[Fraction]]:
        return [
            [self.mass(x, y) for y in range(self.product.ny)]
            for x in range(self.product.nx)
        ]

    @functools.cached_property
    def p(self) -> Measure:
        product = self.product
        return Measure.from_masses(
            product.x_space,
            [sum((self.mass(x, y) for y in range(product.ny)), Fraction(0)) for x in range(product.nx)],
        )

    @functools.cached_property
    def q(self) -> Measure:
        product = self.product
        return Measure.from_masses(
            product.y_space,
            [sum((self.mass(x, y) for x in range(product.nx)), Fraction(0)) for y in range(product.ny)],
        )

    def measure_of(self, e: int) -> Fraction:
        return self.r.measure_of(e)

    def rectangle_measure(self, a: int, b: int) -> Fraction:
        return self.r.measure_of(self.product.rectangle(a, b))


@enum.unique
class NullYPolicy(enum.IntEnum):
    """How :func:`rcp_from_joint` defines ``S_y`` at ``Q``-null ``y``."""

    COPY_LOWEST = 0
    EXPLICIT = 1


@dataclasses.dataclass(frozen=True)
class Rcp:
    """A product regular conditional probability ``{S_y : y ∈ Y}``.

    Args:
        product: The product space.
        family: ``family[y]`` is ``S_y``, a power-set measure on ``X``.
    """

    product: ProductSpace
    family: tuple[Measure, ...]

    def __post_init__(self) -> None:
        if len(self.family) != self.product.ny:
            raise ValidationError(
                "product", f"Expected {self.product.ny} conditional measures"
            )
        for y, s in enumerate(self.family):
            if s.space != self.product.x_space or not s.algebra.is_power_set:
                raise ValidationError(
                    "product", f"S_{y} must live on the power set of X", {"y": y}
                )

    def __getitem__(self, y: int) -> Measure:
        return self.family[y]

    def __len__(self) -> int:
        return len(self.family)

    def __iter__(self) -> Iterator[Measure]:
        return iter(self.family)

    def replace(self, changes: Mapping[int, Measure]) -> Rcp:
        return Rcp(
            self.product,
            tuple(changes.get(y, s) for y, s in enumerate(self.family)),
        )

    def to_matrix(self) -> list[list[Fraction]]:
        return [list(s.masses) for s in self.family]

    @classmethod
    def from_matrix(cls, product: ProductSpace, rows: Sequence[Sequence]) -> Rcp:
        return cls(
            product,
            tuple(
                Measure.from_masses(product.x_space, [Fraction(v) for v in row])
                for row in rows
            ),
        )


@dataclasses.dataclass(frozen=True)
class Counterexample:
    """A rectangle ``A × B`` and a point ``y`` witnessing a failure of (IT)."""

    a: Event
    b: Event
    y: int

    def to_dict(self) -> dict[str, Any]:
        return {"a": self.a.to_list(), "b": self.b.to_list(), "y": self.y}


def product_measure(p: Measure, q: Measure) -> JointMeasure:
    product = ProductSpace(p.space, q.space)
    return JointMeasure.from_matrix(
        product, [[p.mass(x) * q.mass(y) for y in range(q.space.size)] for x in range(p.space.size)]
    )


def marginals(joint: JointMeasure) -> tuple[Measure, Measure]:
    return joint.p, joint.q


def rcp_from_joint(
    joint: JointMeasure,
    null_policy: NullYPolicy = NullYPolicy.COPY_LOWEST,
    explicit: Mapping[int, Measure] | None = None,
) -> Rcp:
    """Disintegrate ``R`` along ``Y``.

    For ``Q``-positive ``y``, ``S_y(A) = R(A × {y}) / Q({y})``. For ``Q``-null
    ``y`` the policy decides: :attr:`NullYPolicy.COPY_LOWEST` copies ``S_y*``
    of the lowest ``Q``-positive ``y*``, :attr:`NullYPolicy.EXPLICIT` takes
    ``explicit[y]``.

    Raises:
        ValidationError: If an explicit measure is missing.
    """
    product = joint.product
    q = joint.q
    family: list[Measure | None] = []
    for y in range(product.ny):
        qy = q.mass(y)
        if qy > 0:
            family.append(
                Measure.from_masses(
                    product.x_space, [joint.mass(x, y) / qy for x in range(product.nx)]
                )
            )
        else:
            family.append(None)

    lowest = next(s for s in family if s is not None)
    for y, s in enumerate(family):
        if s is not None:
            continue
        if null_policy == NullYPolicy.COPY_LOWEST:
            family[y] = lowest
        elif explicit is None or y not in explicit:
            raise ValidationError("product", f"No explicit S_{y} for Q-null y", {"y": y})
        else:
            family[y] = explicit[y]
    return Rcp(product, tuple(s for s in family if s is not None))


def make_rcp_ac(rcp: Rcp, joint: JointMeasure) -> Rcp:
    """Replace every ``S_y`` not absolutely continuous w.r.t. ``P`` by ``S_y*``
    of the lowest ``Q``-positive ``y*``.

    Only ``Q``-null ``y`` can be replaced; positive ones are always ``≪ P``.
    """
    q, p = joint.q, joint.p
    lowest = next(y for y in range(len(rcp)) if q.mass(y) > 0)
    changes = {
        y: rcp[lowest]
        for y, s in enumerate(rcp)
        if s.absolutely_continuous_witness(p) is not None
    }
    if changes:
        _logger.info("Replaced S_y at %s by S_%d", sorted(changes), lowest)
    return rcp.replace(changes)


def _rational_str(value: Fraction) -> str:
    return format_rational(value)


def validate_rcp(rcp: Rcp, joint: JointMeasure) -> VerificationReport:
    """Check the disintegration identity ``R(A×B) = Σ_{y∈B} S_y(A) Q({y})``.

    All rectangles are swept when both factors have at most 3 points; larger
    products are checked on points, which suffices by additivity.
    """
    product = joint.product
    q = joint.q
    report = VerificationReport("rcp")

    if product.nx <= 3 and product.ny <= 3:
        pairs = (
            (Event(a, product.nx), Event(b, product.ny))
            for a in range(1, 1 << product.nx)
            for b in range(1, 1 << product.ny)
        )
    else:
        pairs = (
            (product.x_space.point(x), product.y_space.point(y))
            for x in range(product.nx)
            for y in range(product.ny)
        )

    checked = 0
    witness = None
    for a, b in pairs:
        checked += 1
        lhs = joint.rectangle_measure(a, b)
        rhs = sum((rcp[y].measure_of(a) * q.mass(y) for y in b), Fraction(0))
        if lhs != rhs:
            witness = {
                "a": a.to_list(),
                "b": b.to_list(),
                "lhs": _rational_str(lhs),
                "rhs": _rational_str(rhs),
            }
            break
    report.add("disintegration", witness is None, witness, checked)
    return report


def disintegrate_integral(f: SimpleFunction, rcp: Rcp, q: Measure) -> Fraction:
    """Return ``Σ_y Q({y}) Σ_x S_y({x}) f(x, y)``."""
    product = rcp.product
    total = Fraction(0)
    for y in range(product.ny):
        qy = q.mass(y)
        if qy == 0:
            continue
        s = rcp[y]
        total += qy * sum(
            (s.mass(x) * f(product.point(x, y)) for x in range(product.nx)),
            Fraction(0),
        )
    return total


def verify_disintegration(
    rcp: Rcp, joint: JointMeasure, budget: Budget = DEFAULT_BUDGET
) -> VerificationReport:
    """Check ``R(E) = Σ_y Q({y}) S_y(E^y)`` for every event of the product."""
    product = joint.product
    report = VerificationReport("disintegration")
    size = product.nx * product.ny
    if size > budget.max_points:
        report.notes.append("disintegration checked on rows only")
        events: Iterator[Event] = (product.row(y) for y in range(product.ny))
    else:
        events = Event.all(size)

    checked = 0
    witness = None
    for e in events:
        checked += 1
        indicator = SimpleFunction.indicator(product.space, e)
        if joint.measure_of(e) != disintegrate_integral(indicator, rcp, joint.q):
            witness = {"event": e.to_list()}
            break
    report.add("fubini", witness is None, witness, checked)
    return report


def radon_nikodym(
    numerator: JointMeasure | Measure, base: JointMeasure | Measure
) -> SimpleFunction:
    """Return the density ``d numerator / d base``.

    The value is ``numerator({p}) / base({p})`` on base-positive points and 0
    on base-null points.

    Raises:
        NotAbsolutelyContinuous: If some base-null point carries numerator
            mass; the lowest such point is the witness.
    """
    num = numerator.r if isinstance(numerator, JointMeasure) else numerator
    den = base.r if isinstance(base, JointMeasure) else base
    assert num.space == den.space, "Measures live on different spaces"

    point = num.absolutely_continuous_witness(den)
    if point is not None:
        witness: dict[str, Any] = {"point": point}
        for measure in (numerator, base):
            if isinstance(measure, JointMeasure):
                witness.update(measure.product.coords_dict(point))
                break
        raise NotAbsolutelyContinuous(
            f"Point {num.space.labels[point]} is base-null but carries mass", witness
        )

    values = [
        num.mass(p) / den.mass(p) if den.mass(p) > 0 else Fraction(0)
        for p in range(num.space.size)
    ]
    return SimpleFunction(num.space, tuple(values))


def support_event(f: SimpleFunction, phi: AnchorLifting | DensityTable) -> Event:
    """Return ``E_R = φ({f > 0})``."""
    return phi.apply(f.super_level_set(Fraction(0)))


def positive_section_set(rcp: Rcp, a: int) -> Event:
    """Return ``B_A = {y : S_y(A) > 0}``."""
    ny = rcp.product.ny
    return Event(
        sum(1 << y for y, s in enumerate(rcp) if s.measure_of(a) > 0), ny
    )


def positive_section_sets(rcp: Rcp) -> list[Event]:
    """Return ``B_A`` for every event ``A`` of ``X``, indexed by ``A``."""
    return [positive_section_set(rcp, a) for a in range(1 << rcp.product.nx)]


def generated_topology(subbasis: Sequence[int], ny: int) -> list[Event]:
    """Return all open sets of the topology on ``Y`` generated by
    ``subbasis``, sorted."""
    full = (1 << ny) - 1
    basis = {full} | {int(b) for b in subbasis}
    changed = True
    while changed:
        changed = False
        for u in list(basis):
            for v in list(basis):
                if u & v not in basis:
                    basis.add(u & v)
                    changed = True
    opens = {0} | basis
    changed = True
    while changed:
        changed = False
        for u in list(opens):
            for v in list(opens):
                if u | v not in opens:
                    opens.add(u | v)
                    changed = True
    return [Event(u, ny) for u in sorted(opens)]


def check_strong(rcp: Rcp, rho: AnchorLifting) -> bool:
    """Return whether ``ρ`` is strong for the topology generated by the sets
    ``B_A``, i.e. ``U ⊆ ρ(U)`` for every open ``U``."""
    opens = generated_topology(positive_section_sets(rcp), rcp.product.ny)
    return all(u.issubset(rho.apply(u)) for u in opens)


def check_IT(rcp: Rcp, rho: AnchorLifting, joint: JointMeasure) -> Counterexample | None:
    """Check condition (IT).

    (IT) holds when, for every rectangle with ``R(A×B) = 0``, either
    ``Q(B) = 0`` or ``S_y(A) = 0`` for all ``y ∈ ρ(B)``. Rectangles are swept
    with ``A`` ascending and ``B`` descending.

    Returns:
        ``None`` if (IT) holds, otherwise the first counterexample.
    """
    product = joint.product
    q = joint.q
    for a in range(1, 1 << product.nx):
        event_a = Event(a, product.nx)
        positive = [y for y in range(product.ny) if rcp[y].measure_of(a) > 0]
        if not positive:
            continue
        for b in range((1 << product.ny) - 1, 0, -1):
            if q.measure_of(b) == 0 or joint.rectangle_measure(a, b) != 0:
                continue
            lifted = rho.apply(b)
            for y in positive:
                if y in lifted:
                    return Counterexample(event_a, Event(b, product.ny), y)
    return None


def ac_witness(rcp: Rcp, p: Measure) -> tuple[int, int] | None:
    """Return the first ``(x, y)`` with ``P({x}) = 0 < S_y({x})``, if any."""
    for y, s in enumerate(rcp):
        x = s.absolutely_continuous_witness(p)
        if x is not None:
            return x, y
    return None


def check_uniform_ac(rcp: Rcp, p: Measure) -> bool:
    """Check uniform absolute continuity of ``{S_y}`` w.r.t. ``P``.

    On finite spaces the ε-δ definition collapses to ``S_y ≪ P`` for every
    ``y``: the finitely many ``P``-null events must be null for all ``S_y``.
    """
    return ac_witness(rcp, p) is None
