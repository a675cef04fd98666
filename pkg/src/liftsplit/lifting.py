# -*- coding: utf-8 -*-
"""Liftings and lower densities of finite measure spaces.

A lifting of a complete finite measure space is a map π on events which is a
Boolean homomorphism, sends every event to an a.e.-equal one and sends
a.e.-equal events to the same image. On a finite power set every lifting is
an *anchor map*: each positive point is its own anchor, each null point picks
a positive anchor, and::

    π(E) = {x : anchor(x) ∈ E}

Lower densities drop the complement law. They, as well as liftings defined
only on a subalgebra, are kept as explicit event tables
(:class:`DensityTable`).

Example:
    >>> from liftsplit.measure import FiniteSpace, Measure
    >>> space = FiniteSpace.of_size(3)
    >>> s0 = Measure.from_masses(space, [1, 0, 0])
    >>> lift = AnchorLifting.smallest_anchor(s0)
    >>> lift.anchor
    (0, 0, 0)
    >>> sorted(lift.apply(space.event([0])))
    [0, 1, 2]
"""

from __future__ import annotations

from collections.abc import Callable, Iterator, Mapping

import dataclasses
import itertools
import logging

import numpy

from liftsplit.budget import DEFAULT_BUDGET, Budget
from liftsplit.errors import NoPositivePoint, NotADensity, NotMeasurable, ValidationError
from liftsplit.event import Event
from liftsplit.measure import Measure, SigmaAlgebra, SimpleFunction
from liftsplit.report import VerificationReport


__author__ = "Chariton Karamitas <huku@census-labs.com>"

__all__ = [
    "AnchorLifting",
    "DensityTable",
    "apply_lifting",
    "verify_lifting",
    "verify_density",
    "enumerate_liftings",
    "extend_density",
    "extend_density_to_lifting",
    "lift_function",
    "lifting_topology_member",
]


_logger = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class AnchorLifting:
    """A lifting of a power-set measure, given by its anchor map.

    Args:
        measure: Measure on the power set.
        anchor: ``anchor[x]`` is the positive point ``x`` delegates to.
    """

    measure: Measure
    anchor: tuple[int, ...]

    def __post_init__(self) -> None:
        measure = self.measure
        if not measure.algebra.is_power_set:
            raise ValidationError("lifting", "Anchor liftings need a power-set measure")
        anchor = tuple(int(a) for a in self.anchor)
        object.__setattr__(self, "anchor", anchor)
        size = measure.space.size
        if len(anchor) != size:
            raise ValidationError("lifting", f"Expected {size} anchors, got {len(anchor)}")
        for point, target in enumerate(anchor):
            if not 0 <= target < size:
                raise ValidationError(
                    "lifting", f"Anchor {target} out of range", {"point": point}
                )
            if measure.mass(target) == 0:
                raise ValidationError(
                    "lifting",
                    f"Point {point} anchored to null point {target}",
                    {"point": point, "anchor": target},
                )
            if measure.mass(point) > 0 and target != point:
                raise ValidationError(
                    "lifting",
                    f"Positive point {point} anchored to {target}",
                    {"point": point, "anchor": target},
                )

    def __call__(self, e: int) -> Event:
        return self.apply(e)

    @property
    def space(self):
        return self.measure.space

    @property
    def algebra(self) -> SigmaAlgebra:
        return self.measure.algebra

    def apply(self, e: int) -> Event:
        mask = 0
        for point, target in enumerate(self.anchor):
            if e >> target & 1:
                mask |= 1 << point
        return Event(mask, len(self.anchor))

    def to_table(self) -> DensityTable:
        return DensityTable.build(self.measure, self.measure.algebra, self.apply)

    def to_list(self) -> list[int]:
        return list(self.anchor)

    @classmethod
    def smallest_anchor(cls, measure: Measure) -> AnchorLifting:
        """Return the lifting anchoring every null point to the lowest positive
        point.

        Raises:
            NoPositivePoint: If the measure has no positive point.
        """
        positive = [i for i, m in enumerate(measure.masses) if m > 0]
        if not positive:
            raise NoPositivePoint("Measure has no positive point")
        return cls(
            measure,
            tuple(i if m > 0 else positive[0] for i, m in enumerate(measure.masses)),
        )

    @classmethod
    def from_table(
        cls, measure: Measure, image: Callable[[Event], Event]
    ) -> AnchorLifting:
        """Recover the anchor map of a Boolean homomorphism.

        Point ``p`` is anchored to the unique ``q`` with ``p ∈ image({q})``.

        Raises:
            NotADensity: If some point is in no singleton image, or in several.
        """
        space = measure.space
        anchor = [-1] * space.size
        for q in range(space.size):
            for p in image(space.point(q)):
                if anchor[p] != -1:
                    raise NotADensity(
                        f"Point {p} lies in the images of {anchor[p]} and {q}",
                        {"point": p},
                    )
                anchor[p] = q
        for p, q in enumerate(anchor):
            if q == -1:
                raise NotADensity(f"Point {p} lies in no singleton image", {"point": p})
        try:
            return cls(measure, tuple(anchor))
        except ValidationError as exception:
            raise NotADensity(str(exception), exception.witness) from exception


@dataclasses.dataclass(frozen=True)
class DensityTable:
    """A lower density (or a lifting) on a subalgebra, kept as an event table.

    Args:
        measure: The power-set measure the table is a density for.
        algebra: Domain of the table; coarser than or equal to the power set.
        table: Maps every measurable event (as an integer mask) to its image.
    """

    measure: Measure
    algebra: SigmaAlgebra
    table: Mapping[int, Event]

    def __call__(self, e: int) -> Event:
        return self.apply(e)

    @property
    def space(self):
        return self.measure.space

    def apply(self, e: int) -> Event:
        try:
            return self.table[int(e)]
        except KeyError as exception:
            raise NotMeasurable(
                "Event outside the table's domain",
                {"event": Event(int(e), self.space.size).to_list()},
            ) from exception

    def items(self) -> Iterator[tuple[Event, Event]]:
        size = self.space.size
        for mask, image in self.table.items():
            yield Event(mask, size), image

    def restrict(self, sub: SigmaAlgebra) -> DensityTable:
        assert sub.is_coarser(self.algebra), "Restriction to a non-subalgebra"
        return DensityTable.build(self.measure, sub, self.apply)

    def dominates(self, other: DensityTable) -> bool:
        """Return whether ``other(E) ⊆ self(E)`` on every event of ``other``."""
        return all(image.issubset(self.apply(e)) for e, image in other.items())

    def to_pairs(self) -> list[list[list[int]]]:
        return [[e.to_list(), image.to_list()] for e, image in sorted(self.items())]

    @classmethod
    def build(
        cls,
        measure: Measure,
        algebra: SigmaAlgebra,
        image: Callable[[Event], Event],
    ) -> DensityTable:
        size = measure.space.size
        table = {}
        for e in algebra.events():
            table[int(e)] = Event(int(image(e)), size)
        return cls(measure, algebra, table)


def apply_lifting(lift: AnchorLifting, e: int) -> Event:
    return lift.apply(e)


def _sweep_events(
    algebra: SigmaAlgebra, budget: Budget, seed: int
) -> tuple[list[Event], str]:
    """Return the events to check and the sweep mode."""
    num_atoms = len(algebra.atoms)
    if num_atoms <= budget.max_points:
        return list(algebra.events()), "exhaustive"

    assert num_atoms < 63, f"Algebra with {num_atoms} atoms is out of reach"
    rng = numpy.random.default_rng(seed)
    selectors = {0, (1 << num_atoms) - 1}
    selectors.update(
        int(s)
        for s in rng.integers(
            0, 1 << num_atoms, size=budget.spot_checks, dtype=numpy.uint64
        )
    )
    size = algebra.space.size
    events = []
    for selector in sorted(selectors):
        mask = 0
        for i, atom in enumerate(algebra.atoms):
            if selector >> i & 1:
                mask |= atom
        events.append(Event(mask, size))
    return events, "sampled"


def _intersection_witness(
    events: list[Event], images: Mapping[int, Event], size: int
) -> dict | None:
    """Decide the intersection law exactly on a complete event list.

    For every point ``p`` the family ``{E : p ∈ image(E)}`` must be the
    principal filter of its core (the intersection of its members).
    """
    masks = [int(e) for e in events]
    image_masks = {mask: int(image) for mask, image in images.items()}
    for p in range(size):
        members = [mask for mask in masks if image_masks[mask] >> p & 1]
        if not members:
            continue
        acc = members[0]
        for member in members[1:]:
            new = acc & member
            if not image_masks[new] >> p & 1:
                return {
                    "left": Event(acc, size).to_list(),
                    "right": Event(member, size).to_list(),
                    "point": p,
                }
            acc = new
        for mask in masks:
            if acc & mask == acc and not image_masks[mask] >> p & 1:
                return {
                    "left": Event(acc, size).to_list(),
                    "right": Event(mask, size).to_list(),
                    "point": p,
                }
    return None


def _check_laws(
    measure: Measure,
    algebra: SigmaAlgebra,
    image: Callable[[Event], Event],
    suite: str,
    complement: bool,
    budget: Budget,
    seed: int,
) -> VerificationReport:
    report = VerificationReport(suite)
    size = measure.space.size
    events, mode = _sweep_events(algebra, budget, seed)
    images = {int(e): image(e) for e in events}
    report.counts["events"] = len(events)

    full, empty = Event.full(size), Event.empty(size)
    report.add(
        "empty",
        images[0] == empty,
        {"event": [], "image": images[0].to_list()},
        checked=1,
    )
    report.add(
        "full",
        images[int(full)] == full,
        {"event": full.to_list(), "image": images[int(full)].to_list()},
        checked=1,
    )

    witness = None
    for e in events:
        if not measure.ae_equal(e, images[int(e)]):
            witness = {"event": e.to_list(), "image": images[int(e)].to_list()}
            break
    report.add("ae_equal", witness is None, witness, len(events), mode)

    null_part = Event.empty(size)
    for atom in algebra.atoms:
        if measure.measure_of(atom) == 0:
            null_part |= atom
    witness = None
    for e in events:
        reduced = e.difference(null_part)
        reduced_image = images[int(reduced)] if int(reduced) in images else image(reduced)
        if reduced_image != images[int(e)]:
            witness = {"event": e.to_list(), "equivalent": reduced.to_list()}
            break
    report.add("invariance", witness is None, witness, len(events), mode)

    if mode == "exhaustive":
        witness = _intersection_witness(events, images, size)
    else:
        witness = None
        for e, f in zip(events, reversed(events)):
            if image(e & f) != images[int(e)] & images[int(f)]:
                witness = {"left": e.to_list(), "right": f.to_list()}
                break
    report.add("intersection", witness is None, witness, len(events), mode)

    if complement:
        witness = None
        for e in events:
            complement_image = images.get(int(~e))
            if complement_image is None:
                complement_image = image(~e)
            if complement_image != ~images[int(e)]:
                witness = {"event": e.to_list()}
                break
        report.add("complement", witness is None, witness, len(events), mode)

    return report


def verify_lifting(
    candidate: DensityTable | AnchorLifting,
    budget: Budget = DEFAULT_BUDGET,
    seed: int = 0,
) -> VerificationReport:
    """Check every lifting law of ``candidate`` over all measurable events.

    The laws are ``empty``, ``full``, ``ae_equal``, ``invariance``,
    ``intersection`` and ``complement``. Failures are report content.
    """
    return _check_laws(
        candidate.measure,
        candidate.algebra,
        candidate.apply,
        "lifting",
        True,
        budget,
        seed,
    )


def verify_density(
    candidate: DensityTable | AnchorLifting,
    budget: Budget = DEFAULT_BUDGET,
    seed: int = 0,
) -> VerificationReport:
    """Like :func:`verify_lifting`, without the complement law."""
    return _check_laws(
        candidate.measure,
        candidate.algebra,
        candidate.apply,
        "density",
        False,
        budget,
        seed,
    )


def enumerate_liftings(mu: Measure) -> Iterator[AnchorLifting]:
    """Generate every lifting of the power-set measure ``mu``.

    Exactly ``(#positive points) ** (#null points)`` liftings are generated, in
    lexicographic order of the anchors of the null points.

    Raises:
        NoPositivePoint: If ``mu`` has no positive point.
    """
    masses = mu.masses
    positive = [i for i, m in enumerate(masses) if m > 0]
    if not positive:
        raise NoPositivePoint("Measure has no positive point")
    nulls = [i for i, m in enumerate(masses) if m == 0]
    for choice in itertools.product(positive, repeat=len(nulls)):
        anchor = list(range(len(masses)))
        for point, target in zip(nulls, choice):
            anchor[point] = target
        yield AnchorLifting(mu, tuple(anchor))


def _require_density(delta: DensityTable) -> None:
    report = verify_density(delta)
    if not report.passed:
        law = next(law for law in report.laws if not law.passed)
        raise NotADensity(f"Table violates the {law.name} law", law.witness)


def _cores(delta: DensityTable) -> list[Event]:
    """Return, per point, the intersection of all events whose image holds it."""
    size = delta.space.size
    cores = [Event.full(size)] * size
    for e, image in delta.items():
        for point in image:
            cores[point] = cores[point] & e
    return cores


def extend_density(delta: DensityTable) -> DensityTable:
    """Extend a density on a subalgebra to a density on the power set.

    Positive points keep themselves as core; a null point ``z`` gets the
    positive points of ``⋂{D : z ∈ delta(D)}``. The extension takes the same
    values as ``delta`` on its domain.

    Raises:
        NotADensity: If ``delta`` is not a density, or some null core holds
            no positive point.
    """
    _require_density(delta)
    measure = delta.measure
    if delta.algebra.is_power_set:
        return delta
    support = measure.support
    cores = []
    for point, core in enumerate(_cores(delta)):
        if point in support:
            cores.append(measure.space.point(point))
            continue
        core = core & support
        if not core:
            raise NotADensity(f"Null point {point} has an empty core", {"point": point})
        cores.append(core)

    def _image(e: Event) -> Event:
        return measure.space.event(p for p, core in enumerate(cores) if core.issubset(e))

    extension = DensityTable.build(measure, SigmaAlgebra.power_set(measure.space), _image)
    _logger.debug("Extended density from %d atoms", len(delta.algebra.atoms))
    return extension


def extend_density_to_lifting(delta: DensityTable | AnchorLifting) -> AnchorLifting:
    """Return a lifting dominating the power-set density ``delta``.

    Every null point ``z`` is anchored to the lowest-index positive point of
    the core ``⋂{E : z ∈ delta(E)}``.

    Raises:
        NotADensity: If ``delta`` is not a density on the power set.
    """
    if isinstance(delta, AnchorLifting):
        return delta
    if not delta.algebra.is_power_set:
        raise NotADensity("Density is not defined on the power set")
    _require_density(delta)
    support = delta.measure.support
    anchor = []
    for point, core in enumerate(_cores(delta)):
        if point in support:
            anchor.append(point)
            continue
        core = core & support
        if not core:
            raise NotADensity(f"Null point {point} has an empty core", {"point": point})
        anchor.append(core.lowest())
    return AnchorLifting(delta.measure, tuple(anchor))


def lift_function(lift: AnchorLifting, f: SimpleFunction) -> SimpleFunction:
    """Return ``x ↦ f(anchor(x))``, the lifting of ``f``."""
    return SimpleFunction(f.space, tuple(f(target) for target in lift.anchor))


def lifting_topology_member(rho: AnchorLifting, b: int) -> bool:
    """Return whether ``b`` belongs to the lifting topology ``{B : B ⊆ ρ(B)}``."""
    return Event(int(b), rho.space.size).issubset(rho.apply(b))
