# -*- coding: utf-8 -*-
"""Finite probability spaces with exact rational measures.

This module exports the basic objects everything else is built upon:

* :class:`FiniteSpace`, an ordered set of labelled points;
* :class:`SigmaAlgebra`, a σ-algebra given by its atom partition;
* :class:`Measure`, exact rational weights on the atoms of a σ-algebra;
* :class:`SimpleFunction`, rational-valued functions on the points.

All arithmetic is done with :class:`fractions.Fraction`; there are no
tolerances anywhere, since a.e.-equality and null-set logic are discrete.

Example:
    >>> from fractions import Fraction
    >>> from liftsplit.measure import FiniteSpace, Measure
    >>> space = FiniteSpace.of_size(3)
    >>> p = Measure.from_masses(space, [Fraction(1, 2), Fraction(1, 2), 0])
    >>> p.measure_of(space.event([0, 1]))
    Fraction(1, 1)
    >>> p.ae_equal(space.event([0, 1]), space.full)
    True
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Sequence
from fractions import Fraction

import dataclasses

from liftsplit.errors import (
    AmbiguousCompletion,
    NotCoarser,
    NotMeasurable,
    ParseError,
    ValidationError,
)
from liftsplit.event import Event


__author__ = "Chariton Karamitas <huku@census-labs.com>"

__all__ = [
    "Rational",
    "parse_rational",
    "format_rational",
    "FiniteSpace",
    "SigmaAlgebra",
    "Measure",
    "SimpleFunction",
    "conditional_expectation",
    "generate_algebra",
]


Rational = Fraction


def parse_rational(text: str | int) -> Fraction:
    """Parse a ``"p/q"`` string (or an integer) into an exact rational.

    Raises:
        ParseError: If ``text`` is not an exact rational literal. Decimal
            literals are rejected on purpose, the format is exact only.
    """
    if isinstance(text, bool) or not isinstance(text, (int, str)):
        raise ParseError(f"Expected rational string, got {text!r}")
    if isinstance(text, str) and ("." in text or "e" in text.lower()):
        raise ParseError(f"Rational {text!r} is not of the form p/q")
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exception:
        raise ParseError(f"Invalid rational {text!r}") from exception


def format_rational(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


@dataclasses.dataclass(frozen=True)
class FiniteSpace:
    """A finite set of points addressed by index.

    Args:
        labels: Distinct point names, in index order.
    """

    labels: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.labels:
            raise ValidationError("measure", "Finite space must have at least one point")
        if len(set(self.labels)) != len(self.labels):
            raise ValidationError("measure", f"Duplicate labels in {self.labels}")

    @classmethod
    def of_size(cls, size: int) -> FiniteSpace:
        return cls(tuple(str(i) for i in range(size)))

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def full(self) -> Event:
        return Event.full(self.size)

    @property
    def empty(self) -> Event:
        return Event.empty(self.size)

    def event(self, points: Iterable[int]) -> Event:
        return Event.from_points(points, self.size)

    def point(self, index: int) -> Event:
        return Event(1 << index, self.size)

    def events(self) -> Iterator[Event]:
        return Event.all(self.size)


@dataclasses.dataclass(frozen=True)
class SigmaAlgebra:
    """A σ-algebra of a finite space, represented by its atoms.

    Atoms are kept sorted by their lowest point, which makes the atom order
    (and everything enumerated from it) canonical.

    Args:
        space: The underlying finite space.
        atoms: Pairwise disjoint, nonempty events covering the space.
    """

    space: FiniteSpace
    atoms: tuple[Event, ...]

    def __post_init__(self) -> None:
        covered = 0
        for atom in self.atoms:
            if not atom:
                raise ValidationError("measure", "Empty atom")
            if covered & atom:
                raise ValidationError("measure", f"Atom {atom!r} overlaps others")
            covered |= atom
        if covered != self.space.full:
            raise ValidationError("measure", "Atoms do not cover the space")
        lowest = [atom.lowest() for atom in self.atoms]
        if lowest != sorted(lowest):
            object.__setattr__(
                self, "atoms", tuple(sorted(self.atoms, key=lambda a: a.lowest()))
            )

    @classmethod
    def power_set(cls, space: FiniteSpace) -> SigmaAlgebra:
        return cls(space, tuple(space.point(i) for i in range(space.size)))

    @classmethod
    def trivial(cls, space: FiniteSpace) -> SigmaAlgebra:
        return cls(space, (space.full,))

    @classmethod
    def from_partition(
        cls, space: FiniteSpace, blocks: Iterable[Iterable[int]]
    ) -> SigmaAlgebra:
        return cls(space, tuple(space.event(block) for block in blocks))

    @property
    def is_power_set(self) -> bool:
        return len(self.atoms) == self.space.size

    def is_measurable(self, e: int) -> bool:
        e = int(e)
        return all(int(atom) & e in (0, int(atom)) for atom in self.atoms)

    def check_measurable(self, e: int) -> None:
        if not self.is_measurable(e):
            raise NotMeasurable(
                f"Event {sorted(Event(int(e), self.space.size))} is not a union of atoms",
                {"event": Event(int(e), self.space.size).to_list()},
            )

    def atom_of(self, point: int) -> Event:
        for atom in self.atoms:
            if point in atom:
                return atom
        raise ValueError(f"Point {point} out of range")

    def hull(self, e: int) -> Event:
        """Return the smallest measurable event containing ``e``."""
        result = self.space.empty
        for atom in self.atoms:
            if atom & e:
                result |= atom
        return result

    def kernel(self, e: int) -> Event:
        """Return the largest measurable event contained in ``e``."""
        result = self.space.empty
        for atom in self.atoms:
            if atom & e == atom:
                result |= atom
        return result

    def events(self) -> Iterator[Event]:
        """Generate all measurable events.

        Events are generated by counting over subsets of atoms; for the power
        set this is ascending mask order.
        """
        atoms = self.atoms
        for selector in range(1 << len(atoms)):
            mask = 0
            for i, atom in enumerate(atoms):
                if selector >> i & 1:
                    mask |= atom
            yield Event(mask, self.space.size)

    def is_coarser(self, other: SigmaAlgebra) -> bool:
        """Return whether this algebra is contained in ``other``."""
        return self.space == other.space and all(
            other.is_measurable(atom) for atom in self.atoms
        )

    def refine(self, h: int) -> SigmaAlgebra:
        """Return the algebra generated by this one and the event ``h``."""
        atoms = []
        for atom in self.atoms:
            inside, outside = atom & h, atom & ~Event(int(h), self.space.size)
            atoms.extend(part for part in (inside, outside) if part)
        return SigmaAlgebra(self.space, tuple(atoms))


@dataclasses.dataclass(frozen=True)
class Measure:
    """An exact probability measure on the atoms of a σ-algebra.

    Args:
        algebra: Domain of the measure.
        weights: Atom weights, in atom order; nonnegative, summing to 1.
    """

    algebra: SigmaAlgebra
    weights: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if len(self.weights) != len(self.algebra.atoms):
            raise ValidationError(
                "measure",
                f"Expected {len(self.algebra.atoms)} weights, got {len(self.weights)}",
            )
        weights = tuple(Fraction(w) for w in self.weights)
        object.__setattr__(self, "weights", weights)
        for atom, weight in zip(self.algebra.atoms, weights):
            if weight < 0:
                raise ValidationError(
                    "measure", f"Negative weight {weight}", {"atom": atom.to_list()}
                )
        if sum(weights) != 1:
            raise ValidationError(
                "measure",
                f"Weights sum to {sum(weights)}, not 1",
                {"sum": format_rational(sum(weights, Fraction(0)))},
            )

    @classmethod
    def from_masses(cls, space: FiniteSpace, masses: Sequence) -> Measure:
        """Create a measure on the power set of ``space`` from point masses."""
        return cls(SigmaAlgebra.power_set(space), tuple(Fraction(m) for m in masses))

    @classmethod
    def point_mass(cls, space: FiniteSpace, point: int) -> Measure:
        return cls.from_masses(
            space, [Fraction(int(i == point)) for i in range(space.size)]
        )

    @classmethod
    def uniform(cls, space: FiniteSpace) -> Measure:
        return cls.from_masses(space, [Fraction(1, space.size)] * space.size)

    @property
    def space(self) -> FiniteSpace:
        return self.algebra.space

    @property
    def masses(self) -> tuple[Fraction, ...]:
        """Point masses of a power-set measure."""
        assert self.algebra.is_power_set, "Point masses need a power-set measure"
        return self.weights

    def mass(self, point: int) -> Fraction:
        assert self.algebra.is_power_set, "Point masses need a power-set measure"
        return self.weights[point]

    def measure_of(self, e: int) -> Fraction:
        """Return the measure of the measurable event ``e``.

        Raises:
            NotMeasurable: If ``e`` is not a union of atoms.
        """
        mask = int(e)
        total = Fraction(0)
        for atom, weight in zip(self.algebra.atoms, self.weights):
            part = int(atom) & mask
            if part == atom:
                total += weight
            elif part:
                self.algebra.check_measurable(e)
        return total

    def is_null(self, e: int) -> bool:
        return self.measure_of(e) == 0

    def ae_equal(self, e: int, f: int) -> bool:
        return self.measure_of(int(e) ^ int(f)) == 0

    @property
    def null_part(self) -> Event:
        """Union of all null atoms, the largest null event."""
        result = self.space.empty
        for atom, weight in zip(self.algebra.atoms, self.weights):
            if weight == 0:
                result |= atom
        return result

    @property
    def support(self) -> Event:
        """Complement of :attr:`null_part`."""
        return ~self.null_part

    def positive_atoms(self) -> list[Event]:
        return [a for a, w in zip(self.algebra.atoms, self.weights) if w > 0]

    def complete(self, strict: bool = False) -> Measure:
        """Return the completion of this measure on the power set.

        Each positive atom with several points puts its whole weight on its
        lowest-index point; null atoms become null points.

        Args:
            strict: Refuse positive multi-point atoms instead of applying the
                lowest-index rule.

        Raises:
            AmbiguousCompletion: In strict mode, on a positive atom with more
                than one point.
        """
        if self.algebra.is_power_set:
            return self
        masses = [Fraction(0)] * self.space.size
        for atom, weight in zip(self.algebra.atoms, self.weights):
            if weight > 0 and atom.count() > 1 and strict:
                raise AmbiguousCompletion(
                    f"Positive atom {sorted(atom)} has several points",
                    {"atom": atom.to_list()},
                )
            masses[atom.lowest()] = weight
        return Measure.from_masses(self.space, masses)

    def restrict(self, sub: SigmaAlgebra) -> Measure:
        """Return this measure restricted to the coarser algebra ``sub``.

        Raises:
            NotCoarser: If ``sub`` is not contained in the domain.
        """
        if not sub.is_coarser(self.algebra):
            raise NotCoarser("Algebra is not coarser than the measure's domain")
        return Measure(sub, tuple(self.measure_of(atom) for atom in sub.atoms))

    def integral(self, f: SimpleFunction) -> Fraction:
        """Return ∫ f dμ for ``f`` measurable with respect to the domain."""
        if not f.is_measurable(self.algebra):
            raise NotMeasurable("Function is not measurable with respect to the measure")
        return sum(
            (f(atom.lowest()) * w for atom, w in zip(self.algebra.atoms, self.weights)),
            Fraction(0),
        )

    def absolutely_continuous_witness(self, other: Measure) -> int | None:
        """Return the lowest point violating ``self ≪ other``, if any.

        Both measures must live on the power set of the same space.
        """
        assert self.space == other.space, "Measures live on different spaces"
        for point in range(self.space.size):
            if other.mass(point) == 0 and self.mass(point) > 0:
                return point
        return None


@dataclasses.dataclass(frozen=True)
class SimpleFunction:
    """A rational-valued function on the points of a finite space.

    Values on null points are never normalized; functions that agree a.e.
    are distinct objects.

    Args:
        space: Domain of the function.
        values: Function values, in point order.
        algebra: Optional algebra the function is declared measurable for.
    """

    space: FiniteSpace
    values: tuple[Fraction, ...]
    algebra: SigmaAlgebra | None = None

    def __post_init__(self) -> None:
        if len(self.values) != self.space.size:
            raise ValidationError(
                "measure", f"Expected {self.space.size} values, got {len(self.values)}"
            )
        object.__setattr__(self, "values", tuple(Fraction(v) for v in self.values))
        if self.algebra is not None and not self.is_measurable(self.algebra):
            raise NotMeasurable("Function is not constant on the declared atoms")

    def __call__(self, point: int) -> Fraction:
        return self.values[point]

    def __add__(self, other: SimpleFunction) -> SimpleFunction:
        assert self.space == other.space, "Functions live on different spaces"
        return SimpleFunction(
            self.space, tuple(a + b for a, b in zip(self.values, other.values))
        )

    @classmethod
    def indicator(cls, space: FiniteSpace, e: int) -> SimpleFunction:
        return cls(space, tuple(Fraction(e >> i & 1) for i in range(space.size)))

    @classmethod
    def constant(cls, space: FiniteSpace, value: Fraction | int) -> SimpleFunction:
        return cls(space, (Fraction(value),) * space.size)

    def is_measurable(self, algebra: SigmaAlgebra) -> bool:
        for atom in algebra.atoms:
            first = self.values[atom.lowest()]
            if any(self.values[i] != first for i in atom):
                return False
        return True

    def super_level_set(self, threshold: Fraction) -> Event:
        """Return ``{x : f(x) > threshold}``."""
        return self.space.event(i for i, v in enumerate(self.values) if v > threshold)

    def distinct_values(self) -> list[Fraction]:
        return sorted(set(self.values))


def conditional_expectation(
    f: SimpleFunction,
    sub: SigmaAlgebra,
    mu: Measure,
    null_value: Fraction = Fraction(0),
) -> SimpleFunction:
    """Compute a version of the conditional expectation E_sub(f) under ``mu``.

    On every sub-atom ``C`` of positive measure the value is the μ-weighted
    average of ``f`` over ``C``. Null sub-atoms get ``null_value``; any
    constant is a valid version there.

    Args:
        f: Function measurable with respect to ``mu.algebra``.
        sub: Algebra coarser than ``mu.algebra``.
        mu: The measure.
        null_value: Value assigned on null sub-atoms.

    Returns:
        A function constant on the atoms of ``sub``, declared measurable for it.

    Raises:
        NotCoarser: If ``sub`` is not coarser than ``mu.algebra``.
        NotMeasurable: If ``f`` is not ``mu.algebra``-measurable.
    """
    if not sub.is_coarser(mu.algebra):
        raise NotCoarser("Conditioning algebra is not coarser than the measure's domain")
    if not f.is_measurable(mu.algebra):
        raise NotMeasurable("Function is not measurable with respect to the measure")

    owner = [0] * f.space.size
    for i, sub_atom in enumerate(sub.atoms):
        for point in sub_atom:
            owner[point] = i

    totals = [Fraction(0)] * len(sub.atoms)
    weighted = [Fraction(0)] * len(sub.atoms)
    for atom, weight in zip(mu.algebra.atoms, mu.weights):
        if weight:
            point = atom.lowest()
            totals[owner[point]] += weight
            weighted[owner[point]] += f(point) * weight

    averages = [
        w / t if t > 0 else Fraction(null_value) for t, w in zip(totals, weighted)
    ]
    return SimpleFunction(f.space, tuple(averages[i] for i in owner), sub)


def generate_algebra(space: FiniteSpace, generators: Iterable[int]) -> SigmaAlgebra:
    """Return the coarsest algebra making every generator measurable.

    Example:
        >>> space = FiniteSpace.of_size(3)
        >>> generate_algebra(space, [space.event([0])]).atoms
        (Event([0]), Event([1, 2]))
    """
    algebra = SigmaAlgebra.trivial(space)
    for generator in generators:
        algebra = algebra.refine(generator)
    return algebra


