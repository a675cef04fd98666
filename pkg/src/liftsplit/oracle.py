# -*- coding: utf-8 -*-
"""Independent re-derivation of lifting laws.

Nothing here uses bitmask events, anchor maps or the constructions of the
splitting modules. Events are :class:`frozenset` objects, product points are
``(x, y)`` tuples, measures are dictionaries from points to
:class:`fractions.Fraction`, and every law is checked by brute force over all
subsets. The oracle is slow by nature and meant for fixture-sized spaces.

Example:
    >>> from fractions import Fraction
    >>> masses = {0: Fraction(1), 1: Fraction(0)}
    >>> table = {e: (frozenset({0, 1}) if 0 in e else frozenset()) for e in subsets([0, 1])}
    >>> lifting_violation(table, masses) is None
    True
"""

from __future__ import annotations

from collections.abc import Callable, Iterator, Sequence
from fractions import Fraction

import itertools

from liftsplit.errors import BudgetExceeded
from liftsplit.event import Event
from liftsplit.lifting import AnchorLifting
from liftsplit.product import Rcp
from liftsplit.report import VerificationReport
from liftsplit.splitting_ac import SplitLiftings


__author__ = "Chariton Karamitas <huku@census-labs.com>"

__all__ = [
    "subsets",
    "measure_of",
    "lifting_violation",
    "boolean_homomorphisms",
    "table_of",
    "product_table_of",
    "section_property_violation",
    "rectangle_formula_violation",
    "disintegration_violation",
    "oracle_sweep",
]


Table = dict[frozenset, frozenset]

MAX_POINTS = 9


def subsets(points: Sequence) -> list[frozenset]:
    """Return all subsets of ``points``, smallest first."""
    return [
        frozenset(c)
        for k in range(len(points) + 1)
        for c in itertools.combinations(points, k)
    ]


def measure_of(e: frozenset, masses: dict) -> Fraction:
    return sum((masses[p] for p in e), Fraction(0))


def lifting_violation(table: Table, masses: dict, complement: bool = True) -> str | None:
    """Return the name of the first lifting law ``table`` violates, if any."""
    points = frozenset(masses)
    events = list(table)

    if table[frozenset()] != frozenset():
        return "empty"
    if table[points] != points:
        return "full"
    for e in events:
        if measure_of(e ^ table[e], masses) != 0:
            return "ae_equal"
    for e, f in itertools.product(events, repeat=2):
        if measure_of(e ^ f, masses) == 0 and table[e] != table[f]:
            return "invariance"
    for e, f in itertools.product(events, repeat=2):
        if table[e & f] != table[e] & table[f]:
            return "intersection"
    if complement:
        for e in events:
            if table[points - e] != points - table[e]:
                return "complement"
    return None


def boolean_homomorphisms(n: int) -> Iterator[tuple[tuple[int, ...], Table]]:
    """Generate ``(g, table)`` for every map ``g`` of ``{0..n-1}`` into itself,
    where ``table(E) = {x : g(x) ∈ E}``. These are all the Boolean
    homomorphisms of the power set."""
    points = list(range(n))
    events = subsets(points)
    for g in itertools.product(points, repeat=n):
        yield g, {e: frozenset(x for x in points if g[x] in e) for e in events}


def table_of(image: Callable[[Event], Event], size: int) -> Table:
    """Tabulate a map on the events of ``{0..size-1}``."""
    table = {}
    for e in subsets(list(range(size))):
        table[e] = frozenset(image(Event.from_points(e, size)))
    return table


def product_table_of(lift: AnchorLifting, nx: int, ny: int) -> Table:
    """Tabulate a lifting of the product on sets of ``(x, y)`` pairs."""
    pairs = [(x, y) for x in range(nx) for y in range(ny)]
    table = {}
    for e in subsets(pairs):
        mask = Event.from_points((x * ny + y for x, y in e), nx * ny)
        table[e] = frozenset(divmod(p, ny) for p in lift.apply(mask))
    return table


def _section(e: frozenset, y: int) -> frozenset:
    return frozenset(x for x, v in e if v == y)


def section_property_violation(
    pi: Table, sigma_y: Sequence[Table], ny: int
) -> dict | None:
    """Return the first ``(E, y)`` whose section is not ``σ_y``-fixed."""
    for e, image in pi.items():
        for y in range(ny):
            section = _section(image, y)
            if sigma_y[y][section] != section:
                return {"event": sorted(e), "y": y}
    return None


def rectangle_formula_violation(
    pi: Table, sigma_y: Sequence[Table], rho: Table, nx: int
) -> dict | None:
    """Return the first rectangle with ``π(A × B) ≠ ⋃_{y ∈ ρ(B)} σ_y(A) × {y}``."""
    xs = list(range(nx))
    for a in subsets(xs):
        for b in rho:
            rect = frozenset(itertools.product(a, b))
            expected = frozenset((x, y) for y in rho[b] for x in sigma_y[y][a])
            if pi[rect] != expected:
                return {"a": sorted(a), "b": sorted(b)}
    return None


def disintegration_violation(
    r: dict, s: Sequence[dict], q: dict, nx: int, ny: int
) -> dict | None:
    """Return the first rectangle with ``R(A × B) ≠ Σ_{y ∈ B} S_y(A) Q({y})``."""
    for a in subsets(list(range(nx))):
        for b in subsets(list(range(ny))):
            lhs = measure_of(frozenset(itertools.product(a, b)), r)
            rhs = sum((measure_of(a, s[y]) * q[y] for y in b), Fraction(0))
            if lhs != rhs:
                return {"a": sorted(a), "b": sorted(b)}
    return None


def oracle_sweep(
    split: SplitLiftings, rcp: Rcp, rectangle_formula: bool = False
) -> VerificationReport:
    """Re-derive the laws of ``split`` from scratch.

    Args:
        split: Liftings to check.
        rcp: The r.c.p. the liftings split along.
        rectangle_formula: Also check (RF) with respect to ``split.rho``.

    Raises:
        BudgetExceeded: If the product has more than :data:`MAX_POINTS` points.
    """
    product = split.product
    nx, ny = product.nx, product.ny
    if nx * ny > MAX_POINTS:
        raise BudgetExceeded(
            f"Oracle sweeps at most {MAX_POINTS} points, got {nx * ny}",
            {"points": nx * ny},
        )
    report = VerificationReport("oracle")

    r = {divmod(p, ny): m for p, m in enumerate(split.pi.measure.masses)}
    q = dict(enumerate(split.rho.measure.masses))
    s = [dict(enumerate(measure.masses)) for measure in rcp]

    pi = product_table_of(split.pi, nx, ny)
    sigma_y = [table_of(sigma.apply, nx) for sigma in split.sigma_y]
    rho = table_of(split.rho.apply, ny)

    law = lifting_violation(pi, r)
    report.add("pi", law is None, {"law": law}, len(pi))
    for y, table in enumerate(sigma_y):
        law = lifting_violation(table, s[y])
        report.add(f"sigma_{y}", law is None, {"law": law}, len(table))
    law = lifting_violation(rho, q)
    report.add("rho", law is None, {"law": law}, len(rho))

    witness = section_property_violation(pi, sigma_y, ny)
    report.add("SP", witness is None, witness, len(pi))

    if rectangle_formula:
        witness = rectangle_formula_violation(pi, sigma_y, rho, nx)
        report.add("RF", witness is None, witness, (1 << nx) * len(rho))

    witness = disintegration_violation(r, s, q, nx, ny)
    report.add("disintegration", witness is None, witness, (1 << nx) * (1 << ny))
    return report
