# -*- coding: utf-8 -*-
"""Liftings with the section property for arbitrary joint measures.

Unlike :mod:`liftsplit.splitting_ac`, nothing is assumed about the r.c.p.
here: neither (IT) nor absolute continuity. The construction refines the
trivial algebra of ``X`` one event at a time along an :class:`AlgebraChain`,
extending at every step a lifting ``φ_m`` of ``R`` on ``𝔠_m ⊗ 𝔅`` and
liftings ``τ_my`` of every ``S_y`` on ``𝔠_m``, so that::

    [φ_m(A × B)]^y = τ_my(A)  for Q-almost all y ∈ B
    [φ_m(A × B)]^y = ∅        for Q-almost all y ∉ B

The limit liftings ``φ̃`` and ``τ̃_y`` are obtained from the conditional
expectations of indicators along the chain. Sections are then closed under
the liftings of the ``S_y``, repaired where some ``S_y``-section union is not
full, and finally promoted to a lifting ``π`` of ``R̂`` with the section
property ``[π(E)]^y = σ_y([π(E)]^y)`` for *every* ``y``.

Example:
    >>> from liftsplit.generators import no_rf
    >>> scenario = no_rf.NoRF().generate()
    >>> result = build_general_split(None, scenario.rcp, scenario.joint, scenario.rho)
    >>> verify_general_split(result).passed
    True
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from fractions import Fraction
from typing import Any

import dataclasses
import logging
import math

import networkx

from liftsplit.budget import DEFAULT_BUDGET, Budget
from liftsplit.errors import (
    BudgetExceeded,
    HypothesisViolated,
    InternalInvariantBroken,
    NotADensity,
    NotInsideAtom,
    PreconditionFailed,
)
from liftsplit.event import Event
from liftsplit.lifting import (
    AnchorLifting,
    DensityTable,
    extend_density,
    extend_density_to_lifting,
    lift_function,
    verify_density,
    verify_lifting,
)
from liftsplit.measure import (
    FiniteSpace,
    Measure,
    SigmaAlgebra,
    SimpleFunction,
    conditional_expectation,
)
from liftsplit.product import JointMeasure, ProductSpace, Rcp, positive_section_set
from liftsplit.report import VerificationReport
from liftsplit.splitting_ac import (
    SplitLiftings,
    section_laws,
    section_property_witness,
)


__author__ = "Chariton Karamitas <huku@census-labs.com>"

__all__ = [
    "AlgebraChain",
    "ChainState",
    "ChainResult",
    "GeneralSplit",
    "SectionConditioner",
    "verify_cond_exp_sections",
    "initial_state",
    "hypothesis_exceptions",
    "check_chain_state",
    "null_row_witness",
    "extend_lifting_step",
    "chain_construct",
    "close_sections",
    "repair_full_sections",
    "build_general_split",
    "general_split",
    "verify_general_split",
]


_logger = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class AlgebraChain:
    """An increasing chain of algebras of ``X``, starting from the trivial one.

    Step ``m + 1`` refines step ``m`` by splitting the atom holding
    ``generators[m]`` into ``generators[m]`` and the rest of the atom.

    Args:
        steps: The algebras, trivial first.
        generators: The event splitting each step from the previous one.
    """

    steps: tuple[SigmaAlgebra, ...]
    generators: tuple[Event, ...]

    def __post_init__(self) -> None:
        if len(self.steps) != len(self.generators) + 1:
            raise PreconditionFailed("Chain needs one generator per refinement")
        if len(self.steps[0].atoms) != 1:
            raise PreconditionFailed("Chain must start from the trivial algebra")
        tree = self.refinement_tree()
        for node in tree:
            degree = tree.out_degree(node)
            if degree not in (0, 2):
                raise PreconditionFailed(
                    f"Atom {sorted(node)} split into {degree} parts",
                    {"atom": node.to_list()},
                )
        leaves = sorted(node for node in tree if tree.out_degree(node) == 0)
        if leaves != sorted(self.target.atoms):
            raise PreconditionFailed("Chain refinements do not reach its target")

    @property
    def space(self) -> FiniteSpace:
        return self.steps[0].space

    @property
    def target(self) -> SigmaAlgebra:
        return self.steps[-1]

    def __len__(self) -> int:
        return len(self.steps)

    def refinement_tree(self) -> networkx.DiGraph:
        """Return the tree of atoms, each split atom pointing to its parts."""
        tree = networkx.DiGraph()
        tree.add_node(self.steps[0].atoms[0])
        for previous, step, h in zip(self.steps, self.steps[1:], self.generators):
            parent = previous.atom_of(h.lowest())
            for part in (h, parent.difference(h)):
                if part not in step.atoms:
                    raise PreconditionFailed(
                        f"Step does not split {sorted(parent)} along {sorted(h)}",
                        {"atom": parent.to_list(), "generator": h.to_list()},
                    )
                tree.add_edge(parent, part)
        assert networkx.is_arborescence(tree), "Refinement tree is not a tree"
        return tree

    def to_list(self) -> list[list[int]]:
        return [h.to_list() for h in self.generators]

    @classmethod
    def from_generators(cls, space: FiniteSpace, generators: Iterable[int]) -> AlgebraChain:
        """Refine the trivial algebra by every generator, atom by atom.

        A generator cutting several atoms is split into its pieces inside
        each atom, in atom order; generators already measurable are skipped.
        """
        algebra = SigmaAlgebra.trivial(space)
        steps = [algebra]
        pieces = []
        for generator in generators:
            generator = Event(int(generator), space.size)
            for atom in algebra.atoms:
                piece = atom & generator
                if piece and piece != atom:
                    pieces.append(piece)
            for piece in pieces[len(steps) - 1 :]:
                algebra = algebra.refine(piece)
                steps.append(algebra)
        return cls(tuple(steps), tuple(pieces))

    @classmethod
    def singletons(cls, space: FiniteSpace) -> AlgebraChain:
        """Return the chain splitting off one point at a time, in index order."""
        return cls.from_generators(space, (space.point(i) for i in range(space.size)))


@dataclasses.dataclass(frozen=True)
class ChainState:
    """Liftings at one step of the chain.

    Args:
        algebra: The current algebra ``𝔠`` of ``X``.
        phi: Lifting of ``R`` on ``𝔠 ⊗ 𝔅``.
        tau_y: ``tau_y[y]`` is a lifting of ``S_y`` on ``𝔠``.
    """

    algebra: SigmaAlgebra
    phi: DensityTable
    tau_y: tuple[DensityTable, ...]


@dataclasses.dataclass(frozen=True)
class ChainResult:
    """Limit liftings of a chain.

    Args:
        phi_tilde: Lifting of ``R`` on ``𝔇 ⊗ 𝔅``, ``𝔇`` the chain's target.
        tau_tilde: ``tau_tilde[y]`` is a lifting of ``S_y`` on ``𝔇``.
        exceptional: Maps every event ``F`` of ``𝔇 ⊗ 𝔅`` to the ``Q``-null
            set ``N_F`` outside which ``[φ̃(F)]^y = τ̃_y(F^y)``.
        states: The state of every step.
    """

    phi_tilde: DensityTable
    tau_tilde: tuple[DensityTable, ...]
    exceptional: dict[int, Event]
    states: tuple[ChainState, ...]


@dataclasses.dataclass(frozen=True)
class GeneralSplit:
    """Everything built by :func:`build_general_split`.

    Args:
        chain: The chain used.
        chain_result: Limit liftings of the chain.
        psi: Density of ``R̂`` with full, ``σ_y``-fixed sections.
        tau_y: Density extensions of the ``τ̃_y`` to the power set of ``X``.
        split: The liftings ``π`` and ``σ_y``.
        rcp: The r.c.p.
        repair_passes: Number of passes of :func:`repair_full_sections`.
    """

    chain: AlgebraChain
    chain_result: ChainResult
    psi: DensityTable
    tau_y: tuple[DensityTable, ...]
    split: SplitLiftings
    rcp: Rcp
    repair_passes: int


def _section_function(f: SimpleFunction, product: ProductSpace, y: int) -> SimpleFunction:
    return SimpleFunction(
        product.x_space, tuple(f(product.point(x, y)) for x in range(product.nx))
    )


class SectionConditioner(object):
    """Conditional expectations given ``𝔠 ⊗ 𝔅`` under ``R`` and given ``𝔠``
    under every ``S_y``.

    The atoms of ``𝔠 ⊗ 𝔅`` are the ``A × {y}``, so the ``y``-row of the
    expectation of an indicator ``1_E`` depends on ``E^y`` alone. Rows of
    indicators are cached per ``(y, E^y)``, together with whether they agree
    with ``E_𝔠(1_{E^y})`` under ``S_y`` on the ``S_y``-positive atoms.

    Args:
        c: Algebra on ``X``.
        rcp: The r.c.p.
        joint: The joint measure.
        null_value: Value of expectations on null atoms.
    """

    def __init__(
        self,
        c: SigmaAlgebra,
        rcp: Rcp,
        joint: JointMeasure,
        null_value: Fraction = Fraction(0),
    ) -> None:
        super(SectionConditioner, self).__init__()
        self._c = c
        self._rcp = rcp
        self._joint = joint
        self._null_value = Fraction(null_value)
        self._rows = {}
        self.product_algebra = joint.product.product_algebra(c)

    def expectation(self, f: SimpleFunction) -> SimpleFunction:
        """Return ``E_{𝔠⊗𝔅}(f)`` under ``R``."""
        return conditional_expectation(
            f, self.product_algebra, self._joint.r, self._null_value
        )

    def exceptions(
        self, f: SimpleFunction, expectation: SimpleFunction | None = None
    ) -> Event:
        """Return the ``y`` at which the section of ``E_{𝔠⊗𝔅}(f)`` differs
        from ``E_𝔠(f^y)`` on some ``S_y``-positive atom of ``𝔠``."""
        product = self._joint.product
        if expectation is None:
            expectation = self.expectation(f)
        exceptional = 0
        for y, s in enumerate(self._rcp):
            local = conditional_expectation(
                _section_function(f, product, y), self._c, s, self._null_value
            )
            for atom in self._c.atoms:
                if s.measure_of(atom) == 0:
                    continue
                x = atom.lowest()
                if expectation(product.point(x, y)) != local(x):
                    exceptional |= 1 << y
                    break
        return Event(exceptional, product.ny)

    def indicator(self, e: int) -> tuple[SimpleFunction, Event]:
        """Return :meth:`expectation` and :meth:`exceptions` of ``1_e``."""
        product = self._joint.product
        values = [Fraction(0)] * product.space.size
        exceptional = 0
        for y in range(product.ny):
            row, commutes = self._row(y, int(product.section_y(e, y)))
            for x, value in enumerate(row):
                values[product.point(x, y)] = value
            if not commutes:
                exceptional |= 1 << y
        return (
            SimpleFunction(product.space, tuple(values)),
            Event(exceptional, product.ny),
        )

    def _row(self, y: int, section: int) -> tuple[tuple[Fraction, ...], bool]:
        key = (y, section)
        row = self._rows.get(key)
        if row is None:
            row = self._rows[key] = self._indicator_row(y, section)
        return row

    def _indicator_row(
        self, y: int, section: int
    ) -> tuple[tuple[Fraction, ...], bool]:
        product = self._joint.product
        r, s = self._joint.r, self._rcp[y]
        values = [Fraction(0)] * product.nx
        commutes = True
        for atom in self._c.atoms:
            r_total = r_part = s_total = s_part = Fraction(0)
            for x in atom:
                r_mass, s_mass = r.mass(product.point(x, y)), s.mass(x)
                r_total += r_mass
                s_total += s_mass
                if section >> x & 1:
                    r_part += r_mass
                    s_part += s_mass
            value = r_part / r_total if r_total > 0 else self._null_value
            if s_total > 0 and value != s_part / s_total:
                commutes = False
            for x in atom:
                values[x] = value
        return tuple(values), commutes


def verify_cond_exp_sections(
    f: SimpleFunction,
    c: SigmaAlgebra,
    rcp: Rcp,
    joint: JointMeasure,
    null_value: Fraction = Fraction(0),
) -> Event:
    """Return the ``y`` at which conditioning does not commute with sections.

    At every ``y`` the section of ``E_{𝔠⊗𝔅}(f)`` under ``R`` is compared with
    ``E_𝔠(f^y)`` under ``S_y``, on the ``S_y``-positive atoms of ``𝔠``. The
    returned set is ``Q``-null whenever the r.c.p. disintegrates ``R``.
    """
    return SectionConditioner(c, rcp, joint, null_value).exceptions(f)


def initial_state(rcp: Rcp, joint: JointMeasure, rho: AnchorLifting) -> ChainState:
    """Return the state on the trivial algebra.

    ``φ_1(X × B) = X × ρ(B)`` and every ``τ_1y`` is the only lifting of the
    trivial algebra.
    """
    product = joint.product
    trivial = SigmaAlgebra.trivial(product.x_space)
    full_x = product.x_space.full

    def _phi(e: Event) -> Event:
        return product.rectangle(full_x, rho.apply(product.section_x(e, 0)))

    phi = DensityTable.build(joint.r, product.product_algebra(trivial), _phi)
    tau_y = tuple(DensityTable.build(s, trivial, lambda a: a) for s in rcp)
    return ChainState(trivial, phi, tau_y)


def hypothesis_exceptions(state: ChainState, product: ProductSpace) -> tuple[Event, Event]:
    """Return the exceptional sets of the two rectangle hypotheses.

    The first holds every ``y ∈ B`` with ``[φ(A × B)]^y ≠ τ_y(A)``, the second
    every ``y ∉ B`` with ``[φ(A × B)]^y ≠ ∅``, over all ``A ∈ 𝔠`` and ``B``.
    """
    inside = outside = 0
    for a in state.algebra.events():
        lifted = [tau.apply(a) for tau in state.tau_y]
        for b in product.y_space.events():
            image = state.phi.apply(product.rectangle(a, b))
            for y in range(product.ny):
                section = product.section_y(image, y)
                if y in b:
                    if section != lifted[y]:
                        inside |= 1 << y
                elif section:
                    outside |= 1 << y
    return Event(inside, product.ny), Event(outside, product.ny)


def check_chain_state(state: ChainState, joint: JointMeasure) -> VerificationReport:
    """Check that both rectangle hypotheses hold outside ``Q``-null sets."""
    report = VerificationReport("chain-state")
    product = joint.product
    q = joint.q
    inside, outside = hypothesis_exceptions(state, product)
    checked = (1 << len(state.algebra.atoms)) * (1 << product.ny)
    report.add(
        "rectangle_inside",
        q.measure_of(inside) == 0,
        {"exceptional": inside.to_list()},
        checked,
    )
    report.add(
        "rectangle_outside",
        q.measure_of(outside) == 0,
        {"exceptional": outside.to_list()},
        checked,
    )
    report.counts["exceptional_inside"] = inside.count()
    report.counts["exceptional_outside"] = outside.count()
    return report


def _require_hypotheses(state: ChainState, joint: JointMeasure) -> None:
    report = check_chain_state(state, joint)
    for name in ("rectangle_inside", "rectangle_outside"):
        law = report.law(name)
        if not law.passed:
            raise HypothesisViolated(
                f"Hypothesis {name} fails on a Q-positive set",
                {"hypothesis": name, **(law.witness or {})},
            )


def null_row_witness(
    table: DensityTable, joint: JointMeasure, rho: AnchorLifting
) -> dict[str, Any] | None:
    """Return the first ``(E, y)`` with ``Q({y}) = 0`` whose row of ``table(E)``
    differs from the row of ``ρ.anchor(y)``."""
    product = joint.product
    q = joint.q
    null_rows = [y for y in range(product.ny) if q.mass(y) == 0]
    for e, image in table.items():
        for y in null_rows:
            if product.section_y(image, y) != product.section_y(image, rho.anchor[y]):
                return {"event": e.to_list(), "y": y}
    return None


def _xi_y_table(
    s: Measure,
    tau: DensityTable,
    algebra: SigmaAlgebra,
    h: Event,
    a_h: Event,
) -> DensityTable:
    rest = a_h.difference(h)
    empty = Event.empty(h.size)
    tau_a = tau.apply(a_h)
    if s.measure_of(h) == 0:
        xi_h, xi_rest = empty, tau_a
    elif s.measure_of(rest) == 0:
        xi_h, xi_rest = tau_a, empty
    else:
        xi_h, xi_rest = h, tau_a.difference(h)

    def _xi_y(d: Event) -> Event:
        outside = d.difference(a_h)
        first = outside | (a_h if h.issubset(d) else empty)
        second = outside | (a_h if rest.issubset(d) else empty)
        return (
            (xi_h & tau.apply(first))
            | (xi_rest & tau.apply(second))
            | tau.apply(second.difference(a_h))
        )

    return DensityTable.build(s, algebra, _xi_y)


def extend_lifting_step(
    state: ChainState,
    h: int,
    rcp: Rcp,
    joint: JointMeasure,
    rho: AnchorLifting,
    validate: bool = False,
) -> ChainState:
    """Extend the liftings of ``state`` to the algebra generated by ``h``.

    With ``A_H`` the atom holding ``h`` and ``B_A = {y : S_y(A) > 0}``::

        ξ(H × Y) = [(H × Y) ∩ φ(A_H × B_H)]
                   ∪ [(H^c × Y) ∩ φ(A_H × (Y ∖ B_{A_H∖H}))]

    and every ``E = [F ∩ (H × Y)] ∪ [G ∩ (H^c × Y)]`` goes to
    ``(φ(F) ∩ ξ(H × Y)) ∪ (φ(G) ∩ ξ(H^c × Y))``. The row of a ``Q``-null ``y``
    equals the row of ``ρ.anchor(y)`` in every image of the initial state, and
    the step keeps it that way.

    Args:
        state: Liftings on the current algebra.
        h: Non-measurable event inside one atom of the current algebra.
        rcp: The r.c.p.
        joint: The joint measure.
        rho: Lifting of ``Q``.
        validate: Check both rectangle hypotheses before the step, and the
            lifting laws, restrictions and hypotheses after it.

    Raises:
        NotInsideAtom: If ``h`` is measurable or crosses atoms.
        HypothesisViolated: If validating and a hypothesis fails.
        InternalInvariantBroken: If validating and the step is unsound.
    """
    product = joint.product
    algebra = state.algebra
    h = Event(int(h), product.nx)
    if not h or algebra.is_measurable(h):
        raise NotInsideAtom(
            f"Event {sorted(h)} is already measurable", {"event": h.to_list()}
        )
    a_h = algebra.atom_of(h.lowest())
    if not h.issubset(a_h):
        raise NotInsideAtom(
            f"Event {sorted(h)} is not inside one atom",
            {"event": h.to_list(), "atom": a_h.to_list()},
        )
    if validate:
        _require_hypotheses(state, joint)

    rest = a_h.difference(h)
    refined = algebra.refine(h)
    tau_y = tuple(
        _xi_y_table(s, state.tau_y[y], refined, h, a_h) for y, s in enumerate(rcp)
    )

    full_y = product.y_space.full
    phi = state.phi
    b_h = positive_section_set(rcp, h)
    b_rest = positive_section_set(rcp, rest)
    h_rows = product.rectangle(h, full_y)
    a_rows = product.rectangle(a_h, full_y)
    k = (h_rows & phi.apply(product.rectangle(a_h, b_h))) | (
        ~h_rows & phi.apply(product.rectangle(a_h, ~b_rest))
    )
    if _logger.isEnabledFor(logging.DEBUG):
        _logger.debug("Splitting atom %s along %s", a_h.to_list(), h.to_list())

    def _xi(e: Event) -> Event:
        outside = e.difference(a_rows)
        in_h = in_rest = 0
        for y in range(product.ny):
            section = product.section_y(e, y)
            if h.issubset(section):
                in_h |= 1 << y
            if rest.issubset(section):
                in_rest |= 1 << y
        f = outside | product.rectangle(a_h, in_h)
        g = outside | product.rectangle(a_h, in_rest)
        return (phi.apply(f) & k) | (phi.apply(g) & ~k)

    xi = DensityTable.build(joint.r, product.product_algebra(refined), _xi)
    new_state = ChainState(refined, xi, tau_y)

    if validate:
        _validate_step(state, new_state, joint, rho)
    return new_state


def _validate_step(
    state: ChainState, new_state: ChainState, joint: JointMeasure, rho: AnchorLifting
) -> None:
    for e, image in state.phi.items():
        if new_state.phi.apply(e) != image:
            raise InternalInvariantBroken(
                "Extension does not restrict to φ", {"event": e.to_list()}
            )
    for y, tau in enumerate(state.tau_y):
        for a, image in tau.items():
            if new_state.tau_y[y].apply(a) != image:
                raise InternalInvariantBroken(
                    f"Extension does not restrict to τ_{y}", {"event": a.to_list(), "y": y}
                )
    tables = [("ξ", new_state.phi)]
    tables.extend((f"ξ_{y}", t) for y, t in enumerate(new_state.tau_y))
    for name, table in tables:
        report = verify_lifting(table)
        if not report.passed:
            law = report.law(report.failed()[0])
            raise InternalInvariantBroken(
                f"{name} violates the {law.name} law", law.witness
            )
    report = check_chain_state(new_state, joint)
    if not report.passed:
        law = report.law(report.failed()[0])
        raise InternalInvariantBroken(
            f"Extension violates {law.name}", law.witness
        )
    witness = null_row_witness(new_state.phi, joint, rho)
    if witness is not None:
        raise InternalInvariantBroken("Q-null row differs from its anchor row", witness)


def _critical_ks(expectations: Sequence[SimpleFunction]) -> list[int]:
    """Return the ``k`` at which some ``{f > 1 - 1/k}`` can change, plus one
    guard value beyond all of them."""
    ks = {1}
    for f in expectations:
        for value in f.distinct_values():
            if value < 1:
                ks.add(max(1, math.ceil(1 / (1 - value))))
    ks.add(max(ks) + 1)
    return sorted(ks)


def _triple_limit(
    tables: Sequence[DensityTable],
    expectations: Sequence[SimpleFunction],
    size: int,
) -> Event:
    """Evaluate ``⋂_k ⋃_n ⋂_{m≥n} lift_m({E_m(indicator) > 1 - 1/k})`` from the
    expectations ``E_m(indicator)`` of every step."""
    result = Event.full(size)
    for k in _critical_ks(expectations):
        threshold = Fraction(k - 1, k)
        levels = [
            table.apply(f.super_level_set(threshold))
            for table, f in zip(tables, expectations)
        ]
        union = Event.empty(size)
        for n in range(len(levels)):
            meet = Event.full(size)
            for level in levels[n:]:
                meet &= level
            union |= meet
        result &= union
    return result


def chain_construct(
    chain: AlgebraChain,
    rcp: Rcp,
    joint: JointMeasure,
    rho: AnchorLifting,
    null_value: Fraction = Fraction(0),
    validate: bool = False,
) -> ChainResult:
    """Run :func:`extend_lifting_step` along ``chain`` and take limits.

    ``φ̃`` and ``τ̃_y`` are evaluated with the truncated limit formula and
    checked against the last step. ``N_F`` collects the conditioning
    exceptions of every step plus the ``Q``-null rows at which the section
    identity ``[φ̃(F)]^y = τ̃_y(F^y)`` fails.

    Raises:
        InternalInvariantBroken: If the limit differs from the last step, or
            some ``N_F`` is not ``Q``-null.
    """
    product = joint.product
    states = [initial_state(rcp, joint, rho)]
    for h in chain.generators:
        states.append(extend_lifting_step(states[-1], h, rcp, joint, rho, validate))
    last = states[-1]
    _logger.info("Built %d chain steps", len(states))

    algebras = [state.algebra for state in states]
    conditioners = [SectionConditioner(a, rcp, joint, null_value) for a in algebras]

    tau_tilde = []
    for y, s in enumerate(rcp):
        tables = [state.tau_y[y] for state in states]
        images = {}
        for a in chain.target.events():
            indicator = SimpleFunction.indicator(product.x_space, a)
            expectations = [
                conditional_expectation(indicator, algebra, s, null_value)
                for algebra in algebras
            ]
            image = _triple_limit(tables, expectations, product.nx)
            if image != last.tau_y[y].apply(a):
                raise InternalInvariantBroken(
                    f"Limit lifting of S_{y} differs from the last step",
                    {"event": a.to_list(), "y": y},
                )
            images[int(a)] = image
        tau_tilde.append(DensityTable(s, chain.target, images))

    q = joint.q
    tables = [state.phi for state in states]
    images = {}
    exceptional = {}
    for f in conditioners[-1].product_algebra.events():
        expectations = []
        n_f = Event.empty(product.ny)
        for c in conditioners:
            expectation, exceptions = c.indicator(f)
            expectations.append(expectation)
            n_f |= exceptions
        image = _triple_limit(tables, expectations, product.space.size)
        if image != last.phi.apply(f):
            raise InternalInvariantBroken(
                "Limit lifting differs from the last step", {"event": f.to_list()}
            )
        images[int(f)] = image

        for y in range(product.ny):
            expected = tau_tilde[y].apply(product.section_y(f, y))
            if product.section_y(image, y) != expected:
                n_f |= Event(1 << y, product.ny)
        if q.measure_of(n_f) != 0:
            raise InternalInvariantBroken(
                "Section identity fails on a Q-positive set",
                {"event": f.to_list(), "exceptional": n_f.to_list()},
            )
        exceptional[int(f)] = n_f

    phi_tilde = DensityTable(joint.r, conditioners[-1].product_algebra, images)
    return ChainResult(phi_tilde, tuple(tau_tilde), exceptional, tuple(states))


def close_sections(
    phi: DensityTable,
    tau_y: Sequence[DensityTable | AnchorLifting],
    product: ProductSpace,
) -> DensityTable:
    """Return ``ψ`` with ``[ψ(E)]^y = τ_y([φ(E)]^y)`` for every ``y``."""

    def _psi(e: Event) -> Event:
        image = phi.apply(e)
        return product.from_sections(
            [tau.apply(product.section_y(image, y)) for y, tau in enumerate(tau_y)]
        )

    return DensityTable.build(phi.measure, phi.algebra, _psi)


def _deficient(
    psi: DensityTable, rcp: Rcp, product: ProductSpace
) -> tuple[Event, int] | None:
    """Return the first ``(H, y)`` whose section union is not ``S_y``-full."""
    full = product.space.full
    for h, image in psi.items():
        complement = psi.apply(full ^ h)
        for y, s in enumerate(rcp):
            union = product.section_y(image, y) | product.section_y(complement, y)
            if s.measure_of(union) != 1:
                return h, y
    return None


def repair_full_sections(
    psi: DensityTable,
    tau_y: Sequence[DensityTable | AnchorLifting],
    rcp: Rcp,
    product: ProductSpace,
    budget: Budget = DEFAULT_BUDGET,
) -> tuple[DensityTable, int]:
    """Enlarge ``ψ`` until every section union is full.

    While some ``(H, y₀)`` has ``S_{y₀}([ψ(H)]^{y₀} ∪ [ψ(H^c)]^{y₀}) < 1``, let
    ``W`` be the complement of ``τ_{y₀}`` of that union and set::

        [ψ̂(E)]^{y₀} = [ψ(E)]^{y₀} ∪ (W ∩ [ψ(H ∪ E)]^{y₀})

    then close the sections of ``ψ̂`` under ``τ_y`` again. Each pass strictly
    enlarges the table.

    Returns:
        The repaired density and the number of passes.

    Raises:
        InternalInvariantBroken: If more than ``budget.max_repair_passes``
            passes are needed.
    """
    passes = 0
    while True:
        deficient = _deficient(psi, rcp, product)
        if deficient is None:
            return psi, passes
        if passes >= budget.max_repair_passes:
            raise InternalInvariantBroken(
                f"Section repair did not settle after {passes} passes",
                {"passes": passes},
            )
        passes += 1
        h, y0 = deficient
        full = product.space.full
        union = product.section_y(psi.apply(h), y0) | product.section_y(
            psi.apply(full ^ h), y0
        )
        w = ~tau_y[y0].apply(union)
        if _logger.isEnabledFor(logging.DEBUG):
            _logger.debug("Repairing row %d for %s", y0, h.to_list())

        current = psi

        def _augment(e: Event, current: DensityTable = current) -> Event:
            image = current.apply(e)
            sections = [product.section_y(image, y) for y in range(product.ny)]
            sections[y0] |= w & product.section_y(current.apply(h | e), y0)
            return product.from_sections(sections)

        augmented = DensityTable.build(psi.measure, psi.algebra, _augment)
        psi = close_sections(augmented, tau_y, product)


def _p_dense(chain: AlgebraChain, p: Measure) -> bool:
    return all((atom & p.support).count() <= 1 for atom in chain.target.atoms)


def build_general_split(
    chain: AlgebraChain | None,
    rcp: Rcp,
    joint: JointMeasure,
    rho: AnchorLifting | None = None,
    null_value: Fraction = Fraction(0),
    budget: Budget = DEFAULT_BUDGET,
    validate: bool = False,
) -> GeneralSplit:
    """Build split liftings with the section property for any r.c.p.

    Args:
        chain: Algebra chain whose target is ``P``-dense (every atom holds at
            most one ``P``-positive point); singletons by default.
        rcp: The r.c.p.
        joint: The joint measure.
        rho: Lifting of ``Q``; smallest-anchor by default.
        null_value: Value of conditional expectations on null atoms.
        budget: Limits.
        validate: Validate every chain step.

    Raises:
        PreconditionFailed: If the chain's target is not ``P``-dense.
        BudgetExceeded: If the product has more points than allowed.
    """
    product = joint.product
    size = product.nx * product.ny
    if size > budget.max_points:
        raise BudgetExceeded(
            f"Product of {size} points exceeds {budget.max_points}", {"points": size}
        )
    if chain is None:
        chain = AlgebraChain.singletons(product.x_space)
    if not _p_dense(chain, joint.p):
        raise PreconditionFailed(
            "Chain target is not P-dense", {"generators": chain.to_list()}
        )
    if rho is None:
        rho = AnchorLifting.smallest_anchor(joint.q)

    chain_result = chain_construct(chain, rcp, joint, rho, null_value, validate)

    try:
        phi = extend_density(chain_result.phi_tilde)
        tau_y = tuple(extend_density(t) for t in chain_result.tau_tilde)
        sigma_y = tuple(extend_density_to_lifting(t) for t in tau_y)
    except NotADensity as exception:
        raise InternalInvariantBroken(str(exception), exception.witness) from exception

    psi = close_sections(phi, sigma_y, product)
    psi, passes = repair_full_sections(psi, sigma_y, rcp, product, budget)
    if passes:
        _logger.info("Section repair took %d passes", passes)

    def _pi(e: Event) -> Event:
        image = psi.apply(e)
        return product.from_sections(
            [s.apply(product.section_y(image, y)) for y, s in enumerate(sigma_y)]
        )

    try:
        pi = AnchorLifting.from_table(joint.r, _pi)
    except NotADensity as exception:
        raise InternalInvariantBroken(
            f"Sectionwise map is not a lifting: {exception}", exception.witness
        ) from exception

    split = SplitLiftings(product=product, pi=pi, sigma_y=sigma_y, rho=rho)
    return GeneralSplit(
        chain=chain,
        chain_result=chain_result,
        psi=psi,
        tau_y=tau_y,
        split=split,
        rcp=rcp,
        repair_passes=passes,
    )


def general_split(
    chain: AlgebraChain | None,
    rcp: Rcp,
    joint: JointMeasure,
    rho: AnchorLifting | None = None,
    null_value: Fraction = Fraction(0),
    budget: Budget = DEFAULT_BUDGET,
) -> SplitLiftings:
    """Return only the liftings of :func:`build_general_split`."""
    return build_general_split(chain, rcp, joint, rho, null_value, budget).split


def _function_sections_witness(sl: SplitLiftings) -> dict[str, Any] | None:
    """Check ``[π(f)]^y = σ_y([π(f)]^y)`` for the injective function
    ``f(p) = p``, which covers every simple function at once."""
    product = sl.product
    f = SimpleFunction(product.space, tuple(range(product.space.size)))
    lifted = lift_function(sl.pi, f)
    for y, s in enumerate(sl.sigma_y):
        section = _section_function(lifted, product, y)
        if lift_function(s, section) != section:
            return {"y": y}
    return None


def verify_general_split(
    result: GeneralSplit, budget: Budget = DEFAULT_BUDGET, seed: int = 0
) -> VerificationReport:
    """Check ``ψ`` and the liftings produced by :func:`build_general_split`.

    The laws are the density laws of ``ψ``, its section laws with respect to
    the ``σ_y``, the lifting laws of ``π`` and every ``σ_y``, (SP) and its
    function form ``[π(f)]^y = σ_y(f^y)``.
    """
    sl = result.split
    product = sl.product
    report = VerificationReport("split-general")
    report.merge(verify_density(result.psi, budget, seed), "psi.")
    report.merge(section_laws(result.psi, sl.sigma_y, result.rcp, product), "psi.")
    report.merge(verify_lifting(sl.pi, budget, seed), "pi.")
    for y, s in enumerate(sl.sigma_y):
        report.merge(verify_lifting(s, budget, seed), f"sigma_{y}.")

    witness = section_property_witness(sl.pi, sl.sigma_y, product)
    report.add("SP", witness is None, witness, 1 << product.space.size)

    witness = _function_sections_witness(sl)
    report.add("function_sections", witness is None, witness, product.ny)

    report.counts["repair_passes"] = result.repair_passes
    return report
