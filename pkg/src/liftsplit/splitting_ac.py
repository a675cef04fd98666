# -*- coding: utf-8 -*-
"""Liftings that split along a product r.c.p. satisfying (IT).

The pipeline implemented here goes from a joint measure ``R`` on ``X × Y``,
a product r.c.p. ``{S_y}`` and a lifting ``ρ`` of ``Q`` to

1. lower densities ``ψ`` of ``R̂`` and ``ψ_y`` of ``Ŝ_y`` compatible over
   rectangles (:func:`build_split_densities`), and then
2. liftings ``π`` of ``R̂`` and ``σ_y`` of ``Ŝ_y`` satisfying the section
   property (SP) and the rectangle formula (RF)
   (:func:`promote_to_split_liftings`).

Both steps need condition (IT). When ``R ≪ P ⊗ Q`` a product r.c.p. can
always be *repaired* on a ``Q``-null set so that (IT) holds
(:func:`repair_rcp`); :func:`full_ac_pipeline` chains everything together.
Finally, :func:`prop27_report` compares the three equivalent forms of (IT)
and either constructs an (RF) family or searches for one.

Example:
    >>> from liftsplit.generators import diag
    >>> scenario = diag.Diag(2).generate()
    >>> split = full_ac_pipeline(scenario.joint)
    >>> verify_split_liftings(split).passed
    True
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from typing import Any

import dataclasses
import logging

from liftsplit.budget import DEFAULT_BUDGET, Budget
from liftsplit.errors import (
    BudgetExceeded,
    InternalInvariantBroken,
    ITViolated,
    NotADensity,
    PreconditionFailed,
)
from liftsplit.event import Event
from liftsplit.lifting import (
    AnchorLifting,
    DensityTable,
    extend_density_to_lifting,
    lifting_topology_member,
    verify_density,
    verify_lifting,
)
from liftsplit.measure import Measure, SigmaAlgebra
from liftsplit.product import (
    Counterexample,
    JointMeasure,
    ProductSpace,
    Rcp,
    NullYPolicy,
    ac_witness,
    check_IT,
    check_strong,
    make_rcp_ac,
    positive_section_sets,
    product_measure,
    radon_nikodym,
    rcp_from_joint,
    support_event,
)
from liftsplit.report import VerificationReport
from liftsplit.search import SearchResult
from liftsplit.searches import Exhaustive, Genetic


__author__ = "Chariton Karamitas <huku@census-labs.com>"

__all__ = [
    "SplitDensities",
    "SplitLiftings",
    "RepairResult",
    "EquivalenceReport",
    "product_anchor_lifting",
    "boolean_hom_phi_y",
    "support_null_set",
    "build_split_densities",
    "section_laws",
    "verify_split_densities",
    "promote_to_split_liftings",
    "verify_split_liftings",
    "rectangle_formula_witness",
    "section_property_witness",
    "repair_rcp",
    "full_ac_pipeline",
    "find_rf_witness",
    "prop27_report",
]


_logger = logging.getLogger(__name__)

Image = Callable[[int], Event]


@dataclasses.dataclass(frozen=True)
class SplitDensities:
    """Densities of ``R̂`` and of every ``Ŝ_y`` compatible over rectangles.

    Args:
        product: The product space.
        rcp: The r.c.p. the densities were built for.
        psi: Density of ``R̂`` on the product power set.
        psi_y: ``psi_y[y]`` is a density of ``Ŝ_y``.
        rho: Lifting of ``Q``.
        support: The support event ``E_R``.
        null_set: ``N = {y : S_y(E_R^y) < 1}``.
        branch_set: The ``Q``-null rows built from ``φ_y``; contains
            ``null_set``.
    """

    product: ProductSpace
    rcp: Rcp
    psi: DensityTable
    psi_y: tuple[DensityTable | AnchorLifting, ...]
    rho: AnchorLifting
    support: Event
    null_set: Event
    branch_set: Event


@dataclasses.dataclass(frozen=True)
class SplitLiftings:
    """Liftings ``π`` of ``R̂`` and ``σ_y`` of ``Ŝ_y`` with (SP).

    Args:
        product: The product space.
        pi: Lifting of the joint measure.
        sigma_y: ``sigma_y[y]`` is a lifting of ``Ŝ_y``.
        rho: Lifting of ``Q``.
    """

    product: ProductSpace
    pi: AnchorLifting
    sigma_y: tuple[AnchorLifting, ...]
    rho: AnchorLifting

    def to_dict(self) -> dict[str, Any]:
        return {
            "pi": self.pi.to_list(),
            "sigma_y": [s.to_list() for s in self.sigma_y],
            "rho": self.rho.to_list(),
        }


@dataclasses.dataclass(frozen=True)
class RepairResult:
    """An r.c.p. ``T`` and a lifting ``ρ'`` for which (IT) holds.

    Args:
        rcp: The repaired r.c.p. ``T``.
        rho: The repaired lifting ``ρ'``.
        phi: The product anchor lifting built from ``ρ'``.
        null_set: The set ``N`` the repair acted upon.
    """

    rcp: Rcp
    rho: AnchorLifting
    phi: AnchorLifting
    null_set: Event


@dataclasses.dataclass(frozen=True)
class EquivalenceReport:
    """Evaluation of the three equivalent forms of (IT).

    Args:
        it_holds: Condition (IT).
        sections_open: Every ``B_A`` belongs to the lifting topology of ``ρ``.
        strong: ``ρ`` is strong for the topology generated by the ``B_A``.
        counterexample: The (IT) counterexample, if any.
        witness: The constructed (RF) liftings, when (IT) holds.
        search: The (RF) family search, when (IT) fails.
        report: Verification report of the whole evaluation.
    """

    it_holds: bool
    sections_open: bool
    strong: bool
    counterexample: Counterexample | None
    witness: SplitLiftings | None
    search: SearchResult | None
    report: VerificationReport

    @property
    def agree(self) -> bool:
        return self.it_holds == self.sections_open == self.strong


def product_anchor_lifting(sigma: AnchorLifting, rho: AnchorLifting) -> AnchorLifting:
    """Return the lifting of ``P ⊗ Q`` anchoring ``(x, y)`` to
    ``(σ.anchor(x), ρ.anchor(y))``.

    It satisfies ``φ(A × B) = σ(A) × ρ(B)``.
    """
    joint = product_measure(sigma.measure, rho.measure)
    product = joint.product
    return AnchorLifting(
        joint.r,
        tuple(
            product.point(sigma.anchor[x], rho.anchor[y])
            for x in range(product.nx)
            for y in range(product.ny)
        ),
    )


def boolean_hom_phi_y(
    tau_y: AnchorLifting,
    rho: AnchorLifting,
    y: int,
    product: ProductSpace,
    joint: JointMeasure | None = None,
) -> Image:
    """Return ``φ_y : E ↦ τ_y(E^{ρ.anchor(y)})``.

    ``φ_y`` is a Boolean homomorphism from the product events into the
    ``τ_y``-images with ``φ_y(A × Y) = τ_y(A)`` and ``φ_y(X × B) = X`` exactly
    when ``y ∈ ρ(B)``. Under (IT) it vanishes on ``R``-null events.

    Args:
        tau_y: Lifting of ``S_y``.
        rho: Lifting of ``Q``.
        y: Row of the homomorphism.
        product: The product space.
        joint: When given, ``φ_y`` is checked to vanish on ``R``-null events.

    Raises:
        ITViolated: If ``joint`` is given and some ``R``-null event has a
            nonempty image.
    """
    row = rho.anchor[y]

    def _phi_y(e: int) -> Event:
        return tau_y.apply(product.section_y(e, row))

    if joint is not None:
        _check_vanishing(_phi_y, joint, y)
    return _phi_y


def _check_vanishing(phi_y: Image, joint: JointMeasure, y: int) -> None:
    """Check that ``φ_y`` kills every ``R``-null event.

    ``φ_y`` is monotone, so checking the largest null event suffices.
    """
    null_part = joint.r.null_part
    image = phi_y(null_part)
    if image:
        raise ITViolated(
            f"φ_{y} does not vanish on R-null events",
            {"y": y, "event": null_part.to_list(), "image": image.to_list()},
        )


def support_null_set(
    rcp: Rcp, support: Event, p: Measure
) -> tuple[Event, Event]:
    """Return ``N = {y : S_y(E_R^y) < 1}`` and the defective rows.

    A row ``y ∉ N`` is defective when some ``P``-positive point of ``E_R^y`` is
    ``S_y``-null, which keeps ``A ↦ σ(A ∩ E_R^y)`` from being a density of
    ``Ŝ_y``. Defective rows are always ``Q``-null.
    """
    product = rcp.product
    positive = p.support
    null_set = defective = 0
    for y, s in enumerate(rcp):
        section = product.section_y(support, y)
        if s.measure_of(section) < 1:
            null_set |= 1 << y
        elif any(s.mass(x) == 0 for x in section & positive):
            defective |= 1 << y
    return Event(null_set, product.ny), Event(defective, product.ny)


def _support_density(
    s: Measure, sigma: AnchorLifting, section: Event
) -> DensityTable:
    """Return the density ``A ↦ X`` if ``A ≅ X``, else ``σ(A ∩ E_R^y)``."""
    full = s.space.full

    def _image(a: Event) -> Event:
        if s.measure_of(~a) == 0:
            return full
        return sigma.apply(a & section)

    return DensityTable.build(s, s.algebra, _image)


def build_split_densities(
    rcp: Rcp,
    rho: AnchorLifting,
    joint: JointMeasure,
    base: Measure | None = None,
    budget: Budget = DEFAULT_BUDGET,
) -> SplitDensities:
    """Build compatible densities ``ψ`` of ``R̂`` and ``ψ_y`` of ``Ŝ_y``.

    With ``σ`` the smallest-anchor lifting of ``P`` and ``φ`` the product
    anchor lifting of ``σ`` and ``ρ``, the support event is
    ``E_R = φ({f > 0})`` for ``f = dR / d(P ⊗ Q)``. Then::

        ψ₁(E) = X × Y if E ≅ X × Y, otherwise φ(E ∩ E_R)
        ψ_y(A) = X if A ≅ X, otherwise σ(A ∩ E_R^y)

    and ``[ψ(E)]^y = ψ_y([ψ₁(E)]^y)``. On the branch rows (``N`` together
    with the defective rows) ``ψ_y`` is the smallest-anchor lifting ``τ_y``
    of ``S_y`` and ``[ψ(E)]^y = φ_y(E)``.

    Args:
        rcp: Product r.c.p.
        rho: Lifting of ``Q``.
        joint: The joint measure.
        base: Measure the support is taken with respect to; ``P ⊗ Q`` by
            default.
        budget: Size limits.

    Raises:
        ITViolated: If (IT) fails.
        NotAbsolutelyContinuous: If ``R`` is not absolutely continuous with
            respect to the base.
        BudgetExceeded: If the product has more points than allowed.
    """
    product = joint.product
    size = product.nx * product.ny
    if size > budget.max_points:
        raise BudgetExceeded(
            f"Product of {size} points exceeds {budget.max_points}", {"points": size}
        )

    counterexample = check_IT(rcp, rho, joint)
    if counterexample is not None:
        raise ITViolated("Condition (IT) fails", counterexample.to_dict())

    p = joint.p
    sigma = AnchorLifting.smallest_anchor(p)
    phi = product_anchor_lifting(sigma, rho)
    if base is None:
        base = phi.measure
    f = radon_nikodym(joint, base)
    support = support_event(f, phi)

    null_set, defective = support_null_set(rcp, support, p)
    branch_set = null_set | defective

    _logger.info(
        "Support %s, N %s, branch rows %s",
        support.to_list(),
        null_set.to_list(),
        branch_set.to_list(),
    )

    psi_y: list[DensityTable | AnchorLifting] = []
    phi_y: dict[int, Image] = {}
    for y, s in enumerate(rcp):
        if y in branch_set:
            tau_y = AnchorLifting.smallest_anchor(s)
            phi_y[y] = boolean_hom_phi_y(tau_y, rho, y, product, joint)
            psi_y.append(tau_y)
        else:
            psi_y.append(_support_density(s, sigma, product.section_y(support, y)))

    r = joint.r
    full = product.space.full

    def _psi(e: Event) -> Event:
        if r.measure_of(~e) == 0:
            psi_1 = full
        else:
            psi_1 = phi.apply(e & support)
        sections = []
        for y in range(product.ny):
            if y in branch_set:
                sections.append(phi_y[y](e))
            else:
                sections.append(psi_y[y].apply(product.section_y(psi_1, y)))
        return product.from_sections(sections)

    psi = DensityTable.build(r, SigmaAlgebra.power_set(product.space), _psi)

    return SplitDensities(
        product=product,
        rcp=rcp,
        psi=psi,
        psi_y=tuple(psi_y),
        rho=rho,
        support=support,
        null_set=null_set,
        branch_set=branch_set,
    )


def section_laws(
    psi: DensityTable,
    psi_y: Sequence[DensityTable | AnchorLifting],
    rcp: Rcp,
    product: ProductSpace,
) -> VerificationReport:
    """Check the section properties of a density ``ψ`` of ``R̂``:

    * ``full_sections``: ``S_y([ψ(E)]^y ∪ [ψ(E^c)]^y) = 1``;
    * ``section_fixed_points``: ``ψ_y([ψ(E)]^y) = [ψ(E)]^y``;
    * ``measurable_sections``: every ``[ψ(E)]_x`` is an event of ``Y``.

    All three are checked for every event and every ``y``.
    """
    report = VerificationReport("sections")
    images = {int(e): image for e, image in psi.items()}
    full = product.space.full

    witness = None
    for e, image in psi.items():
        complement = images[int(full ^ e)]
        for y, s in enumerate(rcp):
            union = product.section_y(image, y) | product.section_y(complement, y)
            if s.measure_of(union) != 1:
                witness = {"event": e.to_list(), "y": y}
                break
        if witness is not None:
            break
    report.add("full_sections", witness is None, witness, len(images))

    witness = None
    for e, image in psi.items():
        for y, density in enumerate(psi_y):
            section = product.section_y(image, y)
            if density.apply(section) != section:
                witness = {"event": e.to_list(), "y": y}
                break
        if witness is not None:
            break
    report.add("section_fixed_points", witness is None, witness, len(images))

    # Automatic on finite power sets.
    witness = None
    y_algebra = SigmaAlgebra.power_set(product.y_space)
    for e, image in psi.items():
        for x in range(product.nx):
            if not y_algebra.is_measurable(product.section_x(image, x)):
                witness = {"event": e.to_list(), "x": x}
                break
        if witness is not None:
            break
    report.add("measurable_sections", witness is None, witness, len(images))
    return report


def verify_split_densities(
    sd: SplitDensities, budget: Budget = DEFAULT_BUDGET, seed: int = 0
) -> VerificationReport:
    """Check the density laws of ``ψ`` and every ``ψ_y``, the section laws of
    :func:`section_laws` and ``rectangle_inclusion``:
    ``ψ(A × B) ⊇ ⋃_{y ∈ ρ(B)} ψ_y(A) × {y}``.
    """
    product = sd.product
    report = VerificationReport("split-densities")
    report.merge(verify_density(sd.psi, budget, seed), "psi.")
    for y, psi_y in enumerate(sd.psi_y):
        report.merge(verify_density(psi_y, budget, seed), f"psi_{y}.")
    report.merge(section_laws(sd.psi, sd.psi_y, sd.rcp, product))

    witness = None
    checked = 0
    for a in product.x_space.events():
        for b in product.y_space.events():
            checked += 1
            image = sd.psi.apply(product.rectangle(a, b))
            lifted = sd.rho.apply(b)
            for y in lifted:
                if not sd.psi_y[y].apply(a).issubset(product.section_y(image, y)):
                    witness = {"a": a.to_list(), "b": b.to_list(), "y": y}
                    break
            if witness is not None:
                break
        if witness is not None:
            break
    report.add("rectangle_inclusion", witness is None, witness, checked)
    return report


def promote_to_split_liftings(sd: SplitDensities) -> SplitLiftings:
    """Promote split densities to split liftings.

    ``σ_y`` is a lifting dominating ``ψ_y`` and ``π`` is defined row by row as
    ``[π(E)]^y = σ_y([ψ(E)]^y)``.
    """
    product = sd.product
    sigma_y = tuple(extend_density_to_lifting(psi_y) for psi_y in sd.psi_y)

    def _pi(e: Event) -> Event:
        image = sd.psi.apply(e)
        return product.from_sections(
            [s.apply(product.section_y(image, y)) for y, s in enumerate(sigma_y)]
        )

    try:
        pi = AnchorLifting.from_table(sd.psi.measure, _pi)
    except NotADensity as exception:
        raise InternalInvariantBroken(
            f"Promoted map is not a lifting: {exception}", exception.witness
        ) from exception

    for e in (Event.empty(product.space.size), product.space.full):
        if pi.apply(e) != _pi(e):
            raise InternalInvariantBroken(
                "Promoted map disagrees with its anchor form", {"event": e.to_list()}
            )

    return SplitLiftings(product=product, pi=pi, sigma_y=sigma_y, rho=sd.rho)


def section_property_witness(
    pi: AnchorLifting, sigma_y: tuple[AnchorLifting, ...], product: ProductSpace
) -> dict[str, Any] | None:
    """Return some ``(E, y)`` with ``σ_y([π(E)]^y) ≠ [π(E)]^y``.

    Both sides are Boolean homomorphisms in ``E``, so they agree on every
    event exactly when they agree on singletons, that is when::

        π.anchor(σ_y.anchor(x), y) = π.anchor(x, y)

    for every ``x``. A failing ``x`` yields the singleton of ``π.anchor(x, y)``
    as the witness event.
    """
    size = product.space.size
    for y, s in enumerate(sigma_y):
        for x in range(product.nx):
            target = pi.anchor[product.point(x, y)]
            if pi.anchor[product.point(s.anchor[x], y)] != target:
                return {"event": Event(1 << target, size).to_list(), "y": y}
    return None


def rectangle_formula_witness(
    pi: AnchorLifting,
    sigma_y: tuple[AnchorLifting, ...],
    rho: AnchorLifting,
    product: ProductSpace,
) -> dict[str, Any] | None:
    """Return the first rectangle with ``π(A×B) ≠ ⋃_{y∈ρ(B)} σ_y(A)×{y}``."""
    empty = product.x_space.empty
    for a in product.x_space.events():
        for b in product.y_space.events():
            lifted = rho.apply(b)
            expected = product.from_sections(
                [s.apply(a) if y in lifted else empty for y, s in enumerate(sigma_y)]
            )
            if pi.apply(product.rectangle(a, b)) != expected:
                return {"a": a.to_list(), "b": b.to_list()}
    return None


def verify_split_liftings(
    sl: SplitLiftings,
    budget: Budget = DEFAULT_BUDGET,
    seed: int = 0,
    sd: SplitDensities | None = None,
) -> VerificationReport:
    """Check the lifting laws of ``π`` and every ``σ_y``, (SP) and (RF).

    When the densities ``sd`` the liftings were promoted from are given,
    ``[π(E)]^y = σ_y([ψ(E)]^y)`` is checked too (law ``promotion``).
    """
    product = sl.product
    report = VerificationReport("split-liftings")
    report.merge(verify_lifting(sl.pi, budget, seed), "pi.")
    for y, s in enumerate(sl.sigma_y):
        report.merge(verify_lifting(s, budget, seed), f"sigma_{y}.")

    num_events = 1 << product.space.size
    num_rectangles = (1 << product.nx) * (1 << product.ny)

    witness = section_property_witness(sl.pi, sl.sigma_y, product)
    report.add("SP", witness is None, witness, num_events)

    witness = rectangle_formula_witness(sl.pi, sl.sigma_y, sl.rho, product)
    report.add("RF", witness is None, witness, num_rectangles)

    if sd is not None:
        witness = None
        for e, image in sd.psi.items():
            expected = product.from_sections(
                [
                    s.apply(product.section_y(image, y))
                    for y, s in enumerate(sl.sigma_y)
                ]
            )
            if sl.pi.apply(e) != expected:
                witness = {"event": e.to_list()}
                break
        report.add("promotion", witness is None, witness, num_events)

    return report


def repair_rcp(rcp: Rcp, rho: AnchorLifting, joint: JointMeasure) -> RepairResult:
    """Modify ``{S_y}`` and ``ρ`` on a ``Q``-null set so that (IT) holds.

    With ``N`` as in :func:`build_split_densities` and ``y₀`` the lowest point
    outside ``N``, ``T_y = S_{y₀}`` on ``N`` and ``T_y = S_y`` elsewhere, while
    ``ρ'`` anchors every ``y ∈ N`` to ``ρ.anchor(y₀)``, so that
    ``ρ'(B) = [ρ(B) ∩ N^c] ∪ N`` whenever ``y₀ ∈ ρ(B)``.

    Raises:
        PreconditionFailed: If some ``S_y`` is not absolutely continuous with
            respect to ``P``.
    """
    product = joint.product
    p = joint.p
    witness = ac_witness(rcp, p)
    if witness is not None:
        x, y = witness
        raise PreconditionFailed(
            f"S_{y} charges the P-null point {x}", {"x": x, "y": y, "condition": "ac"}
        )

    sigma = AnchorLifting.smallest_anchor(p)
    phi = product_anchor_lifting(sigma, rho)
    support = support_event(radon_nikodym(joint, phi.measure), phi)
    null_set = Event(
        sum(
            1 << y
            for y, s in enumerate(rcp)
            if s.measure_of(product.section_y(support, y)) < 1
        ),
        product.ny,
    )
    if not null_set:
        return RepairResult(rcp, rho, phi, null_set)

    assert joint.q.measure_of(null_set) == 0, "N is not Q-null"

    y0 = (~null_set).lowest()
    repaired = rcp.replace({y: rcp[y0] for y in null_set})
    anchor = list(rho.anchor)
    for y in null_set:
        anchor[y] = rho.anchor[y0]
    rho_prime = AnchorLifting(rho.measure, tuple(anchor))

    _logger.info("Repaired rows %s from row %d", null_set.to_list(), y0)
    return RepairResult(
        repaired, rho_prime, product_anchor_lifting(sigma, rho_prime), null_set
    )


def full_ac_pipeline(
    joint: JointMeasure,
    base: Measure | None = None,
    rcp: Rcp | None = None,
    rho: AnchorLifting | None = None,
    budget: Budget = DEFAULT_BUDGET,
    make_ac: bool = False,
) -> SplitLiftings:
    """Build split liftings for any ``R ≪ P ⊗ Q``.

    The r.c.p. defaults to :func:`rcp_from_joint` with
    :attr:`NullYPolicy.COPY_LOWEST`, and ``ρ`` to the smallest-anchor lifting
    of ``Q``. The r.c.p. is repaired with :func:`repair_rcp` before the
    densities are built, so the result satisfies (RF) with respect to the
    repaired lifting of ``Q``.

    A default r.c.p. is always absolutely continuous with respect to ``P``.
    A given one may charge ``P``-null points at ``Q``-null ``y``; with
    ``make_ac`` those ``S_y`` are first replaced with :func:`make_rcp_ac`,
    otherwise :func:`repair_rcp` rejects them.

    Raises:
        NotAbsolutelyContinuous: If ``R`` is not absolutely continuous with
            respect to ``base`` (``P ⊗ Q`` by default).
        PreconditionFailed: If ``make_ac`` is off and some ``S_y`` is not
            absolutely continuous with respect to ``P``.
    """
    if base is not None:
        radon_nikodym(joint, base)
    if rcp is None:
        rcp = rcp_from_joint(joint, NullYPolicy.COPY_LOWEST)
    elif make_ac:
        rcp = make_rcp_ac(rcp, joint)
    if rho is None:
        rho = AnchorLifting.smallest_anchor(joint.q)
    repaired = repair_rcp(rcp, rho, joint)
    sd = build_split_densities(repaired.rcp, repaired.rho, joint, base, budget)
    return promote_to_split_liftings(sd)


def find_rf_witness(
    rcp: Rcp,
    rho: AnchorLifting,
    joint: JointMeasure,
    budget: Budget = DEFAULT_BUDGET,
    seed: int = 0,
) -> SearchResult:
    """Search for a family ``{σ_y}`` admitting (RF), exhaustively when the
    number of families fits the budget and genetically otherwise."""
    search = Exhaustive(rcp, rho, joint, budget, seed)
    if search.num_candidates > budget.max_candidates:
        search = Genetic(rcp, rho, joint, budget, seed)
    return search.search()


def prop27_report(
    rcp: Rcp,
    rho: AnchorLifting,
    joint: JointMeasure,
    budget: Budget = DEFAULT_BUDGET,
    seed: int = 0,
) -> EquivalenceReport:
    """Evaluate (IT), ``ℬ_S ⊆ τ_ρ`` and strongness of ``ρ``, and settle (RF).

    When (IT) holds an (RF) family is constructed and verified; otherwise the
    lifting families of the ``S_y`` are searched for one.
    """
    report = VerificationReport("prop27")
    counterexample = check_IT(rcp, rho, joint)
    it_holds = counterexample is None

    sections_open = True
    for a, b in enumerate(positive_section_sets(rcp)):
        if not lifting_topology_member(rho, b):
            sections_open = False
            report.notes.append(f"B_A for A={Event(a, rcp.product.nx).to_list()} is not open")
            break
    strong = check_strong(rcp, rho)

    report.add(
        "equivalence",
        it_holds == sections_open == strong,
        {"it": it_holds, "sections_open": sections_open, "strong": strong},
        checked=3,
    )

    witness = None
    search = None
    if it_holds:
        sd = build_split_densities(rcp, rho, joint, budget=budget)
        witness = promote_to_split_liftings(sd)
        report.merge(verify_split_liftings(witness, budget, seed, sd), "witness.")
    else:
        search = find_rf_witness(rcp, rho, joint, budget, seed)
        report.notes.append(f"search: {search.mode}")
        report.counts["candidates"] = search.candidates
        if search.mode == "exhaustive":
            report.add(
                "no_witness",
                not search.found,
                {"counterexample": counterexample.to_dict() if counterexample else None},
                search.candidates,
                search.mode,
            )

    _logger.info("(IT) %s, (RF) %s", it_holds, "constructed" if it_holds else search)
    return EquivalenceReport(
        it_holds=it_holds,
        sections_open=sections_open,
        strong=strong,
        counterexample=counterexample,
        witness=witness,
        search=search,
        report=report,
    )

