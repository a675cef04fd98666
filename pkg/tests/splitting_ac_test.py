# -*- coding: utf-8 -*-

import itertools
from fractions import Fraction

import pytest

from liftsplit.errors import ITViolated, NotAbsolutelyContinuous, PreconditionFailed
from liftsplit.event import Event
from liftsplit.generators import Diag, NoRF, RandomScenario
from liftsplit.lifting import AnchorLifting, enumerate_liftings, verify_lifting
from liftsplit.measure import FiniteSpace, Measure
from liftsplit.product import (
    JointMeasure,
    ProductSpace,
    Rcp,
    check_IT,
    make_rcp_ac,
    product_measure,
    rcp_from_joint,
)
from liftsplit.splitting_ac import (
    boolean_hom_phi_y,
    build_split_densities,
    full_ac_pipeline,
    product_anchor_lifting,
    prop27_report,
    promote_to_split_liftings,
    repair_rcp,
    section_property_witness,
    verify_split_densities,
    verify_split_liftings,
)


_HALF = Fraction(1, 2)


def _space_a():
    product = ProductSpace(FiniteSpace.of_size(3), FiniteSpace.of_size(2))
    joint = JointMeasure.from_matrix(product, [[_HALF, 0], [0, _HALF], [0, 0]])
    return joint, rcp_from_joint(joint), AnchorLifting.smallest_anchor(joint.q)


def _defective():
    """A ``Q``-null row whose conditional measure misses a ``P``-positive point."""
    product = ProductSpace(FiniteSpace.of_size(2), FiniteSpace.of_size(2))
    joint = JointMeasure.from_matrix(product, [[_HALF, 0], [_HALF, 0]])
    rcp = Rcp.from_matrix(product, [[_HALF, _HALF], [1, 0]])
    return joint, rcp, AnchorLifting(joint.q, (0, 0))


def _null_row():
    """SPACE-A with a third, ``Q``-null ``y`` whose conditional measure sits on
    a point outside the support section."""
    product = ProductSpace(FiniteSpace.of_size(3), FiniteSpace.of_size(3))
    joint = JointMeasure.from_matrix(
        product, [[_HALF, 0, 0], [0, _HALF, 0], [0, 0, 0]]
    )
    rcp = Rcp.from_matrix(product, [[1, 0, 0], [0, 1, 0], [0, 1, 0]])
    return joint, rcp, AnchorLifting.smallest_anchor(joint.q)


def _check_pipeline(joint, rcp, rho):
    sd = build_split_densities(rcp, rho, joint)
    assert verify_split_densities(sd).passed
    sl = promote_to_split_liftings(sd)
    report = verify_split_liftings(sl, sd=sd)
    assert report.passed, report.failed()
    return sd, sl


def test_space_a():
    joint, rcp, rho = _space_a()
    sd, sl = _check_pipeline(joint, rcp, rho)
    assert not sd.null_set
    assert sl.sigma_y[0].anchor == (0, 0, 0)
    assert sl.sigma_y[1].anchor == (1, 1, 1)


def test_defective_rows():
    joint, rcp, rho = _defective()
    assert check_IT(rcp, rho, joint) is None
    sd, _ = _check_pipeline(joint, rcp, rho)
    assert sd.null_set == Event.empty(2)
    assert sd.branch_set == Event.from_points([1], 2)


@pytest.mark.parametrize("n", [2, 3])
def test_diag(n):
    scenario = Diag(n).generate()
    _check_pipeline(scenario.joint, scenario.rcp, scenario.rho)


def test_it_violated():
    scenario = NoRF().generate()
    with pytest.raises(ITViolated) as info:
        build_split_densities(scenario.rcp, scenario.rho, scenario.joint)
    assert info.value.witness == {"a": [1], "b": [0, 1], "y": 1}


def test_base_not_dominating():
    scenario = Diag(2).generate()
    joint = scenario.joint
    with pytest.raises(NotAbsolutelyContinuous):
        full_ac_pipeline(product_measure(joint.p, joint.q), base=joint.r)


def test_repair_null_row():
    joint, rcp, rho = _null_row()
    assert check_IT(rcp, rho, joint).to_dict() == {"a": [1], "b": [0, 2], "y": 2}
    result = repair_rcp(rcp, rho, joint)
    assert result.null_set == Event.from_points([2], 3)
    assert result.rcp[2] == rcp[0]
    assert result.rcp[0] == rcp[0] and result.rcp[1] == rcp[1]
    assert result.rho.anchor == (0, 1, 0)
    assert joint.q.measure_of(result.null_set) == 0
    assert check_IT(result.rcp, result.rho, joint) is None
    _check_pipeline(joint, result.rcp, result.rho)


def test_repair_is_noop_without_null_set():
    joint, rcp, rho = _space_a()
    result = repair_rcp(rcp, rho, joint)
    assert not result.null_set
    assert result.rcp == rcp
    assert result.rho == rho


def test_repair_requires_absolute_continuity():
    scenario = NoRF().generate()
    with pytest.raises(PreconditionFailed) as info:
        repair_rcp(scenario.rcp, scenario.rho, scenario.joint)
    assert info.value.witness == {"x": 1, "y": 1, "condition": "ac"}


def test_full_ac_pipeline_no_rf():
    scenario = NoRF().generate()
    rcp = make_rcp_ac(scenario.rcp, scenario.joint)
    sl = full_ac_pipeline(scenario.joint, rcp=rcp, rho=scenario.rho)
    assert verify_split_liftings(sl).passed


@pytest.mark.parametrize("seed", range(20))
def test_full_ac_pipeline_random(seed):
    scenario = RandomScenario(3, 3, null_x=1, null_y=1, seed=seed).generate()
    sl = full_ac_pipeline(scenario.joint, rcp=scenario.rcp, rho=scenario.rho)
    report = verify_split_liftings(sl)
    assert report.passed, report.failed()


@pytest.mark.parametrize("seed", range(20))
def test_it_implies_rectangle_formula(seed):
    scenario = RandomScenario(3, 2, null_x=1, null_y=1, seed=seed, null_rcp="random").generate()
    if check_IT(scenario.rcp, scenario.rho, scenario.joint) is not None:
        return
    _check_pipeline(scenario.joint, scenario.rcp, scenario.rho)


def test_prop27_no_rf():
    scenario = NoRF().generate()
    evaluation = prop27_report(scenario.rcp, scenario.rho, scenario.joint)
    assert not evaluation.it_holds
    assert not evaluation.sections_open
    assert not evaluation.strong
    assert evaluation.agree
    assert evaluation.witness is None
    assert not evaluation.search.found
    assert evaluation.report.passed
    assert evaluation.report.law("no_witness").passed


def test_prop27_space_a():
    joint, rcp, rho = _space_a()
    evaluation = prop27_report(rcp, rho, joint)
    assert evaluation.it_holds and evaluation.sections_open and evaluation.strong
    assert evaluation.witness is not None
    assert evaluation.report.passed


@pytest.mark.parametrize("seed", range(10))
def test_prop27_agrees_for_every_lifting(seed):
    scenario = RandomScenario(3, 3, null_x=1, null_y=1, seed=seed, null_rcp="random").generate()
    for rho in enumerate_liftings(scenario.joint.q):
        evaluation = prop27_report(scenario.rcp, rho, scenario.joint)
        assert evaluation.agree
        assert evaluation.report.passed


def test_point_masses_split():
    space = FiniteSpace.of_size(2)
    product = ProductSpace(space, space)
    joint = product_measure(Measure.point_mass(space, 0), Measure.uniform(space))
    sl = full_ac_pipeline(joint)
    assert verify_split_liftings(sl).passed
    assert sl.product == product


@pytest.mark.parametrize(
    "p_masses, q_masses",
    [
        ([_HALF, 0, _HALF], [Fraction(1, 3), Fraction(2, 3), 0]),
        ([_HALF, _HALF, 0], [_HALF, _HALF]),
        ([1, 0], [0, _HALF, _HALF]),
    ],
)
def test_product_anchor_lifting(p_masses, q_masses):
    p = Measure.from_masses(FiniteSpace.of_size(len(p_masses)), p_masses)
    q = Measure.from_masses(FiniteSpace.of_size(len(q_masses)), q_masses)
    joint = product_measure(p, q)
    product = joint.product
    full_x, full_y = product.x_space.full, product.y_space.full
    for sigma in enumerate_liftings(p):
        for rho in enumerate_liftings(q):
            phi = product_anchor_lifting(sigma, rho)
            assert phi.measure == joint.r
            report = verify_lifting(phi)
            assert report.passed, report.failed()
            for a in product.x_space.events():
                expected = product.rectangle(sigma.apply(a), full_y)
                assert phi.apply(product.rectangle(a, full_y)) == expected
                for b in product.y_space.events():
                    expected = product.rectangle(sigma.apply(a), rho.apply(b))
                    assert phi.apply(product.rectangle(a, b)) == expected
            for b in product.y_space.events():
                expected = product.rectangle(full_x, rho.apply(b))
                assert phi.apply(product.rectangle(full_x, b)) == expected


def test_product_anchor_lifting_space_a():
    joint, _, rho = _space_a()
    product = joint.product
    phi = product_anchor_lifting(AnchorLifting.smallest_anchor(joint.p), rho)
    full_y = product.y_space.full
    e = product.rectangle(product.x_space.event([0]), full_y)
    assert phi.apply(e) == product.rectangle(product.x_space.event([0, 2]), full_y)


def test_boolean_hom_phi_y_space_a():
    joint, rcp, rho = _space_a()
    product = joint.product
    full_x, full_y = product.x_space.full, product.y_space.full
    for y, s in enumerate(rcp):
        tau = AnchorLifting.smallest_anchor(s)
        phi_y = boolean_hom_phi_y(tau, rho, y, product, joint)
        for a in product.x_space.events():
            assert phi_y(product.rectangle(a, full_y)) == tau.apply(a)
        for b in product.y_space.events():
            expected = full_x if y in rho.apply(b) else product.x_space.empty
            assert phi_y(product.rectangle(full_x, b)) == expected
        for e in product.space.events():
            assert phi_y(~e) == ~phi_y(e)
            if joint.r.is_null(e):
                assert not phi_y(e)
            for f in product.space.events():
                assert phi_y(e & f) == phi_y(e) & phi_y(f)


def test_boolean_hom_phi_y_no_rf():
    scenario = NoRF().generate()
    joint, rho = scenario.joint, scenario.rho
    product = joint.product
    tau_0 = AnchorLifting.smallest_anchor(scenario.rcp[0])
    tau_1 = AnchorLifting.smallest_anchor(scenario.rcp[1])
    assert not boolean_hom_phi_y(tau_0, rho, 0, product, joint)(joint.r.null_part)

    phi_1 = boolean_hom_phi_y(tau_1, rho, 1, product)
    assert phi_1(joint.r.null_part) == product.x_space.full
    with pytest.raises(ITViolated) as info:
        boolean_hom_phi_y(tau_1, rho, 1, product, joint)
    assert info.value.witness == {"y": 1, "event": [1, 2, 3], "image": [0, 1]}


@pytest.mark.parametrize("seed", range(10))
def test_boolean_hom_phi_y_vanishes_under_it(seed):
    scenario = RandomScenario(3, 3, null_x=1, null_y=1, seed=seed, null_rcp="random").generate()
    joint, rho = scenario.joint, scenario.rho
    if check_IT(scenario.rcp, rho, joint) is not None:
        return
    for y, s in enumerate(scenario.rcp):
        tau = AnchorLifting.smallest_anchor(s)
        phi_y = boolean_hom_phi_y(tau, rho, y, joint.product, joint)
        assert not phi_y(joint.r.null_part)


def test_full_ac_pipeline_make_ac():
    scenario = NoRF().generate()
    with pytest.raises(PreconditionFailed):
        full_ac_pipeline(scenario.joint, rcp=scenario.rcp, rho=scenario.rho)
    sl = full_ac_pipeline(scenario.joint, rcp=scenario.rcp, rho=scenario.rho, make_ac=True)
    assert verify_split_liftings(sl).passed
    assert sl.sigma_y[1].anchor == (0, 0)


def _section_property_violation(pi, sigma_y, product):
    for e in product.space.events():
        image = pi.apply(e)
        for y, s in enumerate(sigma_y):
            section = product.section_y(image, y)
            if s.apply(section) != section:
                return e, y
    return None


def _check_section_property_witness(joint, rcp):
    product = joint.product
    families = itertools.product(*(list(enumerate_liftings(s)) for s in rcp))
    for sigma_y in families:
        for pi in enumerate_liftings(joint.r):
            witness = section_property_witness(pi, sigma_y, product)
            violation = _section_property_violation(pi, sigma_y, product)
            assert (witness is None) == (violation is None)
            if witness is not None:
                y = witness["y"]
                section = product.section_y(pi.apply(product.space.event(witness["event"])), y)
                assert sigma_y[y].apply(section) != section


def test_section_property_witness():
    product = ProductSpace(FiniteSpace.of_size(3), FiniteSpace.of_size(1))
    joint = JointMeasure.from_matrix(product, [[_HALF], [_HALF], [0]])
    s = rcp_from_joint(joint)[0]
    pi = AnchorLifting(joint.r, (0, 1, 0))
    assert section_property_witness(pi, (AnchorLifting(s, (0, 1, 0)),), product) is None
    witness = section_property_witness(pi, (AnchorLifting(s, (0, 1, 1)),), product)
    assert witness == {"event": [0], "y": 0}
    _check_section_property_witness(joint, rcp_from_joint(joint))


def test_section_property_witness_space_a():
    joint, rcp, _ = _space_a()
    _check_section_property_witness(joint, rcp)


@pytest.mark.parametrize("seed", range(4))
def test_section_property_witness_random(seed):
    scenario = RandomScenario(3, 2, null_x=1, null_y=1, seed=seed).generate()
    _check_section_property_witness(scenario.joint, scenario.rcp)
