from fractions import Fraction

import pytest

from liftsplit.errors import NotAbsolutelyContinuous, ValidationError
from liftsplit.event import Event
from liftsplit.generators import Diag, NoRF, RandomScenario
from liftsplit.lifting import AnchorLifting, enumerate_liftings
from liftsplit.measure import FiniteSpace, Measure, SigmaAlgebra, SimpleFunction
from liftsplit.product import (
    JointMeasure,
    NullYPolicy,
    ProductSpace,
    Rcp,
    ac_witness,
    check_IT,
    check_strong,
    check_uniform_ac,
    disintegrate_integral,
    generated_topology,
    make_rcp_ac,
    positive_section_set,
    product_measure,
    radon_nikodym,
    rcp_from_joint,
    support_event,
    validate_rcp,
    verify_disintegration,
)


_HALF = Fraction(1, 2)


def _space_a():
    product = ProductSpace(FiniteSpace.of_size(3), FiniteSpace.of_size(2))
    joint = JointMeasure.from_matrix(product, [[_HALF, 0], [0, _HALF], [0, 0]])
    return joint, rcp_from_joint(joint)


def test_flat_index():
    product = ProductSpace(FiniteSpace.of_size(3), FiniteSpace.of_size(2))
    assert product.point(2, 1) == 5
    assert product.coords(5) == (2, 1)
    assert product.coords_dict(3) == {"x": 1, "y": 1}
    assert product.space.labels[1] == "(0,1)"


def test_sections():
    product = ProductSpace(FiniteSpace.of_size(3), FiniteSpace.of_size(2))
    rectangle = product.rectangle(Event.from_points([0, 2], 3), Event.from_points([1], 2))
    assert sorted(product.coords(p) for p in rectangle) == [(0, 1), (2, 1)]
    assert product.section_y(rectangle, 1) == Event.from_points([0, 2], 3)
    assert product.section_y(rectangle, 0) == 0
    assert product.section_x(rectangle, 2) == Event.from_points([1], 2)
    assert product.from_sections([0, Event.from_points([0, 2], 3)]) == rectangle
    assert product.row(0) == product.rectangle(product.x_space.full, 0b01)


def test_product_algebra():
    product = ProductSpace(FiniteSpace.of_size(2), FiniteSpace.of_size(2))
    algebra = product.product_algebra(SigmaAlgebra.trivial(product.x_space))
    assert len(algebra.atoms) == 2
    assert algebra.atoms == (product.row(0), product.row(1))


def test_marginals():
    joint = Diag(2).generate().joint
    uniform = Measure.uniform(FiniteSpace.of_size(2))
    assert joint.p == uniform
    assert joint.q == uniform


def test_joint_validation():
    product = ProductSpace(FiniteSpace.of_size(2), FiniteSpace.of_size(2))
    with pytest.raises(ValidationError):
        JointMeasure.from_matrix(product, [[1, 0]])
    with pytest.raises(ValidationError):
        JointMeasure.from_matrix(product, [[1, 0], [1, 0]])


def test_rcp_from_joint():
    joint, rcp = _space_a()
    assert rcp.to_matrix() == [[1, 0, 0], [0, 1, 0]]


@pytest.mark.parametrize("n", [2, 3])
def test_diag_rcp(n):
    scenario = Diag(n).generate()
    space = FiniteSpace.of_size(n)
    assert list(scenario.rcp) == [Measure.point_mass(space, y) for y in range(n)]


def test_null_policies():
    joint = NoRF().generate().joint
    copied = rcp_from_joint(joint, NullYPolicy.COPY_LOWEST)
    assert copied[1] == copied[0]
    with pytest.raises(ValidationError):
        rcp_from_joint(joint, NullYPolicy.EXPLICIT)
    s1 = Measure.point_mass(joint.product.x_space, 1)
    explicit = rcp_from_joint(joint, NullYPolicy.EXPLICIT, {1: s1})
    assert explicit == NoRF().generate().rcp


def test_validate_rcp():
    joint, rcp = _space_a()
    assert validate_rcp(rcp, joint).passed
    assert verify_disintegration(rcp, joint).passed
    scenario = NoRF().generate()
    assert validate_rcp(scenario.rcp, scenario.joint).passed

    swapped = Rcp(joint.product, (rcp[1], rcp[0]))
    report = validate_rcp(swapped, joint)
    assert report.failed() == ["disintegration"]
    assert report.law("disintegration").witness == {
        "a": [0],
        "b": [0],
        "lhs": "1/2",
        "rhs": "0/1",
    }
    assert not verify_disintegration(swapped, joint).passed


def test_radon_nikodym():
    joint = Diag(2).generate().joint
    base = product_measure(joint.p, joint.q)
    density = radon_nikodym(joint, base)
    assert density.values == (2, 0, 0, 2)
    with pytest.raises(NotAbsolutelyContinuous) as info:
        radon_nikodym(base, joint)
    assert info.value.witness == {"point": 1, "x": 0, "y": 1}


def test_radon_nikodym_reintegrates():
    joint, _ = _space_a()
    base = product_measure(joint.p, joint.q)
    density = radon_nikodym(joint, base)
    for e in joint.product.space.events():
        weighted = sum(
            (density(p) * base.r.mass(p) for p in e), Fraction(0)
        )
        assert weighted == joint.measure_of(e)


def test_support_event():
    scenario = Diag(2).generate()
    joint = scenario.joint
    phi = AnchorLifting.smallest_anchor(product_measure(joint.p, joint.q).r)
    f = radon_nikodym(joint, product_measure(joint.p, joint.q))
    assert support_event(f, phi) == Event.from_points([0, 3], 4)


def test_disintegrate_integral():
    scenario = Diag(2).generate()
    product = scenario.product
    off_diagonal = SimpleFunction.indicator(
        product.space, Event.from_points([product.point(0, 1), product.point(1, 0)], 4)
    )
    assert disintegrate_integral(off_diagonal, scenario.rcp, scenario.joint.q) == 0
    ones = SimpleFunction.constant(product.space, 1)
    assert disintegrate_integral(ones, scenario.rcp, scenario.joint.q) == 1


@pytest.mark.parametrize("k", range(3))
def test_positive_section_set(k):
    rcp = Diag(3).generate().rcp
    assert positive_section_set(rcp, Event.from_points([k], 3)) == Event.from_points([k], 3)


def test_generated_topology():
    opens = generated_topology([0b01, 0b10], 2)
    assert opens == [0b00, 0b01, 0b10, 0b11]
    assert generated_topology([0b011, 0b110], 3) == [0b000, 0b010, 0b011, 0b110, 0b111]


def test_check_strong():
    scenario = Diag(3).generate()
    assert check_strong(scenario.rcp, scenario.rho)
    scenario = NoRF().generate()
    assert not check_strong(scenario.rcp, scenario.rho)


def test_check_it():
    joint, rcp = _space_a()
    for rho in enumerate_liftings(joint.q):
        assert check_IT(rcp, rho, joint) is None

    scenario = NoRF().generate()
    counterexample = check_IT(scenario.rcp, scenario.rho, scenario.joint)
    assert counterexample.to_dict() == {"a": [1], "b": [0, 1], "y": 1}


def test_check_it_fails_for_every_lifting():
    scenario = NoRF().generate()
    for rho in enumerate_liftings(scenario.joint.q):
        assert check_IT(scenario.rcp, rho, scenario.joint) is not None


def test_absolute_continuity():
    scenario = NoRF().generate()
    p = scenario.joint.p
    assert ac_witness(scenario.rcp, p) == (1, 1)
    assert not check_uniform_ac(scenario.rcp, p)
    repaired = make_rcp_ac(scenario.rcp, scenario.joint)
    assert repaired[1] == repaired[0]
    assert check_uniform_ac(repaired, p)
    assert check_IT(repaired, scenario.rho, scenario.joint) is None

    joint, rcp = _space_a()
    assert check_uniform_ac(rcp, joint.p)
    assert make_rcp_ac(rcp, joint) == rcp


@pytest.mark.parametrize("null_rcp", ["copy", "random"])
@pytest.mark.parametrize("seed", range(10))
def test_it_implies_absolute_continuity(seed, null_rcp):
    scenario = RandomScenario(3, 3, null_x=1, null_y=1, seed=seed, null_rcp=null_rcp).generate()
    joint = scenario.joint
    if check_IT(scenario.rcp, scenario.rho, joint) is not None:
        return
    for s in scenario.rcp:
        assert s.absolutely_continuous_witness(joint.p) is None
    assert ac_witness(scenario.rcp, joint.p) is None
