# -*- coding: utf-8 -*-

from fractions import Fraction

import pytest

from liftsplit.budget import Budget
from liftsplit.errors import BudgetExceeded, NotAbsolutelyContinuous, PreconditionFailed
from liftsplit.generators import Diag, NoRF, RandomScenario
from liftsplit.measure import Measure
from liftsplit.product import check_IT, product_measure, radon_nikodym


def test_no_rf():
    scenario = NoRF().generate()
    assert scenario.name == "no-rf"
    assert scenario.joint.p.masses == (1, 0)
    assert scenario.joint.q.masses == (1, 0)
    assert scenario.rcp[1] == Measure.point_mass(scenario.product.x_space, 1)
    assert check_IT(scenario.rcp, scenario.rho, scenario.joint) is not None


@pytest.mark.parametrize("n", [2, 3])
def test_diag(n):
    scenario = Diag(n).generate()
    assert scenario.name == f"diag-{n}"
    assert scenario.joint.p.masses == (Fraction(1, n),) * n
    for y, s in enumerate(scenario.rcp):
        assert s == Measure.point_mass(scenario.product.x_space, y)
    assert check_IT(scenario.rcp, scenario.rho, scenario.joint) is None


def test_diag_not_ac():
    scenario = Diag(3).generate()
    pq = product_measure(scenario.joint.p, scenario.joint.q)
    with pytest.raises(NotAbsolutelyContinuous) as info:
        radon_nikodym(pq, scenario.joint)
    assert info.value.witness == {"point": 1, "x": 0, "y": 1}


def test_diag_errors():
    with pytest.raises(PreconditionFailed):
        Diag(1)
    with pytest.raises(BudgetExceeded):
        Diag(5)
    Diag(5, Budget(max_points=25))


@pytest.mark.parametrize(
    "args",
    [
        (3, 2, 3, 0),
        (3, 2, 0, 2),
        (3, 2, -1, 0),
    ],
)
def test_random_preconditions(args):
    with pytest.raises(PreconditionFailed):
        RandomScenario(*args)


def test_random_errors():
    with pytest.raises(PreconditionFailed):
        RandomScenario(2, 2, null_rcp="lowest")
    with pytest.raises(BudgetExceeded):
        RandomScenario(4, 4)


@pytest.mark.parametrize("seed", range(10))
def test_random_scenario(seed):
    scenario = RandomScenario(3, 3, null_x=1, null_y=1, seed=seed).generate()
    p, q = scenario.joint.p, scenario.joint.q
    assert sum(1 for m in p.masses if m == 0) == 1
    assert sum(1 for m in q.masses if m == 0) == 1
    assert scenario.seed == seed
    assert scenario.name == f"random-3x3-{seed}"

    # Null rows copy the lowest positive row.
    lowest = min(y for y in range(3) if q.mass(y) > 0)
    for y in range(3):
        if q.mass(y) == 0:
            assert scenario.rcp[y] == scenario.rcp[lowest]


@pytest.mark.parametrize("null_rcp", ["copy", "random"])
def test_random_is_deterministic(null_rcp):
    first = RandomScenario(3, 2, 1, 1, seed=3, null_rcp=null_rcp).generate()
    second = RandomScenario(3, 2, 1, 1, seed=3, null_rcp=null_rcp).generate()
    assert first == second
