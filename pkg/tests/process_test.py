# -*- coding: utf-8 -*-

from fractions import Fraction

import pytest

from liftsplit.errors import SpaceMismatch, ValidationError
from liftsplit.generators import NoRF, RandomScenario
from liftsplit.harness import random_processes
from liftsplit.lifting import AnchorLifting
from liftsplit.measure import FiniteSpace
from liftsplit.process import (
    Process,
    check_modification,
    modify_process,
    verify_modification,
)
from liftsplit.product import JointMeasure, ProductSpace, rcp_from_joint
from liftsplit.splitting_ac import build_split_densities, promote_to_split_liftings
from liftsplit.splitting_chain import general_split


_HALF = Fraction(1, 2)

_XI = [[5, 7, 9], [1, 2, 3]]

_ZETA = [["5/1", "5/1", "5/1"], ["2/1", "2/1", "2/1"]]


def _space_a():
    product = ProductSpace(FiniteSpace.of_size(3), FiniteSpace.of_size(2))
    joint = JointMeasure.from_matrix(product, [[_HALF, 0], [0, _HALF], [0, 0]])
    return joint, rcp_from_joint(joint), AnchorLifting.smallest_anchor(joint.q)


def test_modify_general_split():
    joint, rcp, rho = _space_a()
    split = general_split(None, rcp, joint, rho)
    xi = Process.from_matrix(joint.product, _XI)
    zeta = modify_process(xi, split)
    assert zeta.to_matrix() == _ZETA
    assert verify_modification(xi, zeta, split, rcp).passed


def test_modify_split_ac():
    joint, rcp, rho = _space_a()
    split = promote_to_split_liftings(build_split_densities(rcp, rho, joint))
    xi = Process.from_matrix(joint.product, _XI)
    zeta = modify_process(xi, split)
    assert zeta.to_matrix() == _ZETA
    assert verify_modification(xi, zeta, split, rcp).passed


def test_perturbed_modification():
    joint, rcp, _ = _space_a()
    xi = Process.from_matrix(joint.product, _XI)

    zeta = Process.from_matrix(joint.product, [[6, 5, 5], [2, 2, 2]])
    report = check_modification(xi, zeta, rcp)
    assert report.failed() == ["ae_equal_0"]
    assert report.law("ae_equal_0").witness == {"y": 0, "x": 0}

    zeta = Process.from_matrix(joint.product, [[5, 0, 0], [0, 2, 0]])
    assert check_modification(xi, zeta, rcp).passed


def test_modification_is_linear():
    scenario = NoRF().generate()
    split = general_split(None, scenario.rcp, scenario.joint, scenario.rho)
    xi = Process.from_matrix(scenario.product, [[1, 2], [3, 4]])
    eta = Process.from_matrix(scenario.product, [["1/2", "-1"], [0, 7]])
    assert modify_process(xi + eta, split) == modify_process(xi, split) + modify_process(
        eta, split
    )


def test_no_rf_modification():
    scenario = NoRF().generate()
    split = general_split(None, scenario.rcp, scenario.joint, scenario.rho)
    xi = Process.from_matrix(scenario.product, [[1, 2], [3, 4]])
    zeta = modify_process(xi, split)

    # S_1 lives on the P-null point 1 and is still honoured.
    assert zeta.to_matrix() == [["1/1", "1/1"], ["4/1", "4/1"]]
    assert verify_modification(xi, zeta, split, scenario.rcp).passed


@pytest.mark.parametrize("seed", range(5))
def test_random_modifications(seed):
    scenario = RandomScenario(3, 2, null_x=1, null_y=1, seed=seed, null_rcp="random").generate()
    split = general_split(None, scenario.rcp, scenario.joint, scenario.rho)
    for xi in random_processes(scenario, seed):
        zeta = modify_process(xi, split)
        report = verify_modification(xi, zeta, split, scenario.rcp)
        assert report.passed, report.failed()


def test_process_validation():
    joint, _, _ = _space_a()
    with pytest.raises(ValidationError):
        Process.from_matrix(joint.product, [[1, 2, 3]])
    with pytest.raises(ValidationError):
        Process.from_matrix(joint.product, [[1, 2], [3, 4]])


def test_space_mismatch():
    joint, rcp, rho = _space_a()
    split = general_split(None, rcp, joint, rho)
    scenario = NoRF().generate()
    xi = Process.from_matrix(scenario.product, [[1, 2], [3, 4]])
    with pytest.raises(SpaceMismatch):
        modify_process(xi, split)
    with pytest.raises(SpaceMismatch):
        xi + Process.from_matrix(joint.product, _XI)
