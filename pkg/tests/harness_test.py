# -*- coding: utf-8 -*-

from fractions import Fraction

import pytest

from liftsplit.budget import Budget
from liftsplit.errors import BudgetExceeded, PreconditionFailed
from liftsplit.generators import Diag, NoRF
from liftsplit.harness import (
    SUITES,
    SuiteOptions,
    random_processes,
    random_scenarios,
    run_suite,
    sweep,
)
from liftsplit.splitting_chain import general_split

import liftsplit.oracle


_SMALL = SuiteOptions(budget=Budget(max_points=6))


@pytest.mark.parametrize("suite", sorted(SUITES))
def test_diag_suites(suite):
    report = run_suite(Diag(2).generate(), suite)
    assert report.passed, report.failed()
    assert report.laws
    assert report.timing >= 0


@pytest.mark.parametrize(
    "suite", ["validate", "split-general", "prop27", "modify-process", "oracle-sweep"]
)
def test_no_rf_suites(suite):
    report = run_suite(NoRF().generate(), suite)
    assert report.passed, report.failed()


def test_no_rf_check_it():
    report = run_suite(NoRF().generate(), "check-it")
    assert report.failed() == ["IT"]
    assert report.law("IT").witness["counterexample"] is not None


def test_no_rf_split_ac():
    report = run_suite(NoRF().generate(), "split-ac")
    assert report.failed() == ["IT"]
    assert "halted before construction" in report.notes


def test_no_rf_split_ac_repaired():
    options = SuiteOptions(repair=True)
    report = run_suite(NoRF().generate(), "split-ac", options)
    assert report.passed, report.failed()
    assert report.law("null_changes").passed
    assert "repaired rows [1]" in report.notes


def test_no_rf_oracle_sweep():
    report = run_suite(NoRF().generate(), "oracle-sweep")
    assert "(IT) fails, (RF) construction skipped" in report.notes
    assert not any(name.startswith("oracle.ac.") for name in (law.name for law in report.laws))

    report = run_suite(NoRF().generate(), "oracle-sweep", SuiteOptions(repair=True))
    assert report.passed, report.failed()
    assert report.law("oracle.ac.RF").passed


def test_null_value():
    options = SuiteOptions(null_value=Fraction(1, 3))
    assert run_suite(NoRF().generate(), "split-general", options).passed


def test_unknown_suite():
    with pytest.raises(PreconditionFailed):
        run_suite(NoRF().generate(), "split-everything")


def test_oracle_rectangle_formula():
    scenario = NoRF().generate()
    split = general_split(None, scenario.rcp, scenario.joint, scenario.rho)
    report = liftsplit.oracle.oracle_sweep(split, scenario.rcp, rectangle_formula=True)
    assert report.failed() == ["RF"]


def test_oracle_budget(monkeypatch):
    scenario = NoRF().generate()
    split = general_split(None, scenario.rcp, scenario.joint, scenario.rho)
    monkeypatch.setattr(liftsplit.oracle, "MAX_POINTS", 3)
    with pytest.raises(BudgetExceeded):
        liftsplit.oracle.oracle_sweep(split, scenario.rcp)


def test_random_processes():
    scenario = Diag(2).generate()
    processes = list(random_processes(scenario, 0))
    assert len(processes) == 9
    assert processes[0].to_matrix() == [["1/1", "1/1"], ["1/1", "1/1"]]
    assert processes[1:] == list(random_processes(scenario, 0))[1:]


def test_random_scenarios():
    scenarios = list(random_scenarios(6, seed=4, budget=Budget(max_points=6)))
    assert len(scenarios) == 6
    for i, scenario in enumerate(scenarios):
        assert scenario.seed == 4 + i
        assert scenario.product.space.size <= 6


@pytest.mark.parametrize("suite", ["split-general", "modify-process"])
def test_sweep(suite):
    report = sweep(suite, 4, seed=1, null_rcp="random", options=_SMALL)
    assert report.passed, report.failed()
    assert report.counts == {"scenarios": 4, "passed": 4, "skipped": 0}


def test_sweep_check_it():
    report = sweep("check-it", 6, seed=2, null_rcp="random", options=_SMALL)
    assert report.counts["passed"] + len(report.failed()) == 6
    for law in report.laws:
        assert "IT" in law.witness["failed"]

    report = sweep("split-ac", 6, seed=2, null_rcp="random", options=_SMALL, only_it=True)
    assert report.passed
    assert report.counts["passed"] + report.counts["skipped"] == 6
