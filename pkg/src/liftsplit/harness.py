# -*- coding: utf-8 -*-
"""Suite driver.

Every suite takes a :class:`liftsplit.scenario.Scenario`, runs one pipeline
on it and sweeps the pipeline's output against all of its laws. Law failures
end up in the returned :class:`liftsplit.report.VerificationReport`; input
errors and exhausted budgets are raised as their typed exceptions.

Example:
    >>> from liftsplit.generators import no_rf
    >>> scenario = no_rf.NoRF().generate()
    >>> run_suite(scenario, "split-general").passed
    True
    >>> run_suite(scenario, "split-ac").failed()
    ['IT']
"""

from __future__ import annotations

from collections.abc import Callable, Iterator
from fractions import Fraction

import dataclasses
import logging
import time

import numpy

from liftsplit.budget import DEFAULT_BUDGET, Budget
from liftsplit.errors import BudgetExceeded, PreconditionFailed
from liftsplit.event import Event
from liftsplit.generators import RandomScenario
from liftsplit.lifting import enumerate_liftings, verify_lifting
from liftsplit.process import Process, modify_process, verify_modification
from liftsplit.product import (
    Rcp,
    check_IT,
    make_rcp_ac,
    validate_rcp,
    verify_disintegration,
)
from liftsplit.report import VerificationReport
from liftsplit.scenario import Scenario
from liftsplit.splitting_ac import (
    SplitLiftings,
    build_split_densities,
    prop27_report,
    promote_to_split_liftings,
    repair_rcp,
    verify_split_densities,
    verify_split_liftings,
)
from liftsplit.splitting_chain import (
    GeneralSplit,
    build_general_split,
    verify_general_split,
)

import liftsplit.oracle


__author__ = "Chariton Karamitas <huku@census-labs.com>"

__all__ = [
    "SUITES",
    "SuiteOptions",
    "run_suite",
    "random_processes",
    "random_scenarios",
    "sweep",
]


_logger = logging.getLogger(__name__)

_NUM_PROCESSES = 8

_MAX_PROCESS_VALUE = 9


@dataclasses.dataclass(frozen=True)
class SuiteOptions:
    """Options shared by all suites.

    Args:
        budget: Exhaustive caps.
        seed: Seed of randomized checks and searches.
        repair: Repair the r.c.p. before the (IT)-based construction.
        null_value: Value of conditional expectations on null atoms.
    """

    budget: Budget = DEFAULT_BUDGET
    seed: int = 0
    repair: bool = False
    null_value: Fraction = Fraction(0)


def _validate(scenario: Scenario, options: SuiteOptions) -> VerificationReport:
    report = VerificationReport("validate")
    report.merge(validate_rcp(scenario.rcp, scenario.joint))
    report.merge(verify_disintegration(scenario.rcp, scenario.joint, options.budget))
    report.merge(verify_lifting(scenario.rho, options.budget, options.seed), "rho.")
    report.counts["points"] = scenario.product.space.size
    return report


def _add_it_law(report: VerificationReport, scenario: Scenario, rcp, rho) -> bool:
    counterexample = check_IT(rcp, rho, scenario.joint)
    product = scenario.product
    report.add(
        "IT",
        counterexample is None,
        {"counterexample": None if counterexample is None else counterexample.to_dict()},
        (1 << product.nx) * (1 << product.ny),
    )
    return counterexample is None


def _check_it(scenario: Scenario, options: SuiteOptions) -> VerificationReport:
    report = VerificationReport("check-it")
    _add_it_law(report, scenario, scenario.rcp, scenario.rho)
    return report


def _split_ac_liftings(
    scenario: Scenario, options: SuiteOptions, report: VerificationReport
) -> tuple[SplitLiftings | None, Rcp]:
    """Run the (IT)-based construction, recording every law in ``report``.

    Returns the liftings, or ``None`` when (IT) fails and the pipeline halts,
    together with the (possibly repaired) r.c.p.
    """
    joint = scenario.joint
    rcp, rho = scenario.rcp, scenario.rho

    if options.repair:
        repaired = repair_rcp(make_rcp_ac(rcp, joint), rho, joint)
        changed = Event(
            sum(1 << y for y in range(len(rcp)) if repaired.rcp[y] != rcp[y]),
            len(rcp),
        )
        report.add(
            "null_changes",
            joint.q.measure_of(changed) == 0,
            {"rows": changed.to_list()},
            len(rcp),
        )
        report.notes.append(f"repaired rows {changed.to_list()}")
        rcp, rho = repaired.rcp, repaired.rho

    if not _add_it_law(report, scenario, rcp, rho):
        report.notes.append("halted before construction")
        return None, rcp

    sd = build_split_densities(rcp, rho, joint, budget=options.budget)
    report.merge(verify_split_densities(sd, options.budget, options.seed), "densities.")
    sl = promote_to_split_liftings(sd)
    report.merge(verify_split_liftings(sl, options.budget, options.seed, sd), "liftings.")
    return sl, rcp


def _split_ac(scenario: Scenario, options: SuiteOptions) -> VerificationReport:
    report = VerificationReport("split-ac")
    _split_ac_liftings(scenario, options, report)
    return report


def _general_split(scenario: Scenario, options: SuiteOptions) -> GeneralSplit:
    return build_general_split(
        scenario.chain,
        scenario.rcp,
        scenario.joint,
        scenario.rho,
        options.null_value,
        options.budget,
    )


def _split_general(scenario: Scenario, options: SuiteOptions) -> VerificationReport:
    result = _general_split(scenario, options)
    report = VerificationReport("split-general")
    report.merge(verify_general_split(result, options.budget, options.seed))
    return report


def _prop27(scenario: Scenario, options: SuiteOptions) -> VerificationReport:
    """Evaluate the (IT) equivalences for every lifting of ``Q``."""
    report = VerificationReport("prop27")
    for i, rho in enumerate(enumerate_liftings(scenario.joint.q)):
        evaluation = prop27_report(
            scenario.rcp, rho, scenario.joint, options.budget, options.seed
        )
        report.merge(evaluation.report, f"rho{i}.")
        report.notes.append(f"rho{i} = {rho.to_list()}")
    return report


def random_processes(scenario: Scenario, seed: int) -> Iterator[Process]:
    """Generate a constant process and seeded random integer processes."""
    product = scenario.product
    yield Process.from_matrix(product, [[1] * product.nx for _ in range(product.ny)])
    rng = numpy.random.default_rng(seed)
    for _ in range(_NUM_PROCESSES):
        values = rng.integers(0, _MAX_PROCESS_VALUE + 1, size=(product.ny, product.nx))
        yield Process.from_matrix(product, values.tolist())


def _modify_process(scenario: Scenario, options: SuiteOptions) -> VerificationReport:
    split = _general_split(scenario, options).split
    report = VerificationReport("modify-process")
    for i, xi in enumerate(random_processes(scenario, options.seed)):
        zeta = modify_process(xi, split)
        report.merge(verify_modification(xi, zeta, split, scenario.rcp), f"process{i}.")
    return report


def _oracle_sweep(scenario: Scenario, options: SuiteOptions) -> VerificationReport:
    """Re-check pipeline outputs with the independent oracle.

    The general construction is always checked; the (IT)-based one only when
    (IT) holds (or after repair), together with its rectangle formula.
    """
    report = VerificationReport("oracle-sweep")

    result = _general_split(scenario, options)
    report.merge(verify_general_split(result, options.budget, options.seed), "general.")
    report.merge(
        liftsplit.oracle.oracle_sweep(result.split, scenario.rcp), "oracle.general."
    )

    ac = VerificationReport("split-ac")
    sl, rcp = _split_ac_liftings(scenario, options, ac)
    if sl is None:
        report.notes.append("(IT) fails, (RF) construction skipped")
    else:
        report.merge(ac, "ac.")
        report.merge(
            liftsplit.oracle.oracle_sweep(sl, rcp, rectangle_formula=True), "oracle.ac."
        )
    return report


SUITES: dict[str, Callable[[Scenario, SuiteOptions], VerificationReport]] = {
    "validate": _validate,
    "check-it": _check_it,
    "split-ac": _split_ac,
    "split-general": _split_general,
    "prop27": _prop27,
    "modify-process": _modify_process,
    "oracle-sweep": _oracle_sweep,
}


def run_suite(
    scenario: Scenario, suite: str, options: SuiteOptions | None = None
) -> VerificationReport:
    """Run the named suite on ``scenario``.

    Raises:
        PreconditionFailed: If ``suite`` is unknown.
    """
    if suite not in SUITES:
        raise PreconditionFailed(f"Unknown suite {suite!r}", {"suite": suite})
    if options is None:
        options = SuiteOptions()

    start_time = time.perf_counter()
    report = SUITES[suite](scenario, options)
    report.timing = time.perf_counter() - start_time

    _logger.info(
        "Suite %s on %r: %s (%d laws)",
        suite,
        scenario.name,
        "pass" if report.passed else "fail",
        len(report.laws),
    )
    return report


def random_scenarios(
    count: int,
    seed: int = 0,
    null_rcp: str = "copy",
    budget: Budget = DEFAULT_BUDGET,
) -> Iterator[Scenario]:
    """Generate ``count`` random scenarios with at most three positive and one
    null point per factor, within ``budget.max_points`` product points."""
    rng = numpy.random.default_rng(seed)
    shapes = [
        (nx, ny)
        for nx in range(1, 5)
        for ny in range(1, 5)
        if nx * ny <= budget.max_points
    ]
    for i in range(count):
        nx, ny = shapes[int(rng.integers(len(shapes)))]
        null_x = int(rng.integers(0, min(1, nx - 1) + 1))
        null_y = int(rng.integers(0, min(1, ny - 1) + 1))
        yield RandomScenario(
            nx, ny, null_x, null_y, seed=seed + i, null_rcp=null_rcp, budget=budget
        ).generate()


def sweep(
    suite: str,
    count: int,
    seed: int = 0,
    null_rcp: str = "copy",
    options: SuiteOptions | None = None,
    only_it: bool = False,
) -> VerificationReport:
    """Run ``suite`` over ``count`` random scenarios and aggregate the results.

    Args:
        suite: Suite name.
        count: Number of scenarios.
        seed: Seed of the first scenario; scenario ``i`` uses ``seed + i``.
        null_rcp: r.c.p. mode at ``Q``-null points, see
            :class:`liftsplit.generators.RandomScenario`.
        options: Suite options.
        only_it: Skip scenarios failing (IT).
    """
    if options is None:
        options = SuiteOptions()
    report = VerificationReport(f"sweep-{suite}")
    passed = skipped = 0
    for scenario in random_scenarios(count, seed, null_rcp, options.budget):
        if only_it and check_IT(scenario.rcp, scenario.rho, scenario.joint) is not None:
            skipped += 1
            continue
        try:
            result = run_suite(scenario, suite, options)
        except BudgetExceeded as exception:
            _logger.info("Skipping %r: %s", scenario.name, exception)
            skipped += 1
            continue
        if result.passed:
            passed += 1
            continue
        failed = result.failed()
        report.add(
            scenario.name,
            False,
            {"seed": scenario.seed, "failed": failed, "scenario": scenario.to_dict()},
            len(result.laws),
        )
    report.counts["scenarios"] = count
    report.counts["passed"] = passed
    report.counts["skipped"] = skipped
    return report
