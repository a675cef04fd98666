# -*- coding: utf-8 -*-
"""Entry points to LiftSplit suites and generators.

LiftSplit builds liftings of finite joint measures that split along product
regular conditional probabilities, and verifies every law they are supposed
to satisfy. Researchers can import it in their own scripts to generate
scenarios and run suites on them.

Example:
    One could do the following from a Python shell:

    >>> import liftsplit
    >>> liftsplit.generate("no-rf", "/tmp/no-rf.json")
    >>> report = liftsplit.run("/tmp/no-rf.json", "split-general")
    >>> report.passed
    True
"""

from fractions import Fraction
from pathlib import Path

from liftsplit.budget import DEFAULT_BUDGET, Budget
from liftsplit.report import VerificationReport
from liftsplit.scenario import Scenario

import liftsplit.generators
import liftsplit.harness

import json
import logging


__author__ = "Chariton Karamitas <huku@census-labs.com>"

__all__ = ["generate", "run", "sweep"]


def _write_report(report: VerificationReport, out_path: str | Path | None) -> None:
    if out_path is None:
        return
    with open(out_path, "w", encoding="utf-8") as fp:
        json.dump(report.to_dict(), fp=fp, indent=4)
    logging.info("Report written to %s", out_path)


def generate(
    kind: str,
    path: str | Path,
    n: int = 2,
    nx: int = 3,
    ny: int = 2,
    null_x: int = 0,
    null_y: int = 0,
    null_rcp: str = "copy",
    seed: int = 0,
    budget: Budget = DEFAULT_BUDGET,
) -> Scenario:
    if kind == "diag":
        logging.info("Generating %dx%d diagonal scenario", n, n)
        scenario = liftsplit.generators.Diag(n, budget).generate()
    elif kind == "no-rf":
        logging.info("Generating scenario without rectangle formula")
        scenario = liftsplit.generators.NoRF().generate()
    elif kind == "random":
        logging.info("Generating random %dx%d scenario with seed %d", nx, ny, seed)
        scenario = liftsplit.generators.RandomScenario(
            nx, ny, null_x, null_y, seed, null_rcp, budget
        ).generate()
    else:
        raise ValueError(f"Invalid generator {kind}")

    scenario.save_json(path)
    logging.info("Scenario written to %s", path)
    return scenario


def run(
    path: str | Path,
    suite: str,
    out_path: str | Path | None = None,
    seed: int = 0,
    budget: Budget = DEFAULT_BUDGET,
    repair: bool = False,
    null_value: Fraction = Fraction(0),
) -> VerificationReport:
    logging.info("Loading scenario from %s", path)
    scenario = Scenario.load(path)

    options = liftsplit.harness.SuiteOptions(budget, seed, repair, null_value)
    report = liftsplit.harness.run_suite(scenario, suite, options)
    for name in report.failed():
        logging.info("Law %s failed: %r", name, report.law(name).witness)

    _write_report(report, out_path)
    print(f"{suite}: {'pass' if report.passed else 'fail'} ({len(report.laws)} laws)")
    return report


def sweep(
    suite: str,
    count: int,
    out_path: str | Path | None = None,
    seed: int = 0,
    budget: Budget = DEFAULT_BUDGET,
    repair: bool = False,
    null_value: Fraction = Fraction(0),
    null_rcp: str = "copy",
    only_it: bool = False,
) -> VerificationReport:
    logging.info("Sweeping %s over %d random scenarios", suite, count)
    options = liftsplit.harness.SuiteOptions(budget, seed, repair, null_value)
    report = liftsplit.harness.sweep(suite, count, seed, null_rcp, options, only_it)

    _write_report(report, out_path)
    print(
        f"{suite}: {report.counts['passed']}/{count} passed, "
        f"{report.counts['skipped']} skipped"
    )
    return report
