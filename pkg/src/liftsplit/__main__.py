# -*- coding: utf-8 -*-
"""LiftSplit console entry point."""

import argparse
import dataclasses
import importlib.resources
import logging
import logging.config
import os
import pathlib
import sys

from liftsplit.budget import DEFAULT_BUDGET
from liftsplit.errors import BudgetExceeded, InternalInvariantBroken
from liftsplit.measure import parse_rational

import liftsplit


__author__ = "Chariton Karamitas <huku@census-labs.com>"


EX_FAIL = 1
EX_INPUT = 2
EX_BUDGET = 3
EX_INTERNAL = 4

_SUITES = (
    "validate",
    "check-it",
    "split-ac",
    "split-general",
    "prop27",
    "modify-process",
    "oracle-sweep",
)


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--seed", metavar="N", type=int, default=0, help="seed of randomized checks"
    )
    common.add_argument(
        "--budget",
        metavar="N",
        type=int,
        default=DEFAULT_BUDGET.max_candidates,
        help="largest number of lifting families searched exhaustively",
    )
    common.add_argument(
        "--out",
        "-o",
        dest="out_path",
        metavar="FILE",
        type=pathlib.Path,
        help="path to file to store the JSON report in",
    )
    common.add_argument(
        "--null-value",
        metavar="P/Q",
        type=parse_rational,
        default="0",
        help="value of conditional expectations on null atoms",
    )
    common.add_argument(
        "--debug", "-d", action="store_true", help="enable debugging output"
    )

    parser = argparse.ArgumentParser(
        prog="LiftSplit", formatter_class=argparse.ArgumentDefaultsHelpFormatter
    )
    verbs = parser.add_subparsers(dest="verb", required=True)

    for verb in _SUITES:
        sub = verbs.add_parser(
            verb,
            parents=[common],
            formatter_class=argparse.ArgumentDefaultsHelpFormatter,
            help=f"run the {verb} suite on a scenario",
        )
        sub.add_argument(
            "path", metavar="PATH", type=pathlib.Path, help="path to scenario file"
        )
        if verb in ("split-ac", "oracle-sweep"):
            sub.add_argument(
                "--repair",
                action="store_true",
                help="repair the r.c.p. on a null set before the construction",
            )

    gen = verbs.add_parser(
        "gen",
        parents=[common],
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
        help="generate a scenario file",
    )
    gen.add_argument("kind", choices=["diag", "no-rf", "random"], help="generator")
    gen.add_argument(
        "path", metavar="PATH", type=pathlib.Path, help="path to scenario file"
    )
    gen.add_argument("-n", type=int, default=2, help="size of diagonal scenarios")
    gen.add_argument("--nx", type=int, default=3, help="number of points of X")
    gen.add_argument("--ny", type=int, default=2, help="number of points of Y")
    gen.add_argument("--null-x", type=int, default=0, help="number of P-null points")
    gen.add_argument("--null-y", type=int, default=0, help="number of Q-null points")
    gen.add_argument(
        "--null-rcp",
        choices=["copy", "random"],
        default="copy",
        help="conditional measures at Q-null points",
    )

    sweep = verbs.add_parser(
        "sweep",
        parents=[common],
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
        help="run a suite over seeded random scenarios",
    )
    sweep.add_argument("suite", choices=_SUITES, help="suite")
    sweep.add_argument(
        "--count", "-c", type=int, default=20, help="number of random scenarios"
    )
    sweep.add_argument(
        "--null-rcp",
        choices=["copy", "random"],
        default="copy",
        help="conditional measures at Q-null points",
    )
    sweep.add_argument(
        "--only-it", action="store_true", help="skip scenarios failing (IT)"
    )
    sweep.add_argument(
        "--repair",
        action="store_true",
        help="repair the r.c.p. on a null set before the construction",
    )

    return parser


def main(argv: list[str] | None = None) -> int:

    argv = argv or sys.argv

    args = _build_parser().parse_args(argv[1:])

    if args.debug:
        path = importlib.resources.files("liftsplit.data") / "logging-debug.ini"
    else:
        path = importlib.resources.files("liftsplit.data") / "logging.ini"

    logging.config.fileConfig(str(path))

    budget = dataclasses.replace(DEFAULT_BUDGET, max_candidates=args.budget)

    try:
        if args.verb == "gen":
            liftsplit.generate(
                args.kind,
                args.path,
                n=args.n,
                nx=args.nx,
                ny=args.ny,
                null_x=args.null_x,
                null_y=args.null_y,
                null_rcp=args.null_rcp,
                seed=args.seed,
                budget=budget,
            )
            return os.EX_OK

        if args.verb == "sweep":
            report = liftsplit.sweep(
                args.suite,
                args.count,
                out_path=args.out_path,
                seed=args.seed,
                budget=budget,
                repair=args.repair,
                null_value=args.null_value,
                null_rcp=args.null_rcp,
                only_it=args.only_it,
            )
        else:
            report = liftsplit.run(
                args.path,
                args.verb,
                out_path=args.out_path,
                seed=args.seed,
                budget=budget,
                repair=getattr(args, "repair", False),
                null_value=args.null_value,
            )

    except BudgetExceeded as exception:
        logging.error("Budget exceeded: %s", exception)
        return EX_BUDGET
    except InternalInvariantBroken as exception:
        logging.error("Internal invariant broken: %s %r", exception, exception.witness)
        return EX_INTERNAL
    except (OSError, ValueError) as exception:
        logging.error("Invalid input: %s", exception)
        return EX_INPUT

    return os.EX_OK if report.passed else EX_FAIL


if __name__ == "__main__":
    sys.exit(main(sys.argv))
