# -*- coding: utf-8 -*-
"""Scenario files.

A scenario bundles everything a suite needs: the two factor spaces, the joint
measure ``R``, optionally an r.c.p., a lifting ``ρ`` of ``Q`` and an algebra
chain. Scenarios are stored as JSON, with every rational written as a
``"p/q"`` string::

    {
        "name": "no-rf",
        "x": {"labels": ["0", "1"]},
        "y": {"labels": ["0", "1"]},
        "R": [["1/1", "0/1"], ["0/1", "0/1"]],
        "rcp": [["1/1", "0/1"], ["0/1", "1/1"]],
        "rho": [0, 0],
        "chain": null
    }

``R`` is an ``|X| × |Y|`` matrix, ``rcp`` a ``|Y| × |X|`` matrix whose row
``y`` holds ``S_y``, and ``rho`` the anchor map of ``ρ``. A missing r.c.p.
is disintegrated from ``R`` and a missing ``ρ`` is the smallest-anchor
lifting of ``Q``. Every object is validated on load.
"""

from __future__ import annotations

from pathlib import Path
from typing import Any

import dataclasses
import json
import logging

from liftsplit.errors import ParseError, PreconditionFailed, ValidationError
from liftsplit.lifting import AnchorLifting
from liftsplit.measure import FiniteSpace, format_rational, parse_rational
from liftsplit.product import (
    JointMeasure,
    NullYPolicy,
    ProductSpace,
    Rcp,
    rcp_from_joint,
    validate_rcp,
)
from liftsplit.splitting_chain import AlgebraChain


__author__ = "Chariton Karamitas <huku@census-labs.com>"

__all__ = ["Scenario", "load_scenario"]


_logger = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class Scenario:
    """A validated suite input.

    Args:
        joint: The joint measure ``R``.
        rcp: A product r.c.p. of ``R``.
        rho: A lifting of ``Q``.
        chain: Optional algebra chain of ``X``.
        name: Free-form scenario name.
        seed: Seed the scenario was generated from, if any.
    """

    joint: JointMeasure
    rcp: Rcp
    rho: AnchorLifting
    chain: AlgebraChain | None = None
    name: str = ""
    seed: int | None = None

    def __post_init__(self) -> None:
        report = validate_rcp(self.rcp, self.joint)
        if not report.passed:
            law = report.law("disintegration")
            raise ValidationError("product", "r.c.p. does not disintegrate R", law.witness)
        if self.rho.measure != self.joint.q:
            raise ValidationError("lifting", "rho is not a lifting of the Y-marginal")

    @property
    def product(self) -> ProductSpace:
        return self.joint.product

    def to_dict(self) -> dict[str, Any]:
        product = self.product
        return {
            "name": self.name,
            "seed": self.seed,
            "x": {"labels": list(product.x_space.labels)},
            "y": {"labels": list(product.y_space.labels)},
            "R": [[format_rational(v) for v in row] for row in self.joint.matrix()],
            "rcp": [[format_rational(v) for v in row] for row in self.rcp.to_matrix()],
            "rho": self.rho.to_list(),
            "chain": None if self.chain is None else self.chain.to_list(),
        }

    def save_json(self, path: str | Path) -> None:
        """Save the scenario in a file in JSON format.

        Args:
            path: Path of file to save the scenario to.
        """
        with open(path, "w", encoding="utf-8") as fp:
            json.dump(self.to_dict(), fp=fp, indent=4)

    @classmethod
    def from_dict(cls, js: dict[str, Any]) -> Scenario:
        """Build a scenario from its JSON form.

        Raises:
            ParseError: If a field is missing or malformed.
            ValidationError: If an object fails its validator.
        """
        if not isinstance(js, dict):
            raise ParseError("Scenario must be a JSON object")

        product = ProductSpace(_space(js, "x"), _space(js, "y"))
        joint = JointMeasure.from_matrix(product, _matrix(js, "R"))

        if js.get("rcp") is None:
            rcp = rcp_from_joint(joint, NullYPolicy.COPY_LOWEST)
        else:
            rows = _matrix(js, "rcp")
            if len(rows) != product.ny or any(len(row) != product.nx for row in rows):
                raise ValidationError(
                    "product", f"Expected a {product.ny}x{product.nx} r.c.p. matrix"
                )
            rcp = Rcp.from_matrix(product, rows)

        if js.get("rho") is None:
            rho = AnchorLifting.smallest_anchor(joint.q)
        else:
            rho = AnchorLifting(joint.q, tuple(_int_list(js, "rho")))

        chain = None
        if js.get("chain") is not None:
            generators = []
            for points in _field(js, "chain"):
                if not isinstance(points, list):
                    raise ParseError("Chain generators must be lists", {"field": "chain"})
                generators.append(product.x_space.event(_indices(points, product.nx, "chain")))
            try:
                chain = AlgebraChain.from_generators(product.x_space, generators)
            except PreconditionFailed as exception:
                raise ValidationError("chain", str(exception), exception.witness) from exception

        seed = js.get("seed")
        if seed is not None and (isinstance(seed, bool) or not isinstance(seed, int)):
            raise ParseError(f"Invalid seed {seed!r}", {"field": "seed"})
        return cls(joint, rcp, rho, chain, str(js.get("name", "")), seed)

    @classmethod
    def load(cls, path: str | Path) -> Scenario:
        """Load a scenario from a JSON file.

        Raises:
            ParseError: If the file is not valid JSON or misses fields.
            ValidationError: If an object fails its validator.
        """
        if not isinstance(path, Path):
            path = Path(path)

        with open(path, "r", encoding="utf-8") as fp:
            try:
                js = json.load(fp)
            except json.JSONDecodeError as exception:
                raise ParseError(
                    f"{path}: {exception.msg}",
                    {"line": exception.lineno, "column": exception.colno},
                ) from exception

        scenario = cls.from_dict(js)
        _logger.debug("Loaded scenario %r from %s", scenario.name, path)
        return scenario


def load_scenario(path: str | Path) -> Scenario:
    return Scenario.load(path)


def _field(js: dict[str, Any], name: str) -> Any:
    try:
        return js[name]
    except KeyError as exception:
        raise ParseError(f"Missing field {name!r}", {"field": name}) from exception


def _space(js: dict[str, Any], name: str) -> FiniteSpace:
    field = _field(js, name)
    if not isinstance(field, dict) or not isinstance(field.get("labels"), list):
        raise ParseError(f"Field {name!r} needs a list of labels", {"field": name})
    return FiniteSpace(tuple(str(label) for label in field["labels"]))


def _matrix(js: dict[str, Any], name: str) -> list[list]:
    rows = _field(js, name)
    if not isinstance(rows, list) or not all(isinstance(row, list) for row in rows):
        raise ParseError(f"Field {name!r} must be a matrix", {"field": name})
    try:
        return [[parse_rational(v) for v in row] for row in rows]
    except ParseError as exception:
        raise ParseError(f"{name}: {exception}", {"field": name}) from exception


def _indices(values: Any, size: int, name: str) -> list[int]:
    if not isinstance(values, list) or not all(
        isinstance(v, int) and not isinstance(v, bool) for v in values
    ):
        raise ParseError(f"Field {name!r} must hold integers", {"field": name})
    for v in values:
        if not 0 <= v < size:
            raise ValidationError(name, f"Index {v} out of range", {"index": v})
    return values


def _int_list(js: dict[str, Any], name: str) -> list[int]:
    values = _field(js, name)
    if not isinstance(values, list) or not all(
        isinstance(v, int) and not isinstance(v, bool) for v in values
    ):
        raise ParseError(f"Field {name!r} must hold integers", {"field": name})
    return values
