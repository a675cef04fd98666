# -*- coding: utf-8 -*-
"""The smallest scenario admitting no rectangle formula.

``X = Y = {0, 1}``, ``R`` is the point mass at ``(0, 0)``, ``S_0`` the point
mass at 0 and ``S_1`` the point mass at 1. The second conditional measure
lives on a ``P``-null point, so it is not absolutely continuous with respect
to ``P``; consequently no family of liftings satisfies the rectangle formula,
while the section property is still achievable.
"""

from liftsplit.generator import Generator
from liftsplit.lifting import AnchorLifting
from liftsplit.measure import FiniteSpace, Measure
from liftsplit.product import JointMeasure, ProductSpace, Rcp
from liftsplit.scenario import Scenario


__author__ = "Chariton Karamitas <huku@census-labs.com>"

__all__ = ["NoRF"]


class NoRF(Generator):
    """Generator of the two-by-two scenario without (RF)."""

    def __init__(self) -> None:
        super(NoRF, self).__init__(2, 2)

    def generate(self) -> Scenario:
        space = FiniteSpace.of_size(2)
        product = ProductSpace(space, space)
        joint = JointMeasure.from_matrix(product, [[1, 0], [0, 0]])
        rcp = Rcp(product, (Measure.point_mass(space, 0), Measure.point_mass(space, 1)))
        return Scenario(joint, rcp, AnchorLifting(joint.q, (0, 0)), name="no-rf")
