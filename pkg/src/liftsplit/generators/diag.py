# -*- coding: utf-8 -*-
"""Diagonal joint measures.

:class:`Diag` puts mass ``1/n`` on every point of the diagonal of an
``n × n`` product. Both marginals are uniform, every ``S_y`` is the point
mass at ``y``, and the product of the marginals charges the off-diagonal
points ``R`` does not, so ``P ⊗ Q`` is not absolutely continuous with respect
to ``R``.
"""

from fractions import Fraction

from liftsplit.budget import DEFAULT_BUDGET, Budget
from liftsplit.errors import PreconditionFailed
from liftsplit.generator import Generator
from liftsplit.lifting import AnchorLifting
from liftsplit.measure import FiniteSpace, Measure
from liftsplit.product import JointMeasure, NullYPolicy, ProductSpace, rcp_from_joint
from liftsplit.scenario import Scenario


__author__ = "Chariton Karamitas <huku@census-labs.com>"

__all__ = ["Diag"]


class Diag(Generator):
    """Diagonal scenario generator.

    Args:
        n: Number of points of each factor, at least 2.
        budget: Exhaustive caps.
    """

    def __init__(self, n: int, budget: Budget = DEFAULT_BUDGET) -> None:
        if n < 2:
            raise PreconditionFailed(f"Diagonal needs at least 2 points, got {n}", {"n": n})
        super(Diag, self).__init__(n, n, budget)
        self._n = n

    def generate(self) -> Scenario:
        n = self._n
        space = FiniteSpace.of_size(n)
        product = ProductSpace(space, space)
        joint = JointMeasure.from_matrix(
            product,
            [[Fraction(int(x == y), n) for y in range(n)] for x in range(n)],
        )
        rcp = rcp_from_joint(joint, NullYPolicy.COPY_LOWEST)
        for y, s in enumerate(rcp):
            assert s == Measure.point_mass(space, y), f"S_{y} is not the point mass at {y}"

        self._logger.debug("Generated %dx%d diagonal", n, n)
        return Scenario(
            joint, rcp, AnchorLifting.smallest_anchor(joint.q), name=f"diag-{n}"
        )
