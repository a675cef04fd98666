# -*- coding: utf-8 -*-
"""Exception types raised by LiftSplit.

Errors caused by malformed or inconsistent input derive from
:class:`ValueError`; errors caused by exhausted resources or broken internal
guarantees derive from :class:`RuntimeError`. Every exception carries an
optional ``witness``, a small JSON-friendly mapping describing the offending
event, point or rectangle, so that callers (most notably the harness) can put
it in a report without parsing messages.
"""

from typing import Any


__author__ = "Chariton Karamitas <huku@census-labs.com>"

__all__ = [
    "LiftSplitError",
    "NotMeasurable",
    "NotCoarser",
    "AmbiguousCompletion",
    "NoPositivePoint",
    "NotADensity",
    "NotAbsolutelyContinuous",
    "ITViolated",
    "PreconditionFailed",
    "NotInsideAtom",
    "HypothesisViolated",
    "SpaceMismatch",
    "ParseError",
    "ValidationError",
    "BudgetExceeded",
    "InternalInvariantBroken",
]


class LiftSplitError(Exception):
    """Base class of all LiftSplit errors.

    Args:
        message: Human readable description.
        witness: Optional mapping describing the offending object.
    """

    def __init__(self, message: str, witness: dict[str, Any] | None = None) -> None:
        super(LiftSplitError, self).__init__(message)
        self.witness = witness


class NotMeasurable(LiftSplitError, ValueError):
    pass


class NotCoarser(LiftSplitError, ValueError):
    pass


class AmbiguousCompletion(LiftSplitError, ValueError):
    pass


class NoPositivePoint(LiftSplitError, ValueError):
    pass


class NotADensity(LiftSplitError, ValueError):
    pass


class NotAbsolutelyContinuous(LiftSplitError, ValueError):
    pass


class ITViolated(LiftSplitError, ValueError):
    pass


class PreconditionFailed(LiftSplitError, ValueError):
    pass


class NotInsideAtom(LiftSplitError, ValueError):
    pass


class HypothesisViolated(LiftSplitError, ValueError):
    pass


class SpaceMismatch(LiftSplitError, ValueError):
    pass


class ParseError(LiftSplitError, ValueError):
    pass


class ValidationError(LiftSplitError, ValueError):
    """Raised when a declared object fails its validator.

    Args:
        module: Name of the validating module (e.g. ``"measure"``).
        message: Human readable description.
        witness: Optional mapping describing the offending object.
    """

    def __init__(
        self, module: str, message: str, witness: dict[str, Any] | None = None
    ) -> None:
        super(ValidationError, self).__init__(f"{module}: {message}", witness)
        self.module = module


class BudgetExceeded(LiftSplitError, RuntimeError):
    pass


class InternalInvariantBroken(LiftSplitError, RuntimeError):
    pass
