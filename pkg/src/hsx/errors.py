"""Shared exceptions, verdict constants and the rewrite-step budget."""

from __future__ import annotations

import os
from dataclasses import dataclass, field

DEFAULT_REWRITE_BUDGET = 64
BUDGET_ENV_VAR = "HSX_REWRITE_BUDGET"

LESS = -1
EQUAL = 0
GREATER = 1
#: Undecided comparisons are reported as ``None``, never guessed.
UNDECIDED = None


class HsxError(Exception):
    """Base class for all errors raised by this package."""


class StuckError(HsxError):
    """An exact rewrite was requested where no exact rule applies."""


class UndecidedError(HsxError):
    """A computation needed a comparison the rule ladder cannot decide."""


class NormalizationUndecided(UndecidedError):
    """Sorting terms hit an undecidable monomial pair."""

    def __init__(self, left, right):
        self.left = left
        self.right = right
        super().__init__(f"cannot order monomials {left!r} and {right!r}")


class ParseError(HsxError):
    """Syntax error, carrying the byte span of the offending input."""

    def __init__(self, message: str, span=None):
        self.span = span
        if span is not None:
            message = f"{message} at {span.start}..{span.end}"
        super().__init__(message)


def default_budget_steps() -> int:
    raw = os.environ.get(BUDGET_ENV_VAR)
    if raw is None:
        return DEFAULT_REWRITE_BUDGET
    try:
        steps = int(raw)
    except ValueError:
        return DEFAULT_REWRITE_BUDGET
    return steps if steps > 0 else DEFAULT_REWRITE_BUDGET


@dataclass
class Budget:
    """Countdown of rewrite/comparison steps plus a nested-unfolding depth cap.

    Exhaustion never raises here: comparisons answer ``UNDECIDED`` and
    rewrites answer ``None`` once ``spend`` starts failing.
    """

    steps: int = field(default_factory=default_budget_steps)
    nested_depth: int = 3

    def spend(self, n: int = 1) -> bool:
        if self.steps < n:
            self.steps = 0
            return False
        self.steps -= n
        return True

    @classmethod
    def fresh(cls) -> "Budget":
        return cls()


def ensure_budget(budget: Budget | None) -> Budget:
    return budget if budget is not None else Budget.fresh()
