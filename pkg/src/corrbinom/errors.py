"""Semantic exception hierarchy.

Every error raised by this package derives from :class:`CorrBinomError`, so
callers can catch one base class. Domain violations additionally derive from
``ValueError`` to stay friendly to generic validation code.
"""

from __future__ import annotations


class CorrBinomError(Exception):
    """Base class for all errors raised by corrbinom."""


class ParameterError(CorrBinomError, ValueError):
    """An input is outside its contract (domain, type, or range)."""


class NegativeCorrelationError(ParameterError):
    """A negative target correlation was requested.

    The latent-cell construction implemented here covers nonnegative
    correlations only.
    """


class InfeasibleCorrelationError(ParameterError):
    """The target correlation exceeds the bound set by the marginals."""

    def __init__(self, requested: float, bound: float, pi1: float, pi2: float):
        self.requested = requested
        self.bound = bound
        self.pi1 = pi1
        self.pi2 = pi2
        super().__init__(
            f"target correlation r={requested!r} exceeds the feasible upper "
            f"bound {bound!r} for marginals pi1={pi1!r}, pi2={pi2!r}"
        )


class DegenerateConditionalError(CorrBinomError):
    """A conditional law is undefined because the conditioning side is constant."""


class EnumerationCapError(CorrBinomError):
    """Exact enumeration was requested beyond the configured trial-count cap."""


class UnsupportedConditionError(CorrBinomError):
    """The conditioning event has probability zero."""


class InsufficientDataError(CorrBinomError):
    """Too few samples (or too few usable cells) for the requested statistic."""


class DegenerateSampleError(InsufficientDataError):
    """All samples are identical: sample correlation is undefined."""
