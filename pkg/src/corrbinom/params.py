"""Latent-cell parameters for correlated binomial pairs.

A pair of counts (Y1, Y2) with binomial marginals B(n, pi1), B(n, pi2) and
correlation r >= 0 is built from a four-cell multinomial (X1, X2, X3, X4)
with cell probabilities (p1, p2, p3, p4) via

    Y1 = X1 + X3,    Y2 = X2 + X3.

Matching the marginals and the correlation fixes the cells:

    p3 = pi1*pi2 + r*sqrt(pi1*(1-pi1)*pi2*(1-pi2))
    p1 = pi1 - p3
    p2 = pi2 - p3
    p4 = 1 - p1 - p2 - p3

p1 and p2 stay nonnegative only when r does not exceed

    r_max = min(pi1*(1-pi2), pi2*(1-pi1)) / sqrt(pi1*(1-pi1)*pi2*(1-pi2)),

which this module computes, tabulates, and enforces. It also provides the
two affine conditional descriptors of the construction:

    E(Y1 | Y2 = y)   = alpha*n + (beta - alpha)*y
    Var(Y1 | Y2 = y) = gamma + delta*y

with alpha = p1/(p1+p4), beta = p3/(p2+p3), gamma = n*p1*p4/(p1+p4)^2 and
delta = p2*p3/(p2+p3)^2 - p1*p4/(p1+p4)^2.

All functions are pure; everything here is safe to call concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from typing import Sequence

import numpy as np

from .errors import (
    DegenerateConditionalError,
    InfeasibleCorrelationError,
    NegativeCorrelationError,
    ParameterError,
)

#: Absolute tolerance for probability bookkeeping (cell sums, clamping).
PROB_TOL = 1e-12


def _require_open_prob(value: float, name: str) -> float:
    """Require a finite probability strictly inside (0, 1)."""
    try:
        x = float(value)
    except (TypeError, ValueError) as exc:
        raise ParameterError(f"{name} must be a real number, got {value!r}") from exc
    if not math.isfinite(x) or not 0.0 < x < 1.0:
        raise ParameterError(f"{name} must lie strictly between 0 and 1, got {value!r}")
    return x


def _require_trial_count(n: int, name: str = "n", minimum: int = 1) -> int:
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
        raise ParameterError(f"{name} must be an integer, got {type(n).__name__}")
    n = int(n)
    if n < minimum:
        raise ParameterError(f"{name} must be >= {minimum}, got {n}")
    return n


def max_correlation(pi1: float, pi2: float) -> float:
    """Largest feasible correlation for binomial marginals B(n, pi1), B(n, pi2).

    Parameters
    ----------
    pi1, pi2:
        Marginal success probabilities, each strictly inside (0, 1).

    Returns
    -------
    float
        min(pi1*(1-pi2), pi2*(1-pi1)) / sqrt(pi1*(1-pi1)*pi2*(1-pi2)),
        which lies in (0, 1]. Equal marginals give exactly 1.

    Raises
    ------
    ParameterError
        If a marginal is outside the open interval (0, 1).
    """
    a = _require_open_prob(pi1, "pi1")
    b = _require_open_prob(pi2, "pi2")
    u = a * (1.0 - b)
    v = b * (1.0 - a)
    # min(u, v)/sqrt(u*v) regrouped as sqrt(min/max): same value, but exact
    # (1.0) at equal marginals and never above 1 by construction.
    return math.sqrt(min(u, v) / max(u, v))


@dataclass(frozen=True)
class TargetSpec:
    """A sampling request: trial count, two marginals, target correlation.

    Feasibility (0 <= r <= max_correlation(pi1, pi2)) is enforced at
    construction. The upper end is accepted: at r == r_max one of the latent
    cells is exactly zero, which is still a valid multinomial.
    """

    n: int
    pi1: float
    pi2: float
    r: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "n", _require_trial_count(self.n))
        object.__setattr__(self, "pi1", _require_open_prob(self.pi1, "pi1"))
        object.__setattr__(self, "pi2", _require_open_prob(self.pi2, "pi2"))
        r = float(self.r)
        if not math.isfinite(r):
            raise ParameterError(f"r must be finite, got {self.r!r}")
        if r < 0.0:
            raise NegativeCorrelationError(
                f"negative target correlation r={r!r} is not supported by the "
                "shared-cell construction; only r >= 0 is accepted"
            )
        bound = max_correlation(self.pi1, self.pi2)
        # Overshoot is measured on the cell scale: the smallest implied cell
        # equals (bound - r) * sd, and only violations beyond PROB_TOL count.
        sd = math.sqrt(self.pi1 * (1.0 - self.pi1) * self.pi2 * (1.0 - self.pi2))
        if r > bound and (r - bound) * sd > PROB_TOL:
            raise InfeasibleCorrelationError(r, bound, self.pi1, self.pi2)
        object.__setattr__(self, "r", r)

    @property
    def r_max(self) -> float:
        return max_correlation(self.pi1, self.pi2)


@dataclass(frozen=True)
class CellProbs:
    """Latent multinomial cell probabilities (p1, p2, p3, p4).

    The container requires nonnegative cells summing to 1 (within PROB_TOL).
    Degenerate corners such as (1, 0, 0, 0) are representable so that the
    sampler can exercise point masses; cells produced by
    :func:`solve_cell_probs` additionally satisfy p1+p3 in (0, 1) and
    p2+p3 in (0, 1) because the marginals are strictly interior.
    """

    p1: float
    p2: float
    p3: float
    p4: float

    def __post_init__(self) -> None:
        for name in ("p1", "p2", "p3", "p4"):
            v = float(getattr(self, name))
            if not math.isfinite(v) or v < 0.0 or v > 1.0:
                raise ParameterError(f"{name} must be a probability in [0, 1], got {v!r}")
            object.__setattr__(self, name, v)
        total = math.fsum((self.p1, self.p2, self.p3, self.p4))
        if abs(total - 1.0) > PROB_TOL:
            raise ParameterError(
                f"cell probabilities must sum to 1 within {PROB_TOL}, got {total!r}"
            )

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.p1, self.p2, self.p3, self.p4)

    @property
    def marginal1(self) -> float:
        """Success probability of Y1: p1 + p3."""
        return self.p1 + self.p3

    @property
    def marginal2(self) -> float:
        """Success probability of Y2: p2 + p3."""
        return self.p2 + self.p3


@dataclass(frozen=True)
class MomentSummary:
    """First and second moments of a pair (means, variances, covariance, rho)."""

    mean1: float
    mean2: float
    var1: float
    var2: float
    cov: float
    rho: float

    def __post_init__(self) -> None:
        if not (self.var1 > 0.0 and self.var2 > 0.0):
            raise ParameterError(
                f"variances must be positive, got var1={self.var1!r}, var2={self.var2!r}"
            )
        if abs(self.rho) > 1.0 + PROB_TOL:
            raise ParameterError(f"correlation out of range: {self.rho!r}")
        implied = self.cov / math.sqrt(self.var1 * self.var2)
        if abs(implied - self.rho) > PROB_TOL:
            raise ParameterError(
                f"inconsistent summary: rho={self.rho!r} but cov/sd1*sd2={implied!r}"
            )


@dataclass(frozen=True)
class RegressionLine:
    """Affine conditional mean: E(Y1 | Y2 = y) = intercept + slope*y."""

    alpha: float
    beta: float
    intercept: float
    slope: float

    def __post_init__(self) -> None:
        if not (-PROB_TOL <= self.alpha <= 1.0 + PROB_TOL):
            raise ParameterError(f"alpha must lie in [0, 1], got {self.alpha!r}")
        if not (-PROB_TOL <= self.beta <= 1.0 + PROB_TOL):
            raise ParameterError(f"beta must lie in [0, 1], got {self.beta!r}")

    def predict(self, y2: float) -> float:
        return self.intercept + self.slope * y2


@dataclass(frozen=True)
class CondVarLine:
    """Affine conditional variance: Var(Y1 | Y2 = y) = gamma + delta*y."""

    gamma: float
    delta: float

    def __post_init__(self) -> None:
        if self.gamma < -PROB_TOL:
            raise ParameterError(f"gamma must be nonnegative, got {self.gamma!r}")

    def predict(self, y2: float) -> float:
        return self.gamma + self.delta * y2


def solve_cell_probs(spec: TargetSpec) -> CellProbs:
    """Solve the latent cell probabilities for a target (n, pi1, pi2, r).

    Tiny negative round-off in a solved cell (within -PROB_TOL) is clamped to
    zero; anything below that is a real infeasibility and raises.

    Raises
    ------
    InfeasibleCorrelationError
        If r exceeds max_correlation(pi1, pi2) beyond round-off.
    NegativeCorrelationError
        If r < 0 (rejected at TargetSpec construction as well).
    """
    if not isinstance(spec, TargetSpec):
        spec = TargetSpec(*spec)
    sd = math.sqrt(spec.pi1 * (1.0 - spec.pi1) * spec.pi2 * (1.0 - spec.pi2))
    p3 = spec.pi1 * spec.pi2 + spec.r * sd
    p1 = spec.pi1 - p3
    p2 = spec.pi2 - p3
    p4 = 1.0 - p1 - p2 - p3

    cells = []
    for name, value in (("p1", p1), ("p2", p2), ("p3", p3), ("p4", p4)):
        if value < -PROB_TOL:
            raise InfeasibleCorrelationError(
                spec.r, max_correlation(spec.pi1, spec.pi2), spec.pi1, spec.pi2
            )
        cells.append(0.0 if value < 0.0 else value)
    return CellProbs(*cells)


def theoretical_moments(n: int, cells: CellProbs) -> MomentSummary:
    """Exact moments of the pair (Y1, Y2) built on the given cells.

    mean_i = n * marginal_i, var_i = n * marginal_i * (1 - marginal_i),
    cov = n * (p3*p4 - p1*p2), rho = cov / sqrt(var1 * var2).
    """
    n = _require_trial_count(n)
    if not isinstance(cells, CellProbs):
        cells = CellProbs(*cells)
    m1, m2 = cells.marginal1, cells.marginal2
    if not (0.0 < m1 < 1.0 and 0.0 < m2 < 1.0):
        raise ParameterError(
            "moments are undefined for degenerate marginals: "
            f"p1+p3={m1!r}, p2+p3={m2!r} must lie strictly inside (0, 1)"
        )
    var1 = n * m1 * (1.0 - m1)
    var2 = n * m2 * (1.0 - m2)
    cov = n * (cells.p3 * cells.p4 - cells.p1 * cells.p2)
    rho = cov / math.sqrt(var1 * var2)
    return MomentSummary(
        mean1=n * m1, mean2=n * m2, var1=var1, var2=var2, cov=cov, rho=rho
    )


def _conditional_weights(cells: CellProbs) -> tuple[float, float]:
    """(p1+p4, p2+p3), validated positive for conditional descriptors."""
    low = cells.p1 + cells.p4
    high = cells.p2 + cells.p3
    if high <= 0.0:
        raise DegenerateConditionalError(
            "p2 + p3 = 0: Y2 is identically zero, conditional laws are degenerate"
        )
    if low <= 0.0:
        raise DegenerateConditionalError(
            "p1 + p4 = 0: Y2 is identically n, conditional laws are degenerate"
        )
    return low, high


def regression_line(n: int, cells: CellProbs) -> RegressionLine:
    """Conditional-mean line of Y1 given Y2 for the given cells.

    alpha = p1/(p1+p4) and beta = p3/(p2+p3); the line is
    E(Y1 | Y2 = y) = alpha*n + (beta - alpha)*y.
    """
    n = _require_trial_count(n)
    if not isinstance(cells, CellProbs):
        cells = CellProbs(*cells)
    low, high = _conditional_weights(cells)
    alpha = cells.p1 / low
    beta = cells.p3 / high
    return RegressionLine(alpha=alpha, beta=beta, intercept=alpha * n, slope=beta - alpha)


def conditional_variance_line(n: int, cells: CellProbs) -> CondVarLine:
    """Conditional-variance line of Y1 given Y2 for the given cells.

    gamma = n*p1*p4/(p1+p4)^2 and delta = p2*p3/(p2+p3)^2 - p1*p4/(p1+p4)^2;
    the pair is homoscedastic exactly when delta == 0.
    """
    n = _require_trial_count(n)
    if not isinstance(cells, CellProbs):
        cells = CellProbs(*cells)
    low, high = _conditional_weights(cells)
    low_ratio = cells.p1 * cells.p4 / (low * low)
    high_ratio = cells.p2 * cells.p3 / (high * high)
    return CondVarLine(gamma=n * low_ratio, delta=high_ratio - low_ratio)


def round_half_up(value: float, decimals: int = 3) -> float:
    """Decimal round-half-up of the shortest decimal form of ``value``."""
    q = Decimal(1).scaleb(-decimals)
    return float(Decimal(repr(float(value))).quantize(q, rounding=ROUND_HALF_UP))


@dataclass(frozen=True)
class BoundTable:
    """Square table of feasible-correlation upper bounds over a marginal grid.

    ``raw`` holds full-precision values; ``rounded`` is the display form,
    rounded half-up to three decimals.
    """

    grid: tuple[float, ...]
    raw: np.ndarray
    rounded: np.ndarray

    def __str__(self) -> str:
        head = "      " + " ".join(f"{g:>6.3g}" for g in self.grid)
        rows = [head]
        for g, row in zip(self.grid, self.rounded):
            rows.append(f"{g:>6.3g} " + " ".join(f"{v:6.3f}" for v in row))
        return "\n".join(rows)


def bound_table(grid: Sequence[float]) -> BoundTable:
    """Tabulate max_correlation over a grid of marginal values.

    Entry [i][j] is max_correlation(grid[i], grid[j]); the table is symmetric
    and invariant under reflecting the whole grid through 1/2.
    """
    values = tuple(_require_open_prob(g, "grid value") for g in grid)
    if not values:
        raise ParameterError("grid must contain at least one value")
    size = len(values)
    raw = np.empty((size, size), dtype=float)
    for i, a in enumerate(values):
        raw[i, i] = max_correlation(a, a)
        for j in range(i + 1, size):
            raw[i, j] = raw[j, i] = max_correlation(a, values[j])
    rounded = np.array([[round_half_up(v, 3) for v in row] for row in raw])
    return BoundTable(grid=values, raw=raw, rounded=rounded)
