"""Limiting null distribution of the tests and decision rules.

Under their null hypotheses every statistic in :mod:`varbreak.cusum`
converges in distribution to ``sup_s |W(s)|`` where ``W`` is a Brownian
bridge.  The distribution of that supremum is the Kolmogorov
distribution, with CDF

    P(sup|W| <= x) = 1 - 2 * sum_{k>=1} (-1)**(k+1) * exp(-2 k**2 x**2).

This module evaluates the series (truncated once terms fall below
``1e-12``, hard cap 100 terms), inverts it by bisection, and packages
the two decision boundaries used by the tests: the exact asymptotic
quantile at a requested level, and the conventional tabulated boundary
1.33 of Sansó, Aragó and Carrion (2004).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

TERM_TOLERANCE = 1e-12
MAX_TERMS = 100

# Below x = 0.05 the true CDF is under exp(-pi**2 / (8 * 0.05**2)) ~ 1e-214,
# far beneath double precision; the alternating series is also past its
# 100-term budget there.
_UNDERFLOW_X = 0.05

#: Conventional finite-sample 5% boundary tabulated by Sansó et al. (2004).
FIXED_BOUNDARY = 1.33


def kolmogorov_cdf(x: float) -> float:
    """CDF of the Kolmogorov distribution, P(sup|W| <= x).

    Parameters
    ----------
    x : float
        Nonnegative evaluation point.

    Returns
    -------
    float
        Probability in [0, 1].

    Raises
    ------
    ValueError
        If ``x`` is negative.
    """
    if x < 0:
        raise ValueError(f"x must be nonnegative, got {x}")
    if x < _UNDERFLOW_X:
        return 0.0
    total = 0.0
    sign = 1.0
    for k in range(1, MAX_TERMS + 1):
        term = math.exp(-2.0 * k * k * x * x)
        total += sign * term
        sign = -sign
        if term < TERM_TOLERANCE:
            break
    result = 1.0 - 2.0 * total
    # below the truncation tolerance's resolution the series leaves only
    # wobble; snap it to the (true, underflowed) zero
    if result < 1e-10:
        return 0.0
    return min(result, 1.0)


def kolmogorov_quantile(p: float) -> float:
    """Inverse of :func:`kolmogorov_cdf`, by bisection on [0.2, 4].

    Parameters
    ----------
    p : float
        Probability strictly between 0 and 1.  Must lie in the range the
        bracket can reach, roughly [6e-8, 1 - 3e-14].

    Returns
    -------
    float
        The x with ``|kolmogorov_cdf(x) - p| < 1e-10``.

    Raises
    ------
    ValueError
        If ``p`` is outside (0, 1) or outside the bracket's range.
    """
    if not 0.0 < p < 1.0:
        raise ValueError(f"p must be in (0, 1), got {p}")
    lo, hi = 0.2, 4.0
    if not kolmogorov_cdf(lo) <= p <= kolmogorov_cdf(hi):
        raise ValueError(f"p={p} is outside the invertible range of the bracket [0.2, 4]")
    while hi - lo > 1e-12:
        mid = 0.5 * (lo + hi)
        if kolmogorov_cdf(mid) < p:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def pvalue(statistic: float) -> float:
    """Asymptotic p-value, 1 - kolmogorov_cdf(statistic).

    Raises
    ------
    ValueError
        If ``statistic`` is negative.
    """
    if statistic < 0:
        raise ValueError(f"statistic must be nonnegative, got {statistic}")
    return 1.0 - kolmogorov_cdf(statistic)


@dataclass(frozen=True)
class DecisionRule:
    """A rejection boundary together with how it was obtained.

    ``source`` is one of ``"asymptotic"`` (critical value computed from
    the level via :func:`kolmogorov_quantile`), ``"boundary"`` (the fixed
    tabulated value 1.33), or ``"user"``.  Reports always carry both the
    source and the numeric boundary so that every rejection names the
    critical value that produced it.
    """

    critical_value: float
    level: float | None
    source: str

    def __post_init__(self) -> None:
        if self.critical_value <= 0:
            raise ValueError(f"critical value must be positive, got {self.critical_value}")
        if self.level is not None and not 0.0 < self.level < 1.0:
            raise ValueError(f"level must be in (0, 1), got {self.level}")
        if self.source not in ("asymptotic", "boundary", "user"):
            raise ValueError(f"unknown decision rule source {self.source!r}")

    @classmethod
    def asymptotic(cls, level: float = 0.05) -> "DecisionRule":
        """Asymptotic rule at ``level``: reject beyond the 1 - level quantile."""
        return cls(kolmogorov_quantile(1.0 - level), level, "asymptotic")

    @classmethod
    def fixed_boundary(cls) -> "DecisionRule":
        """The conventional tabulated 5% boundary 1.33."""
        return cls(FIXED_BOUNDARY, 0.05, "boundary")

    @classmethod
    def user(cls, critical_value: float, level: float | None = None) -> "DecisionRule":
        """A caller-supplied boundary."""
        return cls(critical_value, level, "user")

    def rejects(self, statistic: float) -> bool:
        """True when ``statistic`` strictly exceeds the boundary."""
        return statistic > self.critical_value

    @property
    def label(self) -> str:
        return f"{self.source}(crit={self.critical_value:.6g})"
