"""Polynomial regression of squared residuals in rescaled time.

A smooth variance profile g**2(t/n) is approximated over an analysis
window by a polynomial centered at the window midpoint r0:

    u_t**2 = sum_{i=0}^{p} a_i * (t/n - r0)**i + error,   t in window,

fitted by least squares through an orthogonal decomposition (the
centered power columns are strongly collinear for larger p, so normal
equations are avoided).  The fitted profile feeds the corrected
statistic in :mod:`varbreak.cusum`; order selection uses the Gaussian
AIC ``q * log(RSS/q) + 2(p+1)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from varbreak.errors import SingularDesignError
from varbreak.series import ResidualSeries, SubsampleWindow

#: Relative floor applied to RSS before the AIC logarithm, in units of
#: the window mean of u**4.  Keeps perfectly fitted models finite and
#: makes order selection prefer the smallest exact order.
AIC_RSS_FLOOR_FRAC = 1e-12

DEFAULT_P_MAX = 5


@dataclass(frozen=True, eq=False)
class VariancePolyFit:
    """A fitted polynomial variance profile.

    Attributes
    ----------
    order : int
        Polynomial order p >= 1.
    center : float
        Centering point r0 in rescaled time (the window midpoint).
    coefficients : tuple of float
        a_0, ..., a_p of the centered powers.
    rss : float
        Residual sum of squares of the fit.
    window : SubsampleWindow
        Window the profile was fitted on.
    mean_sq : float
        Window mean of the squared residuals; scale for positivity floors.
    """

    order: int
    center: float
    coefficients: tuple[float, ...]
    rss: float
    window: SubsampleWindow
    mean_sq: float

    def profile(self, window: SubsampleWindow | None = None) -> np.ndarray:
        """Fitted values g_hat**2(t/n) at every t of ``window`` (default: own window)."""
        if window is None:
            window = self.window
        x = window.times() / window.n - self.center
        return _horner(self.coefficients, x)

    def evaluate(self, t: int, n: int) -> float:
        """Fitted value at a single observation index."""
        return float(_horner(self.coefficients, np.float64(t / n - self.center)))


@dataclass(frozen=True)
class OrderSelection:
    """Outcome of AIC order selection."""

    chosen_p: int
    scores: tuple[tuple[int, float], ...]
    p_max: int

    def score(self, p: int) -> float:
        return dict(self.scores)[p]


@dataclass(frozen=True)
class PositivityReport:
    """Minimum of a fitted profile over its window versus the positivity floor."""

    min_value: float
    floor: float
    passed: bool
    t_min: int


def _horner(coefficients: tuple[float, ...], x):
    result = np.zeros_like(x, dtype=np.float64) if isinstance(x, np.ndarray) else 0.0
    for c in reversed(coefficients):
        result = result * x + c
    return result


def _design_matrix(window: SubsampleWindow, p: int) -> np.ndarray:
    x = window.times() / window.n - window.center
    return np.vander(x, p + 1, increasing=True)


def fit_variance_poly(series: ResidualSeries, window: SubsampleWindow, p: int) -> VariancePolyFit:
    """Least-squares fit of order ``p`` to the windowed squared residuals.

    Parameters
    ----------
    series, window
        Residuals and the analysis window; the regressors are the
        centered powers ``(t/n - r0)**i`` for t in the window.
    p : int
        Polynomial order, at least 1; the window must satisfy
        ``length >= p + 2``.

    Raises
    ------
    ValueError
        If ``p < 1`` or the window is too short for the order.
    SingularDesignError
        If the design matrix is numerically rank deficient.
    """
    if p < 1:
        raise ValueError(f"polynomial order must be at least 1, got {p}")
    if window.length < p + 2:
        raise ValueError(
            f"window length {window.length} cannot support order {p}; need at least {p + 2}"
        )
    u = window.slice_values(series)
    squares = u * u
    design = _design_matrix(window, p)
    coef, _, rank, _ = np.linalg.lstsq(design, squares, rcond=None)
    if rank < p + 1:
        raise SingularDesignError(
            f"design matrix has rank {rank} < {p + 1}; the window time grid is degenerate"
        )
    rss = float(np.sum((squares - design @ coef) ** 2))
    return VariancePolyFit(
        order=p,
        center=window.center,
        coefficients=tuple(float(c) for c in coef),
        rss=rss,
        window=window,
        mean_sq=float(np.mean(squares)),
    )


def select_poly_order_aic(
    series: ResidualSeries, window: SubsampleWindow, p_max: int = DEFAULT_P_MAX
) -> OrderSelection:
    """Pick the order in 1..p_max minimizing ``q*log(RSS/q) + 2(p+1)``.

    Ties break toward the smaller order.  RSS is floored at
    ``AIC_RSS_FLOOR_FRAC * mean(u**4)`` before the logarithm so exact
    fits stay comparable.  Order 0 is never considered; a constant
    profile is the uncorrected test's job.

    Raises
    ------
    ValueError
        If ``p_max < 1`` or the window cannot support ``p_max``.
    SingularDesignError
        From the failing order, if any fit is rank deficient.
    """
    if p_max < 1:
        raise ValueError(f"p_max must be at least 1, got {p_max}")
    if window.length < p_max + 2:
        raise ValueError(
            f"window length {window.length} cannot support p_max={p_max}; need {p_max + 2}"
        )
    u = window.slice_values(series)
    squares = u * u
    floor = AIC_RSS_FLOOR_FRAC * float(np.mean(squares * squares))
    q = window.length
    scores: list[tuple[int, float]] = []
    chosen_p = 0
    best = np.inf
    for p in range(1, p_max + 1):
        try:
            fit = fit_variance_poly(series, window, p)
        except SingularDesignError as exc:
            raise SingularDesignError(f"order {p}: {exc}") from exc
        aic = q * np.log(max(fit.rss, floor) / q) + 2.0 * (p + 1)
        scores.append((p, float(aic)))
        if aic < best:
            best = aic
            chosen_p = p
    return OrderSelection(chosen_p=chosen_p, scores=tuple(scores), p_max=p_max)


def eval_variance(fit: VariancePolyFit, t: int, n: int) -> float:
    """Evaluate the fitted profile at observation ``t`` of a series of length ``n``.

    Total on all inputs; positivity is the caller's concern, see
    :func:`check_positivity`.
    """
    return fit.evaluate(t, n)


def check_positivity(fit: VariancePolyFit, pos_floor_frac: float = 0.01) -> PositivityReport:
    """Check the fitted profile against its positivity floor.

    Evaluates g_hat**2 at every in-window t and compares the minimum to
    ``floor = pos_floor_frac * mean_sq``.  The report is advisory: the
    corrected statistic raises on violation unless clamping is
    explicitly enabled.
    """
    values = fit.profile()
    idx = int(np.argmin(values))
    min_value = float(values[idx])
    floor = pos_floor_frac * fit.mean_sq
    return PositivityReport(
        min_value=min_value,
        floor=floor,
        passed=min_value > floor,
        t_min=fit.window.offset + 1 + idx,
    )
