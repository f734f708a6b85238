"""AR(m) prewhitening by OLS and automatic order selection.

The variance tests act on approximately uncorrelated residuals, so
observed series are first regressed on their own lags.  Fitting is
plain least squares; order selection minimizes the Gaussian AIC on a
common effective sample so scores are comparable across orders.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from varbreak.errors import SingularDesignError
from varbreak.series import ResidualSeries

_RSS_FLOOR = np.finfo(np.float64).tiny


@dataclass(frozen=True, eq=False)
class ArFit:
    """An autoregression fitted by OLS.

    ``residuals.values[k] = y_k - intercept - sum_i coefficients[i] * y_{k-i}``
    where y is the (demeaned, if requested) input and k runs over the
    effective sample t = order+1..n.
    """

    order: int
    coefficients: tuple[float, ...]
    intercept: float
    mean: float
    residuals: ResidualSeries
    n_effective: int
    demeaned: bool
    with_intercept: bool


def _validate_input(values) -> np.ndarray:
    x = np.asarray(values, dtype=np.float64)
    if x.ndim != 1:
        raise ValueError(f"series must be one-dimensional, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise ValueError("series contains NaN or infinite values")
    return x


def _lag_columns(z: np.ndarray, order: int, start: int) -> list[np.ndarray]:
    # column i holds z_{t-i} for responses z_t, t = start..n-1 (0-based)
    return [z[start - i : z.size - i] for i in range(1, order + 1)]


def fit_ar_ols(values, order: int, *, demean: bool = False, intercept: bool = False) -> ArFit:
    """OLS fit of x_t on (x_{t-1}, ..., x_{t-order}).

    Parameters
    ----------
    values : array_like
        Observed series, length strictly greater than ``order + 1``.
    order : int
        Number of lags m >= 0.  With m = 0 the residuals are the input
        itself (demeaned or intercept-adjusted if requested).
    demean : bool
        Subtract the sample mean before fitting; recorded in the fit.
    intercept : bool
        Include a constant regressor.  Off for zero-mean models,
        on by default in the real-data pipeline.

    Raises
    ------
    ValueError
        For a negative order or a too-short series.
    SingularDesignError
        If the regressor matrix is rank deficient.
    """
    x = _validate_input(values)
    if order < 0:
        raise ValueError(f"order must be nonnegative, got {order}")
    if x.size <= order + 1:
        raise ValueError(f"series length {x.size} must exceed order + 1 = {order + 1}")
    mean = float(x.mean()) if demean else 0.0
    z = x - mean
    if order == 0 and not intercept:
        return ArFit(
            order=0,
            coefficients=(),
            intercept=0.0,
            mean=mean,
            residuals=ResidualSeries(z),
            n_effective=z.size,
            demeaned=demean,
            with_intercept=False,
        )
    y = z[order:]
    columns = _lag_columns(z, order, order)
    if intercept:
        columns = [np.ones(y.size)] + columns
    design = np.column_stack(columns)
    beta, _, rank, _ = np.linalg.lstsq(design, y, rcond=None)
    if rank < design.shape[1]:
        raise SingularDesignError(
            f"AR({order}) regressor matrix has rank {rank} < {design.shape[1]}"
        )
    const = float(beta[0]) if intercept else 0.0
    coeffs = tuple(float(b) for b in (beta[1:] if intercept else beta))
    residuals = y - design @ beta
    return ArFit(
        order=order,
        coefficients=coeffs,
        intercept=const,
        mean=mean,
        residuals=ResidualSeries(residuals),
        n_effective=y.size,
        demeaned=demean,
        with_intercept=intercept,
    )


def select_ar_order(values, max_order: int, *, demean: bool = False, intercept: bool = True) -> int:
    """AIC order selection over m = 0..max_order on a common sample.

    Every candidate is fitted on the same responses t = max_order+1..n,
    scored with ``n_eff * log(RSS/n_eff) + 2(m+1)``, and the smallest
    minimizing order is returned.

    Raises
    ------
    ValueError
        If the series is too short for ``max_order``.
    SingularDesignError
        From the failing order, if any candidate fit is rank deficient.
    """
    x = _validate_input(values)
    if max_order < 0:
        raise ValueError(f"max_order must be nonnegative, got {max_order}")
    if x.size <= max_order + 2:
        raise ValueError(f"series length {x.size} must exceed max_order + 2 = {max_order + 2}")
    z = x - x.mean() if demean else x
    y = z[max_order:]
    n_eff = y.size
    chosen = 0
    best = np.inf
    for m in range(0, max_order + 1):
        columns = _lag_columns(z, m, max_order)
        if intercept:
            columns = [np.ones(n_eff)] + columns
        if columns:
            design = np.column_stack(columns)
            beta, _, rank, _ = np.linalg.lstsq(design, y, rcond=None)
            if rank < design.shape[1]:
                raise SingularDesignError(
                    f"order {m}: AR regressor matrix has rank {rank} < {design.shape[1]}"
                )
            rss = float(np.sum((y - design @ beta) ** 2))
        else:
            rss = float(y @ y)
        aic = n_eff * np.log(max(rss, _RSS_FLOOR) / n_eff) + 2.0 * (m + 1)
        if aic < best:
            best = aic
            chosen = m
    return chosen


def default_max_order(n: int, frequency: str = "unknown") -> int:
    """Conventional AIC search cap: 8 quarterly, 12 monthly, else 4*(n/100)**0.25."""
    if frequency == "quarterly":
        cap = 8
    elif frequency == "monthly":
        cap = 12
    else:
        cap = int(round(4.0 * (n / 100.0) ** 0.25))
    return max(0, min(cap, n - 3))
