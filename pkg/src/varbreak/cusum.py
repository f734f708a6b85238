"""Cumulative-sums-of-squares statistics for abrupt variance breaks.

Four statistics are provided, all of the sup-of-bridge form and all
converging under their null hypotheses to ``sup_s |W(s)|`` with ``W`` a
Brownian bridge (see :mod:`varbreak.nulldist`):

* :func:`statistic_it` -- the classic statistic of Inclan and Tiao
  (1994), ``sup_k |sqrt(n/2) * (C_k/C_n - k/n)|`` with
  ``C_k = sum_{t<=k} u_t**2``.  Sized for i.i.d. Gaussian errors.
* :func:`statistic_sanso` -- the fourth-moment corrected statistic of
  Sansó, Aragó and Carrion (2004),
  ``sup_k |n**-0.5 * (C_k - (k/n) C_n) / sqrt(eta - (C_n/n)**2)|``
  with ``eta = n**-1 sum u_t**4``, valid for non-Gaussian errors.
* :func:`statistic_subsample` -- the same statistic restricted to a
  contiguous window of length q, every n replaced by q.
* :func:`statistic_corrected` -- the subsample statistic computed on
  squared residuals rescaled by a fitted polynomial variance profile,
  so that a smooth drift in the unconditional variance is removed
  before testing for an abrupt break.  The partial sums become
  ``sum g_hat**-2(t/n) u_t**2`` and the fourth-moment average
  ``q**-1 sum g_hat**-4(t/n) u_t**4``.

All functions are pure; inputs are immutable value types from
:mod:`varbreak.series` and :mod:`varbreak.variance_poly`.

References
----------
Inclan, C., & Tiao, G. C. (1994). Use of cumulative sums of squares for
    retrospective detection of changes of variance. Journal of the
    American Statistical Association, 89(427), 913-923.

Sansó, A., Aragó, V., & Carrion-i-Silvestre, J. L. (2004). Testing for
    changes in the unconditional variance of financial time series.
    Revista de Economía Financiera, 4, 32-53.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from varbreak.errors import DegenerateSeriesError, NonpositiveVarianceError, ZeroDispersionError
from varbreak.series import ResidualSeries, SubsampleWindow

if TYPE_CHECKING:
    from varbreak.variance_poly import VariancePolyFit

POSITIVITY_MODES = ("error", "clamp", "none")


@dataclass(frozen=True, eq=False)
class CusumTrace:
    """Intermediate quantities of a bridge statistic.

    Attributes
    ----------
    cumsums : numpy.ndarray
        Partial sums C_k of the (possibly variance-rescaled) squared
        residuals, k = 1..q.
    eta : float or None
        Window average of the (rescaled) fourth powers.
    bridge : numpy.ndarray or None
        Normalized deviations B_k = (C_k - (k/q) C_q) / sqrt(eta - (C_q/q)**2).
    statistic : float or None
        sup_k |q**-0.5 * B_k|.
    """

    cumsums: np.ndarray
    eta: float | None = None
    bridge: np.ndarray | None = None
    statistic: float | None = None


def _bridge_trace(squares: np.ndarray) -> CusumTrace:
    """Full bridge trace of a window of (rescaled) squared residuals."""
    q = squares.size
    cumsums = np.cumsum(squares)
    eta = float(np.mean(squares * squares))
    dispersion = eta - (cumsums[-1] / q) ** 2
    if dispersion <= 0.0:
        raise ZeroDispersionError(
            f"squared residuals are empirically constant (dispersion {dispersion:.3g}); "
            "the statistic is undefined"
        )
    k = np.arange(1, q + 1, dtype=np.float64)
    bridge = (cumsums - (k / q) * cumsums[-1]) / math.sqrt(dispersion)
    statistic = float(np.max(np.abs(bridge)) / math.sqrt(q))
    return CusumTrace(cumsums=cumsums, eta=eta, bridge=bridge, statistic=statistic)


def cumulative_squares(series: ResidualSeries, window: SubsampleWindow) -> CusumTrace:
    """Partial sums C_k of squared residuals over a window.

    Returns a :class:`CusumTrace` with only ``cumsums`` populated:
    ``cumsums[k-1] = sum_{t=offset+1}^{offset+k} u_t**2`` for k = 1..q.

    Raises
    ------
    WindowBoundsError
        If the window does not match the series.
    """
    u = window.slice_values(series)
    return CusumTrace(cumsums=np.cumsum(u * u))


def statistic_it(series: ResidualSeries) -> float:
    """The Inclan-Tiao statistic ``sup_k |sqrt(n/2) * (C_k/C_n - k/n)|``.

    Raises
    ------
    DegenerateSeriesError
        If every residual is zero, so C_n = 0.
    """
    sq = series.values * series.values
    cumsums = np.cumsum(sq)
    n = series.n
    if cumsums[-1] <= 0.0:
        raise DegenerateSeriesError("all residuals are zero; the statistic is undefined")
    k = np.arange(1, n + 1, dtype=np.float64)
    drift = cumsums / cumsums[-1] - k / n
    return float(math.sqrt(n / 2.0) * np.max(np.abs(drift)))


def sanso_trace(series: ResidualSeries, window: SubsampleWindow | None = None) -> CusumTrace:
    """Full trace of the fourth-moment corrected statistic on a window.

    With ``window=None`` the whole sample is used, which reproduces
    :func:`statistic_sanso` exactly.
    """
    if window is None:
        window = SubsampleWindow.full(series.n)
    u = window.slice_values(series)
    return _bridge_trace(u * u)


def statistic_sanso(series: ResidualSeries) -> float:
    """Fourth-moment corrected statistic on the full sample.

    ``sup_k |n**-0.5 * B_k|`` with
    ``B_k = (C_k - (k/n) C_n) / sqrt(eta - (C_n/n)**2)`` and
    ``eta = n**-1 sum u_t**4``.

    Raises
    ------
    ZeroDispersionError
        If the squared residuals are empirically constant, so the
        denominator is not positive.
    """
    stat = sanso_trace(series).statistic
    assert stat is not None
    return stat


def statistic_subsample(series: ResidualSeries, window: SubsampleWindow) -> float:
    """Fourth-moment corrected statistic restricted to a window.

    All sums run over t = offset+1, ..., offset+q and every n in the
    full-sample formula is replaced by q.  With the full window this is
    bit-identical to :func:`statistic_sanso`.

    Raises
    ------
    WindowBoundsError
        If the window does not match the series.
    ZeroDispersionError
        If the windowed squared residuals are empirically constant.
    """
    stat = sanso_trace(series, window).statistic
    assert stat is not None
    return stat


def corrected_trace(
    series: ResidualSeries,
    window: SubsampleWindow,
    fit: "VariancePolyFit",
    *,
    positivity: str = "error",
    pos_floor_frac: float = 0.01,
) -> CusumTrace:
    """Full trace of the variance-profile-corrected statistic.

    The squared residuals are divided by the fitted variance profile
    ``g_hat**2(t/n)`` before the bridge is formed, so ``cumsums`` holds
    the rescaled partial sums and ``eta`` the rescaled fourth-moment
    average.

    Parameters
    ----------
    series, window
        Residuals and the analysis window.
    fit : VariancePolyFit
        Polynomial variance profile, usually fitted on the same window.
    positivity : {"error", "clamp", "none"}
        What to do when the profile dips to or below the positivity
        floor ``pos_floor_frac * mean(u_t**2)`` inside the window:
        raise (default), replace the offending values by the floor, or
        use the profile as is.
    pos_floor_frac : float
        Floor fraction; see :func:`varbreak.variance_poly.check_positivity`.

    Raises
    ------
    NonpositiveVarianceError
        Under ``positivity="error"`` when the profile dips to or below
        the floor, and under every mode when a rescaled square is not
        finite (profile exactly zero).
    ZeroDispersionError
        If the rescaled squares are empirically constant.
    """
    if positivity not in POSITIVITY_MODES:
        raise ValueError(f"positivity must be one of {POSITIVITY_MODES}, got {positivity!r}")
    u = window.slice_values(series)
    if fit.window.n != window.n:
        raise ValueError(
            f"variance fit was built for series length {fit.window.n}, window has {window.n}"
        )
    squares = u * u
    profile = fit.profile(window)
    floor = pos_floor_frac * float(np.mean(squares))
    min_value = float(np.min(profile))
    if positivity == "error" and min_value <= floor:
        t_min = int(window.offset + 1 + np.argmin(profile))
        raise NonpositiveVarianceError(
            f"fitted variance dips to {min_value:.6g} at t={t_min} "
            f"(positivity floor {floor:.6g}); clamp explicitly or refit with a lower order"
        )
    if positivity == "clamp":
        profile = np.maximum(profile, floor)
    rescaled = squares / profile
    if not np.all(np.isfinite(rescaled)):
        raise NonpositiveVarianceError("fitted variance is exactly zero inside the window")
    return _bridge_trace(rescaled)


def statistic_corrected(
    series: ResidualSeries,
    window: SubsampleWindow,
    fit: "VariancePolyFit",
    *,
    positivity: str = "error",
    pos_floor_frac: float = 0.01,
) -> float:
    """Variance-profile-corrected statistic on a window.

    ``sup_k |q**-0.5 * B_k|`` computed from
    ``C_k = sum g_hat**-2(t/n) u_t**2`` and
    ``eta = q**-1 sum g_hat**-4(t/n) u_t**4``.  When the profile is a
    positive constant this reduces exactly to :func:`statistic_subsample`.

    See :func:`corrected_trace` for parameters and errors.
    """
    stat = corrected_trace(
        series, window, fit, positivity=positivity, pos_floor_frac=pos_floor_frac
    ).statistic
    assert stat is not None
    return stat
