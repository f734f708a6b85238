"""Core value types: residual series and contiguous analysis windows.

Both types are immutable and validate their invariants at construction,
so downstream code can treat them as always well formed and share them
freely across threads or worker processes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from varbreak.errors import WindowBoundsError


@dataclass(frozen=True, eq=False)
class ResidualSeries:
    """A finite sequence of (possibly prewhitened) residuals.

    Parameters
    ----------
    values : array_like
        Ordered residuals, coerced to a read-only float64 array.

    Raises
    ------
    ValueError
        If there are fewer than two observations, the input is not
        one-dimensional, or any value is NaN or infinite.
    """

    values: np.ndarray

    def __post_init__(self) -> None:
        arr = np.array(self.values, dtype=np.float64)
        if arr.ndim != 1:
            raise ValueError(f"residuals must be one-dimensional, got shape {arr.shape}")
        if arr.size < 2:
            raise ValueError(f"need at least 2 residuals, got {arr.size}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("residuals contain NaN or infinite values")
        arr.flags.writeable = False
        object.__setattr__(self, "values", arr)

    @property
    def n(self) -> int:
        """Sample length."""
        return int(self.values.size)


@dataclass(frozen=True)
class SubsampleWindow:
    """A contiguous window of ``length`` points starting after ``offset``.

    The window selects the observations t = offset+1, ..., offset+length
    (1-based) of a series of length ``n``.  Its midpoint in rescaled time,
    ``center = (2*offset/n + length/n) / 2``, is the centering point used
    by the polynomial variance regression.

    Parameters
    ----------
    n : int
        Length of the series the window refers to.
    offset : int
        Number of observations skipped before the window starts.
    length : int
        Window length q; at least 2 and ``offset + length <= n``.
    gamma : float, optional
        The exponent such that ``length = floor(n ** gamma)`` when the
        window was derived from one.  Defaults to ``log(length)/log(n)``.
    """

    n: int
    offset: int
    length: int
    gamma: float | None = None

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError(f"series length n must be at least 2, got {self.n}")
        if self.length < 2:
            raise ValueError(f"window length must be at least 2, got {self.length}")
        if self.offset < 0:
            raise ValueError(f"window offset must be nonnegative, got {self.offset}")
        if self.offset + self.length > self.n:
            raise WindowBoundsError(
                f"window [{self.offset + 1}, {self.offset + self.length}] "
                f"does not fit in a series of length {self.n}"
            )
        if self.gamma is None:
            gamma = 1.0 if self.length == self.n else math.log(self.length) / math.log(self.n)
            object.__setattr__(self, "gamma", gamma)
        elif not 0.0 < self.gamma <= 1.0:
            raise ValueError(f"gamma must be in (0, 1], got {self.gamma}")

    @classmethod
    def full(cls, n: int) -> "SubsampleWindow":
        """The whole sample as a window."""
        return cls(n=n, offset=0, length=n, gamma=1.0)

    @classmethod
    def from_exponent(cls, n: int, gamma: float, start_fraction: float = 0.0) -> "SubsampleWindow":
        """Window of length ``floor(n ** gamma)`` starting at ``floor(start_fraction * n)``."""
        if not 0.0 < gamma <= 1.0:
            raise ValueError(f"gamma must be in (0, 1], got {gamma}")
        if not 0.0 <= start_fraction < 1.0:
            raise ValueError(f"start_fraction must be in [0, 1), got {start_fraction}")
        return cls(n=n, offset=math.floor(start_fraction * n), length=math.floor(n**gamma), gamma=gamma)

    @property
    def center(self) -> float:
        """Window midpoint in rescaled time, (2*offset/n + length/n) / 2."""
        return (2.0 * self.offset / self.n + self.length / self.n) / 2.0

    @property
    def stop(self) -> int:
        """One past the last 0-based index covered by the window."""
        return self.offset + self.length

    def times(self) -> np.ndarray:
        """1-based observation indices t covered by the window."""
        return np.arange(self.offset + 1, self.offset + self.length + 1)

    def validate_for(self, series: ResidualSeries) -> None:
        """Raise :class:`WindowBoundsError` unless the window matches ``series``."""
        if self.n != series.n:
            raise WindowBoundsError(
                f"window was built for a series of length {self.n}, got length {series.n}"
            )

    def slice_values(self, series: ResidualSeries) -> np.ndarray:
        """The residual values covered by the window."""
        self.validate_for(series)
        return series.values[self.offset : self.stop]
