"""Series containers, the accumulation profile and the least-squares kernel.

Time indices are 1-based throughout the public API: a series of length ``n``
is indexed ``t = 1..n`` and an index range ``(lo, hi)`` is inclusive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import BoundsError, DegenerateFitError
from .validation import check_series

__all__ = [
    "TimeSeries",
    "Profile",
    "LinearFit",
    "as_series",
    "series_mean",
    "build_profile",
    "least_squares_fit",
    "detrend_windows",
]


@dataclass(frozen=True)
class TimeSeries:
    """Finite real samples on a unit time step."""

    samples: np.ndarray

    def __post_init__(self):
        arr = check_series(self.samples)
        arr.setflags(write=False)
        object.__setattr__(self, "samples", arr)

    def __len__(self):
        return self.samples.shape[0]

    @property
    def n(self) -> int:
        return self.samples.shape[0]


@dataclass(frozen=True)
class Profile:
    """Accumulated mean-centred series ``X_t`` and the mean it was centred on."""

    values: np.ndarray
    source_mean: float

    def __len__(self):
        return self.values.shape[0]

    @property
    def n(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True)
class LinearFit:
    """Least-squares line ``slope * k + intercept`` in absolute time index ``k``."""

    slope: float
    intercept: float
    domain: tuple[int, int] = field(default=(1, 1))

    def __call__(self, k):
        return self.slope * np.asarray(k, dtype=np.float64) + self.intercept


def as_series(series) -> TimeSeries:
    if isinstance(series, TimeSeries):
        return series
    return TimeSeries(series)


def series_mean(series) -> float:
    """Arithmetic mean of the samples.

    The sum is correctly rounded (``math.fsum``) and the result is clamped to
    ``[min, max]`` so a constant series returns its value exactly, which in
    turn makes its profile exactly zero.
    """
    x = as_series(series).samples
    mean = math.fsum(x) / x.shape[0]
    return float(min(max(mean, x.min()), x.max()))


def build_profile(series) -> Profile:
    ts = as_series(series)
    mean = series_mean(ts)
    values = np.cumsum(ts.samples - mean)
    values.setflags(write=False)
    return Profile(values=values, source_mean=mean)


def _as_profile_values(profile):
    if isinstance(profile, Profile):
        return profile.values
    return np.asarray(profile, dtype=np.float64)


def least_squares_fit(profile, lo: int, hi: int) -> LinearFit:
    """Ordinary least-squares line through ``X_k`` for ``k`` in ``[lo, hi]``.

    Uses the centred closed form, which stays accurate for large absolute
    indices.

    Raises
    ------
    DegenerateFitError
        If the range holds fewer than two points.
    BoundsError
        If the range leaves the profile.
    """
    X = _as_profile_values(profile)
    n = X.shape[0]
    if hi - lo + 1 < 2:
        raise DegenerateFitError(f"range [{lo}, {hi}] has fewer than two points")
    if lo < 1 or hi > n:
        raise BoundsError(f"range [{lo}, {hi}] outside profile bounds [1, {n}]")
    k = np.arange(lo, hi + 1, dtype=np.float64)
    y = X[lo - 1 : hi]
    k_mean = 0.5 * (lo + hi)
    y_mean = y.mean()
    dk = k - k_mean
    slope = float(np.dot(dk, y - y_mean) / np.dot(dk, dk))
    intercept = float(y_mean - slope * k_mean)
    return LinearFit(slope=slope, intercept=intercept, domain=(lo, hi))


def detrend_windows(windows: np.ndarray) -> np.ndarray:
    """Residuals of a per-row least-squares line through ``windows``.

    ``windows`` has shape ``(n_windows, L)``; row ``i`` holds the profile over
    one window. Residuals do not depend on the abscissa origin, so the
    window-local centred index is used.
    """
    windows = np.asarray(windows, dtype=np.float64)
    L = windows.shape[-1]
    if L < 2:
        raise DegenerateFitError("windows need at least two points")
    u = np.arange(L, dtype=np.float64) - 0.5 * (L - 1)
    centred = windows - windows.mean(axis=-1, keepdims=True)
    slope = centred @ u / np.dot(u, u)
    return centred - slope[..., None] * u
