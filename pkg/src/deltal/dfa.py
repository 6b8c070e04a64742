"""Detrended fluctuation analysis over non-overlapping windows.

The profile is cut into ``J = n // L`` consecutive windows of length ``L``
(trailing ``n % L`` points are dropped), a least-squares line is removed from
each window, and the per-window RMS residuals are averaged into ``F(L)``. The
scaling exponent is the slope of ``log F`` against ``log L``.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from sklearn.base import BaseEstimator

from ._parallel import ordered_map
from .core import Profile, as_series, build_profile, detrend_windows
from .exceptions import BoundsError, InsufficientPointsError, ZeroFluctuationError
from .validation import check_int

__all__ = [
    "FluctuationSpectrum",
    "window_rms",
    "fluctuation",
    "dfa_spectrum",
    "fit_alpha",
    "geometric_grid",
    "default_l_grid",
    "DFA",
]

GRID_RATIO = 2.0 ** 0.25


@dataclass(frozen=True)
class FluctuationSpectrum:
    """``F(L)`` sampled on increasing window lengths, plus the fitted exponent."""

    l_values: np.ndarray
    fluctuations: np.ndarray
    alpha: float | None = None
    r_squared: float | None = None
    fit_range: tuple[int, int] | None = None

    @property
    def points(self):
        return [(int(L), float(F)) for L, F in zip(self.l_values, self.fluctuations)]

    def with_fit(self, fit_range=None) -> "FluctuationSpectrum":
        """Return a copy carrying ``alpha`` and ``r_squared`` for ``fit_range``."""
        fit_range = _resolve_fit_range(self, fit_range)
        alpha, r2 = fit_alpha(self, fit_range)
        return replace(self, alpha=alpha, r_squared=r2, fit_range=fit_range)


def _profile_values(profile):
    if isinstance(profile, Profile):
        return profile.values
    return np.asarray(profile, dtype=np.float64)


def window_rms(profile, j: int, L: int) -> float:
    """RMS deviation of window ``j`` (1-based) of length ``L`` from its linear fit."""
    X = _profile_values(profile)
    L = check_int(L, "L", minimum=2, maximum=X.shape[0])
    j = check_int(j, "j", minimum=1, maximum=X.shape[0] // L)
    resid = detrend_windows(X[(j - 1) * L : j * L][None, :])[0]
    return float(np.sqrt(np.mean(resid * resid)))


def _window_rms_all(X: np.ndarray, L: int) -> np.ndarray:
    J = X.shape[0] // L
    resid = detrend_windows(X[: J * L].reshape(J, L))
    return np.sqrt(np.mean(resid * resid, axis=1))


def fluctuation(profile, L: int) -> float:
    """Mean of ``window_rms`` over all ``n // L`` complete windows."""
    X = _profile_values(profile)
    L = check_int(L, "L", minimum=2, maximum=X.shape[0])
    return float(np.mean(_window_rms_all(X, L)))


def geometric_grid(lo: int, hi: int, ratio: float = GRID_RATIO, count: int | None = None):
    """Distinct integers roughly geometrically spaced from ``lo`` to ``hi``."""
    if lo < 1 or hi < lo:
        raise BoundsError(f"invalid grid bounds [{lo}, {hi}]")
    if count is None:
        steps = int(np.floor(np.log(hi / lo) / np.log(ratio) + 1e-9))
        raw = lo * ratio ** np.arange(steps + 1)
    else:
        raw = np.geomspace(lo, hi, int(count))
    grid = np.unique(np.rint(raw).astype(np.int64))
    return grid[(grid >= lo) & (grid <= hi)]


def default_l_grid(n: int) -> np.ndarray:
    """Geometric grid with ratio ``2**(1/4)`` from 4 to ``n // 4``."""
    hi = n // 4
    if hi < 4:
        raise BoundsError(f"series of length {n} too short for the default grid")
    return geometric_grid(4, hi)


def dfa_spectrum(series, l_values=None, *, n_jobs=None) -> FluctuationSpectrum:
    """Fluctuation function of ``series`` at each window length in ``l_values``.

    Window lengths must lie in ``[3, n // 2]`` and be strictly increasing; the
    returned spectrum has no exponent attached (see :meth:`FluctuationSpectrum.with_fit`).
    """
    ts = as_series(series)
    n = ts.n
    if n < 8:
        raise BoundsError(f"series length {n} is below the minimum of 8")
    if l_values is None:
        l_values = default_l_grid(n)
    ls = np.asarray(l_values)
    if ls.ndim != 1 or ls.size == 0:
        raise BoundsError("l_values must be a non-empty 1-D sequence")
    if not np.issubdtype(ls.dtype, np.integer):
        if not np.all(ls == np.rint(ls)):
            raise BoundsError("window lengths must be integers")
        ls = ls.astype(np.int64)
    for L in ls:
        if L < 3 or L > n // 2:
            raise BoundsError(f"window length L={int(L)} outside [3, {n // 2}]")
    if np.any(np.diff(ls) <= 0):
        raise BoundsError("window lengths must be strictly increasing")

    X = build_profile(ts).values
    F = ordered_map(lambda L: float(np.mean(_window_rms_all(X, int(L)))), ls, n_jobs)
    return FluctuationSpectrum(l_values=ls.astype(np.int64), fluctuations=np.asarray(F))


def _resolve_fit_range(spectrum, fit_range):
    if fit_range is None:
        return int(spectrum.l_values[0]), int(spectrum.l_values[-1])
    lo, hi = fit_range
    return int(lo), int(hi)


def fit_alpha(spectrum: FluctuationSpectrum, fit_range=None) -> tuple[float, float]:
    """Slope and ``r**2`` of the least-squares line through ``(log L, log F)``.

    Only points with ``fit_range[0] <= L <= fit_range[1]`` are used.

    Raises
    ------
    InsufficientPointsError
        Fewer than three points fall inside the range.
    ZeroFluctuationError
        Some ``F`` inside the range is zero.
    """
    lo, hi = _resolve_fit_range(spectrum, fit_range)
    L = np.asarray(spectrum.l_values, dtype=np.float64)
    F = np.asarray(spectrum.fluctuations, dtype=np.float64)
    sel = (L >= lo) & (L <= hi)
    if sel.sum() < 3:
        raise InsufficientPointsError(
            f"fit range [{lo}, {hi}] holds {int(sel.sum())} points, need at least 3"
        )
    if np.any(F[sel] <= 0):
        raise ZeroFluctuationError("zero fluctuation inside the fit range; alpha undefined")
    x = np.log(L[sel])
    y = np.log(F[sel])
    dx = x - x.mean()
    dy = y - y.mean()
    slope = float(np.dot(dx, dy) / np.dot(dx, dx))
    ss_tot = float(np.dot(dy, dy))
    resid = dy - slope * dx
    ss_res = float(np.dot(resid, resid))
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return slope, float(min(max(r2, 0.0), 1.0))


class DFA(BaseEstimator):
    """Scaling-exponent estimator.

    Parameters
    ----------
    l_values : sequence of int, optional
        Window lengths. Defaults to :func:`default_l_grid` of the input length.
    fit_range : (int, int), optional
        Inclusive window-length range used for the exponent fit; all points
        by default.
    n_jobs : int, optional
        Threads used across window lengths. Results do not depend on it.

    Attributes
    ----------
    spectrum_ : FluctuationSpectrum
    alpha_ : float
    r_squared_ : float
    """

    def __init__(self, l_values=None, fit_range=None, n_jobs=None):
        self.l_values = l_values
        self.fit_range = fit_range
        self.n_jobs = n_jobs

    def fit(self, X, y=None):
        spectrum = dfa_spectrum(X, self.l_values, n_jobs=self.n_jobs).with_fit(self.fit_range)
        self.spectrum_ = spectrum
        self.alpha_ = spectrum.alpha
        self.r_squared_ = spectrum.r_squared
        return self
