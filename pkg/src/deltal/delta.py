"""Relief matrix of absolute deviations from centred local linear fits.

For each time ``t`` and window length ``L`` a least-squares line is fitted to
the profile over the window of length ``L`` centred on ``t``, and the cell
holds ``|X_t - fit(t)|``. Cells whose window would leave the series are
undefined (``NaN`` in ``values``, ``False`` in ``defined_mask``).

Even windows cannot be centred exactly. With ``even_shift="left"`` (default)
``t`` sits at position ``L/2 + 1`` of the window, i.e. the window reaches one
step further to the left; ``"right"`` mirrors this.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from ._parallel import ordered_map
from .core import Profile, as_series, build_profile, least_squares_fit
from .exceptions import BoundsError
from .validation import check_int, check_window_range

__all__ = [
    "DeltaMatrix",
    "centered_window",
    "delta_at",
    "delta_row",
    "delta_matrix",
    "DeltaLTransformer",
]

EVEN_SHIFTS = ("left", "right")


def _left_extent(L: int, even_shift: str) -> int:
    if even_shift not in EVEN_SHIFTS:
        raise ValueError(f"even_shift must be one of {EVEN_SHIFTS}, got {even_shift!r}")
    return L // 2 if even_shift == "left" else (L - 1) // 2


@dataclass(frozen=True)
class DeltaMatrix:
    """``|Delta|`` over window lengths (rows) and time (columns).

    ``values[i, t - 1]`` is the cell for ``L = l_values[i]`` at time ``t``.
    """

    values: np.ndarray
    defined_mask: np.ndarray
    l_values: np.ndarray
    n: int
    even_shift: str = "left"

    @property
    def l_range(self) -> tuple[int, int]:
        return int(self.l_values[0]), int(self.l_values[-1])

    def value(self, t: int, L: int):
        """Cell ``(t, L)``, or ``None`` when undefined."""
        i = L - int(self.l_values[0])
        if not (1 <= t <= self.n) or not (0 <= i < len(self.l_values)):
            raise BoundsError(f"cell (t={t}, L={L}) outside the matrix")
        if not self.defined_mask[i, t - 1]:
            return None
        return float(self.values[i, t - 1])


def centered_window(t: int, L: int, n: int, even_shift: str = "left"):
    """Inclusive range ``(lo, hi)`` of the length-``L`` window centred on ``t``.

    Returns ``None`` if the window leaves ``[1, n]``.
    """
    n = check_int(n, "n", minimum=1)
    t = check_int(t, "t", minimum=1, maximum=n)
    L = check_int(L, "L", minimum=2)
    lo = t - _left_extent(L, even_shift)
    hi = lo + L - 1
    if lo < 1 or hi > n:
        return None
    return lo, hi


def delta_at(profile, t: int, L: int, even_shift: str = "left"):
    """``|X_t - fit(t)|`` for the centred window, or ``None`` if undefined."""
    X = profile.values if isinstance(profile, Profile) else np.asarray(profile, float)
    window = centered_window(t, L, X.shape[0], even_shift)
    if window is None:
        return None
    if L == 2:
        return 0.0
    fit = least_squares_fit(X, *window)
    return float(abs(X[t - 1] - fit(t)))


# -- double-double helpers ---------------------------------------------------
# Window sums are differences of prefix sums over the whole series, and the
# centred cross-sum subtracts two terms that each grow with the window
# position. In plain float64 both steps cancel badly on long series, so the
# prefix sums and the cross-sum are carried as unevaluated (hi, lo) pairs.

_SPLIT = 134217729.0  # 2**27 + 1


def _two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _two_prod(a, b):
    p = a * b
    ah = _SPLIT * a
    ah = ah - (ah - a)
    bh = _SPLIT * b
    bh = bh - (bh - b)
    al, bl = a - ah, b - bh
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def _dd_sub(ahi, alo, bhi, blo):
    s, e = _two_sum(ahi, -bhi)
    e = e + (alo - blo)
    hi = s + e
    return hi, e - (hi - s)


def _dd_cumsum(hi_terms, lo_terms):
    """Prefix sums (with a leading zero) of ``hi_terms + lo_terms``."""
    n = len(hi_terms)
    out_hi = np.zeros(n + 1)
    out_lo = np.zeros(n + 1)
    sh = sl = 0.0
    for i, (a, b) in enumerate(zip(hi_terms.tolist(), lo_terms.tolist()), start=1):
        for v in (a, b):
            s = sh + v
            bb = s - sh
            e = (sh - (s - bb)) + (v - bb) + sl
            sh = s + e
            sl = e - (sh - s)
        out_hi[i] = sh
        out_lo[i] = sl
    return out_hi, out_lo


@dataclass(frozen=True)
class _PrefixSums:
    """Double-double prefix sums of ``X_k`` and ``k * X_k`` (``k`` 0-based)."""

    x: tuple
    kx: tuple

    @classmethod
    def of(cls, X: np.ndarray) -> "_PrefixSums":
        k = np.arange(X.shape[0], dtype=np.float64)
        kx_hi, kx_lo = _two_prod(k, X)
        return cls(_dd_cumsum(X, np.zeros_like(X)), _dd_cumsum(kx_hi, kx_lo))

    def window(self, which, s, L):
        hi, lo = getattr(self, which)
        return _dd_sub(hi[s + L], lo[s + L], hi[s], lo[s])


def _rolling_block(X: np.ndarray, ls: np.ndarray, even_shift: str, prefix: _PrefixSums) -> np.ndarray:
    """Rows for every ``L`` in ``ls`` at once, as one flattened computation."""
    n = X.shape[0]
    out = np.full((len(ls), n), np.nan)
    ls = np.asarray(ls, dtype=np.int64)
    counts = np.maximum(n - ls + 1, 0)
    row_idx = np.repeat(np.arange(len(ls)), counts)
    if row_idx.size == 0:
        return out
    # window start s runs over 0..n-L for each row
    offsets = np.concatenate(([0], np.cumsum(counts)[:-1]))
    s = np.arange(row_idx.size) - np.repeat(offsets, counts)
    L = ls[row_idx]
    left = L // 2 if even_shift == "left" else (L - 1) // 2
    Lf = L.astype(np.float64)
    half = 0.5 * (Lf - 1.0)
    sx_hi, sx_lo = prefix.window("x", s, L)
    skx_hi, skx_lo = prefix.window("kx", s, L)
    # sum (k - kbar) X = sum kX - kbar * sum X, with kbar = s + half exact
    kbar = s + half
    p_hi, p_lo = _two_prod(kbar, sx_hi)
    p_lo = p_lo + kbar * sx_lo
    d_hi, d_lo = _dd_sub(skx_hi, skx_lo, p_hi, p_lo)
    s_xy = d_hi + d_lo
    s_xx = Lf * (Lf * Lf - 1.0) / 12.0
    fit = (sx_hi + sx_lo) / Lf + (s_xy / s_xx) * (left - half)
    vals = np.abs(X[s + left] - fit)
    # two points are interpolated exactly
    vals[L == 2] = 0.0
    out[row_idx, s + left] = vals
    return out


def delta_row(X: np.ndarray, L: int, even_shift: str = "left", prefix=None) -> np.ndarray:
    """One matrix row from sliding sums; ``NaN`` where undefined.

    Window sums of ``X`` and ``k * X`` come from prefix sums, so each cell
    costs O(1) after an O(n) setup. Pass ``prefix`` (built once per series)
    to share that setup across rows.
    """
    X = np.asarray(X, dtype=np.float64)
    _left_extent(L, even_shift)
    if prefix is None:
        prefix = _PrefixSums.of(X)
    return _rolling_block(X, np.array([L]), even_shift, prefix)[0]


# cells per vectorised block; bounds temporary memory to a few tens of MB
_BLOCK_CELLS = 1 << 18


def _row_blocks(l_values: np.ndarray, n: int):
    blocks, current, cells = [], [], 0
    for L in l_values.tolist():
        current.append(L)
        cells += max(n - L + 1, 0)
        if cells >= _BLOCK_CELLS:
            blocks.append(np.array(current))
            current, cells = [], 0
    if current:
        blocks.append(np.array(current))
    return blocks


def _naive_row(X: np.ndarray, L: int, even_shift: str) -> np.ndarray:
    n = X.shape[0]
    row = np.full(n, np.nan)
    for t in range(1, n + 1):
        d = delta_at(X, t, L, even_shift)
        if d is not None:
            row[t - 1] = d
    return row


def delta_matrix(
    series,
    l_min: int = 2,
    l_max: int | None = None,
    *,
    even_shift: str = "left",
    method: str = "rolling",
    n_jobs=None,
) -> DeltaMatrix:
    """Full relief matrix for ``L = l_min..l_max``.

    ``method="naive"`` refits every window from scratch and exists as a
    cross-check for the default sliding-sum path.
    """
    ts = as_series(series)
    n = ts.n
    if l_max is None:
        l_max = max(n // 3, l_min)
    l_min, l_max = check_window_range(l_min, l_max, n)
    _left_extent(2, even_shift)
    if method not in ("rolling", "naive"):
        raise ValueError(f"unknown method {method!r}")

    X = build_profile(ts).values
    l_values = np.arange(l_min, l_max + 1)
    if method == "rolling":
        # blocks depend only on (n, L range), so thread count cannot change values
        prefix = _PrefixSums.of(X)
        blocks = ordered_map(
            lambda ls: _rolling_block(X, ls, even_shift, prefix), _row_blocks(l_values, n), n_jobs
        )
    else:
        blocks = ordered_map(lambda L: _naive_row(X, int(L), even_shift)[None, :], l_values, n_jobs)
    values = np.vstack(blocks)
    return DeltaMatrix(
        values=values,
        defined_mask=~np.isnan(values),
        l_values=l_values,
        n=n,
        even_shift=even_shift,
    )


class DeltaLTransformer(TransformerMixin, BaseEstimator):
    """Estimator wrapper around :func:`delta_matrix`.

    ``transform`` maps a series of length ``n`` to an array of shape
    ``(l_max - l_min + 1, n)`` with ``NaN`` in undefined cells. ``fit`` keeps
    the full :class:`DeltaMatrix` of the training series in ``matrix_``.
    """

    def __init__(self, l_min=2, l_max=None, even_shift="left", n_jobs=None):
        self.l_min = l_min
        self.l_max = l_max
        self.even_shift = even_shift
        self.n_jobs = n_jobs

    def _compute(self, X):
        return delta_matrix(
            X, self.l_min, self.l_max, even_shift=self.even_shift, n_jobs=self.n_jobs
        )

    def fit(self, X, y=None):
        self.matrix_ = self._compute(X)
        self.n_features_in_ = self.matrix_.n
        return self

    def transform(self, X):
        return self._compute(X).values
