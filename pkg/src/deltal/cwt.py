"""Continuous wavelet transform scalegram and its local-maxima skeleton.

Two real mother wavelets are supported:

``gauss2``
    Mexican hat ``(1 - u**2) * exp(-u**2 / 2)``, sampled at the integer time
    points (Riemann sum with unit step).
``haar``
    ``+1`` on ``[0, 1/2)``, ``-1`` on ``[1/2, 1)``. Sample ``t`` is treated as
    the unit cell ``[t, t + 1)`` and weighted by the exact integral of the
    scaled wavelet over it. At even integer scales and integer shifts this is
    the same as sampling ``psi((t - b) / a)``; for other scales it keeps the
    discrete kernel exactly zero-mean.

:func:`cwt_coefficient` uses the shift ``b`` as written in
``W(a, b) = a**-0.5 * sum_t x_t psi((t - b) / a)``. In a :class:`Scalegram`
column ``b`` instead refers to the wavelet's centre (``centered=True``), so
features line up with the time axis for both wavelets; for ``haar`` that is a
shift of ``a / 2`` and for ``gauss2`` none.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from ._parallel import ordered_map
from .core import as_series
from .exceptions import DomainError
from .validation import check_scales

__all__ = [
    "WAVELETS",
    "mother_wavelet",
    "cwt_coefficient",
    "Scalegram",
    "scalegram",
    "SkeletonLines",
    "skeleton",
    "default_scales",
    "CWTScalegram",
]

WAVELETS = ("haar", "gauss2")

# half-width (in units of a) beyond which the Mexican hat tail is negligible
GAUSS2_SUPPORT = 7.0
HAAR_MIN_SCALE = 2.0


def _check_kind(kind):
    if kind not in WAVELETS:
        raise ValueError(f"unknown wavelet {kind!r}; expected one of {WAVELETS}")


def mother_wavelet(kind: str, u):
    """Evaluate the mother wavelet at ``u`` (scalar or array)."""
    _check_kind(kind)
    u = np.asarray(u, dtype=np.float64)
    if kind == "haar":
        out = np.where((u >= 0.0) & (u < 0.5), 1.0, 0.0)
        out = np.where((u >= 0.5) & (u < 1.0), -1.0, out)
    else:
        u2 = u * u
        out = (1.0 - u2) * np.exp(-0.5 * u2)
    return out[()] if out.ndim == 0 else out


def _haar_primitive(u):
    # antiderivative of the Haar wavelet, zero outside [0, 1]
    u = np.clip(u, 0.0, 1.0)
    return np.where(u <= 0.5, u, 1.0 - u)


def _check_scale(kind, a):
    if not np.isfinite(a) or a <= 0:
        raise DomainError(f"scale must be positive, got {a}")
    if kind == "haar" and a < HAAR_MIN_SCALE:
        raise DomainError(f"haar scales below {HAAR_MIN_SCALE} degenerate, got {a}")


def _kernel(kind, a, d):
    """Weights for samples at offset ``d = t - b`` from the shift ``b``."""
    if kind == "gauss2":
        return mother_wavelet("gauss2", d / a)
    return a * (_haar_primitive((d + 1.0) / a) - _haar_primitive(d / a))


def cwt_coefficient(series, kind: str, a: float, b: float) -> float:
    """``W(a, b)`` for a single scale and shift (``b`` in 1-based time)."""
    _check_kind(kind)
    _check_scale(kind, a)
    x = as_series(series).samples
    t = np.arange(1, x.shape[0] + 1, dtype=np.float64)
    if kind == "gauss2":
        w = mother_wavelet("gauss2", (t - b) / a)
    else:
        w = a * (_haar_primitive((t + 1.0 - b) / a) - _haar_primitive((t - b) / a))
    return float(np.dot(x, w) / np.sqrt(a))


def _centre_offset(kind):
    return 0.5 if kind == "haar" else 0.0


def _support(kind, a, centered):
    """Support of the wavelet relative to the column index, as ``(lo, hi)``."""
    off = _centre_offset(kind) * a if centered else 0.0
    if kind == "haar":
        # cells [t, t + 1) covering [b', b' + a)
        return -off, a - off - 1.0
    return -GAUSS2_SUPPORT * a, GAUSS2_SUPPORT * a


@dataclass(frozen=True)
class Scalegram:
    """Signed coefficients ``values[i, b - 1] = W(scales[i], b)``.

    ``boundary_mask`` flags cells whose (effective) wavelet support overhangs
    the ends of the series; they are computed regardless.
    """

    values: np.ndarray
    scales: np.ndarray
    kind: str
    boundary_mask: np.ndarray
    centered: bool = True

    @property
    def magnitude(self) -> np.ndarray:
        return np.abs(self.values)

    @property
    def n(self) -> int:
        return self.values.shape[1]


def _scalegram_row(x, kind, a, centered):
    n = x.shape[0]
    shift = _centre_offset(kind) * a if centered else 0.0
    # offsets t - b' for t - b = -(n-1)..(n-1)
    d = np.arange(-(n - 1), n, dtype=np.float64) + shift
    K = _kernel(kind, a, d)
    # out[k] = sum_j K[j + k] x[j]; column b (0-based) is k = n - 1 - b
    out = np.correlate(K, x, mode="valid")
    return out[::-1] / np.sqrt(a)


def scalegram(series, kind: str, scales, *, centered: bool = True, n_jobs=None) -> Scalegram:
    """``W(a, b)`` for every scale in ``scales`` and every ``b = 1..n``."""
    _check_kind(kind)
    scales = check_scales(scales)
    for a in scales:
        _check_scale(kind, a)
    x = as_series(series).samples
    n = x.shape[0]
    rows = ordered_map(lambda a: _scalegram_row(x, kind, float(a), centered), scales, n_jobs)
    values = np.vstack(rows)
    b = np.arange(1, n + 1, dtype=np.float64)
    mask = np.zeros(values.shape, dtype=bool)
    for i, a in enumerate(scales):
        lo, hi = _support(kind, float(a), centered)
        mask[i] = (b + lo < 1.0) | (b + hi > n)
    return Scalegram(values=values, scales=scales, kind=kind, boundary_mask=mask, centered=centered)


def default_scales(n: int) -> np.ndarray:
    """Geometric scales with ratio ``2**(1/4)`` from 2 up to ``n / 4``."""
    hi = max(n / 4.0, 2.0)
    steps = int(np.floor(np.log2(hi / 2.0) * 4 + 1e-9))
    return 2.0 * 2.0 ** (np.arange(steps + 1) / 4.0)


@dataclass(frozen=True)
class SkeletonLines:
    """Ridge lines as lists of ``(scale_index, b)`` points, ``b`` 1-based."""

    lines: list = field(default_factory=list)

    def __len__(self):
        return len(self.lines)

    def __iter__(self):
        return iter(self.lines)


def _row_maxima(row):
    inner = row[1:-1]
    hit = (inner > row[:-2]) & (inner > row[2:])
    return np.flatnonzero(hit) + 1


def skeleton(gram: Scalegram, *, drift: int = 2, floor: float = 0.05) -> SkeletonLines:
    """Chain per-scale strict maxima of ``|W|`` into lines across scales.

    A maximum at scale ``i`` extends a line ending at scale ``i - 1`` when
    their shifts differ by at most ``drift``; closest pairs are matched first
    and each line takes at most one point per scale. Unmatched maxima start
    new lines. Lines whose largest ``|W|`` is below ``floor`` times the
    matrix maximum are dropped.
    """
    mag = gram.magnitude
    if mag.shape[0] < 2:
        raise ValueError("skeleton needs at least two scales")
    finished = []
    active = []  # each line: list of (scale_index, col)
    for i, row in enumerate(mag):
        peaks = _row_maxima(row)
        pairs = sorted(
            (abs(int(p) - line[-1][1]), line[-1][1], int(p), li)
            for li, line in enumerate(active)
            for p in peaks
            if abs(int(p) - line[-1][1]) <= drift
        )
        used_lines, used_peaks = set(), set()
        next_active = []
        for _, _, p, li in pairs:
            if li in used_lines or p in used_peaks:
                continue
            used_lines.add(li)
            used_peaks.add(p)
            active[li].append((i, p))
            next_active.append(active[li])
        finished.extend(line for li, line in enumerate(active) if li not in used_lines)
        next_active.extend([(i, int(p))] for p in peaks if int(p) not in used_peaks)
        active = next_active
    finished.extend(active)

    top = float(mag.max()) if mag.size else 0.0
    kept = [
        [(s, c + 1) for s, c in line]
        for line in finished
        if max(mag[s, c] for s, c in line) >= floor * top
    ]
    kept.sort(key=lambda line: (line[0][0], line[0][1]))
    return SkeletonLines(lines=kept)


class CWTScalegram(TransformerMixin, BaseEstimator):
    """Estimator wrapper around :func:`scalegram`.

    ``transform`` returns the signed coefficient matrix of shape
    ``(n_scales, n)``; ``fit`` also stores the :class:`Scalegram` in
    ``scalegram_`` and its ridge lines in ``skeleton_``.
    """

    def __init__(self, wavelet="gauss2", scales=None, centered=True, drift=2, floor=0.05, n_jobs=None):
        self.wavelet = wavelet
        self.scales = scales
        self.centered = centered
        self.drift = drift
        self.floor = floor
        self.n_jobs = n_jobs

    def _compute(self, X):
        ts = as_series(X)
        scales = default_scales(ts.n) if self.scales is None else self.scales
        return scalegram(ts, self.wavelet, scales, centered=self.centered, n_jobs=self.n_jobs)

    def fit(self, X, y=None):
        self.scalegram_ = self._compute(X)
        self.skeleton_ = skeleton(self.scalegram_, drift=self.drift, floor=self.floor)
        self.n_features_in_ = self.scalegram_.n
        return self

    def transform(self, X):
        return self._compute(X).values
