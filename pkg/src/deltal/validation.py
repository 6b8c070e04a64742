"""Input validation helpers shared by the estimators and the CLI."""

from __future__ import annotations

import numbers

import numpy as np

from .exceptions import BoundsError, EmptyInputError, NonFiniteError


def check_series(x, *, name="series"):
    """Coerce ``x`` to a 1-D float64 array of finite values.

    Column vectors of shape ``(n, 1)`` are flattened so that the estimators
    accept the usual ``X`` layout as well as plain sequences.
    """
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim == 2 and arr.shape[1] == 1:
        arr = arr[:, 0]
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if arr.size == 0:
        raise EmptyInputError(f"{name} is empty")
    bad = ~np.isfinite(arr)
    if bad.any():
        idx = int(np.flatnonzero(bad)[0]) + 1
        raise NonFiniteError(f"{name} contains a non-finite value at t={idx}")
    return arr


def check_int(value, name, *, minimum=None, maximum=None):
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise TypeError(f"{name} must be an integer, got {value!r}")
    value = int(value)
    if minimum is not None and value < minimum:
        raise BoundsError(f"{name}={value} is below the minimum {minimum}")
    if maximum is not None and value > maximum:
        raise BoundsError(f"{name}={value} exceeds the maximum {maximum}")
    return value


def check_window_range(l_min, l_max, n):
    """Validate an inclusive window-length range against series length ``n``."""
    l_min = check_int(l_min, "l_min", minimum=2)
    l_max = check_int(l_max, "l_max", maximum=n)
    if l_min > l_max:
        raise BoundsError(f"l_min={l_min} exceeds l_max={l_max}")
    return l_min, l_max


def check_scales(scales):
    arr = np.asarray(scales, dtype=np.float64).ravel()
    if arr.size == 0:
        raise BoundsError("scale list is empty")
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0):
        raise BoundsError("scales must be finite and positive")
    if np.any(np.diff(arr) <= 0):
        raise BoundsError("scales must be strictly increasing")
    return arr
