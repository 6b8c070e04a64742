"""Deterministic synthetic series.

Stochastic kinds draw from SplitMix64 (Steele, Lea & Flood 2014) run in
counter mode: output ``i`` (0-based) is ``mix(seed + (i + 1) * 0x9E3779B97F4A7C15)``
modulo ``2**64``, which equals the i-th output of the usual sequential
generator. Consecutive output pairs ``(z1, z2)`` become standard normals by
Box-Muller::

    u1 = ((z1 >> 11) + 1) * 2**-53          # (0, 1]
    u2 = (z2 >> 11) * 2**-53                # [0, 1)
    r = sqrt(-2 log u1)
    n_{2k}, n_{2k+1} = r cos(2 pi u2), r sin(2 pi u2)

so a given ``(n, seed)`` yields the same integers on every platform.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import TimeSeries
from .exceptions import SpecError

__all__ = ["KINDS", "GeneratorSpec", "splitmix64", "standard_normal", "generate"]

KINDS = ("sinusoid", "white_noise", "random_walk", "impulse", "step", "composite")

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)


def splitmix64(seed: int, count: int) -> np.ndarray:
    """First ``count`` SplitMix64 outputs for ``seed`` as ``uint64``."""
    seed = np.uint64(int(seed) % 2**64)
    i = np.arange(1, count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = seed + i * _GOLDEN
        z = (z ^ (z >> np.uint64(30))) * _M1
        z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


def standard_normal(seed: int, n: int) -> np.ndarray:
    pairs = (n + 1) // 2
    z = splitmix64(seed, 2 * pairs)
    scale = 2.0 ** -53
    u1 = ((z[0::2] >> np.uint64(11)).astype(np.float64) + 1.0) * scale
    u2 = (z[1::2] >> np.uint64(11)).astype(np.float64) * scale
    r = np.sqrt(-2.0 * np.log(u1))
    out = np.empty(2 * pairs)
    out[0::2] = r * np.cos(2.0 * math.pi * u2)
    out[1::2] = r * np.sin(2.0 * math.pi * u2)
    return out[:n]


@dataclass(frozen=True)
class GeneratorSpec:
    """Parameters for :func:`generate`.

    ``position`` is a 1-based time index (default: middle of the series).
    ``composite`` is a sinusoid plus ``noise_std`` times white noise plus an
    impulse of ``height`` at ``position``.
    """

    kind: str = "sinusoid"
    n: int = 366
    seed: int = 0
    period: float = 14.0
    amplitude: float = 1.0
    position: int | None = None
    height: float = 1.0
    noise_std: float = 0.1

    def __post_init__(self):
        if self.kind not in KINDS:
            raise SpecError(f"unknown kind {self.kind!r}; expected one of {KINDS}")
        if int(self.n) != self.n or self.n < 1:
            raise SpecError(f"n must be a positive integer, got {self.n}")
        if self.seed < 0 or self.seed >= 2**64:
            raise SpecError("seed must be an unsigned 64-bit integer")
        if not math.isfinite(self.period) or self.period <= 0:
            raise SpecError(f"period must be positive, got {self.period}")
        if self.position is not None and not 1 <= self.position <= self.n:
            raise SpecError(f"position {self.position} outside [1, {self.n}]")
        if self.noise_std < 0:
            raise SpecError("noise_std must be non-negative")

    @property
    def resolved_position(self) -> int:
        return self.n // 2 + 1 if self.position is None else int(self.position)


def _sinusoid(spec):
    i = np.arange(1, spec.n + 1, dtype=np.float64)
    # sin(i * pi / (period / 2)) reproduces sin(i * pi / 7) exactly for period 14
    return spec.amplitude * np.sin(i * math.pi / (spec.period / 2.0))


def generate(spec: GeneratorSpec) -> TimeSeries:
    n = int(spec.n)
    kind = spec.kind
    if kind == "sinusoid":
        x = _sinusoid(spec)
    elif kind == "white_noise":
        x = standard_normal(spec.seed, n)
    elif kind == "random_walk":
        x = np.cumsum(standard_normal(spec.seed, n))
    elif kind == "impulse":
        x = np.zeros(n)
        x[spec.resolved_position - 1] = spec.height
    elif kind == "step":
        x = np.zeros(n)
        x[spec.resolved_position - 1 :] = spec.height
    else:
        x = _sinusoid(spec) + spec.noise_std * standard_normal(spec.seed, n)
        x[spec.resolved_position - 1] += spec.height
    return TimeSeries(x)
