"""CSV ingestion, matrix export and grayscale PGM rendering."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .core import TimeSeries
from .cwt import Scalegram
from .delta import DeltaMatrix
from .exceptions import EmptyInputError, EmptyMatrixError, NonFiniteError, ParseError

__all__ = [
    "ReliefImage",
    "read_series_csv",
    "normalize_to_gray",
    "write_pgm",
    "read_pgm",
    "write_matrix_csv",
    "read_matrix_csv",
    "write_spectrum_csv",
    "write_skeleton_csv",
]


def _read_text(source) -> str:
    if isinstance(source, (bytes, bytearray)):
        data = bytes(source)
    elif isinstance(source, str):
        return source
    else:
        data = source.read()
        if isinstance(data, str):
            return data
    try:
        return data.decode("utf-8-sig")
    except UnicodeDecodeError as exc:
        raise ParseError(f"input is not valid UTF-8: {exc}") from None


def _emit(sink, text: str):
    if isinstance(sink, io.TextIOBase):
        sink.write(text)
    else:
        sink.write(text.encode("utf-8"))


def read_series_csv(source) -> TimeSeries:
    """Parse one value per line, taking the last comma-separated field.

    A first row whose value field is not a number is treated as a header.
    Blank lines are ignored.

    Raises
    ------
    EmptyInputError
        No data rows.
    ParseError
        A data row's value is not numeric (message carries the line number).
    NonFiniteError
        A value parses as NaN or infinity.
    """
    text = _read_text(source)
    values = []
    first = True
    for lineno, row in enumerate(csv.reader(io.StringIO(text)), start=1):
        if not row or all(not field.strip() for field in row):
            continue
        token = row[-1].strip()
        try:
            v = float(token)
        except ValueError:
            if first:
                first = False
                continue
            raise ParseError(f"non-numeric value {token!r}", line=lineno) from None
        first = False
        if not math.isfinite(v):
            raise NonFiniteError(f"line {lineno}: non-finite value {token!r}")
        values.append(v)
    if not values:
        raise EmptyInputError("no data rows in input")
    return TimeSeries(np.asarray(values))


@dataclass(frozen=True)
class ReliefImage:
    """8-bit grayscale image; ``pixels[0]`` is the bottom row (smallest L or scale)."""

    pixels: np.ndarray

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]


def _values_and_mask(matrix):
    if isinstance(matrix, DeltaMatrix):
        return matrix.values, matrix.defined_mask
    if isinstance(matrix, Scalegram):
        mag = matrix.magnitude
        return mag, np.ones(mag.shape, dtype=bool)
    values = np.asarray(matrix, dtype=np.float64)
    if values.ndim != 2:
        raise ValueError("matrix must be two-dimensional")
    return values, np.isfinite(values)


def normalize_to_gray(matrix, mask=None) -> ReliefImage:
    """Min-max map defined cells linearly onto 0..255, rounding half up.

    Undefined cells are black. A constant set of defined cells maps to 128.
    Accepts a :class:`DeltaMatrix`, a :class:`Scalegram` (rendered as
    ``|W|``) or a 2-D array in which ``NaN`` marks undefined cells.
    """
    values, defined = _values_and_mask(matrix)
    if mask is not None:
        defined = defined & np.asarray(mask, dtype=bool)
    if not defined.any():
        raise EmptyMatrixError("matrix has no defined cells")
    v = values[defined]
    lo, hi = float(v.min()), float(v.max())
    pixels = np.zeros(values.shape, dtype=np.uint8)
    if hi == lo:
        pixels[defined] = 128
    else:
        scaled = np.floor(255.0 * (v - lo) / (hi - lo) + 0.5)
        pixels[defined] = np.clip(scaled, 0, 255).astype(np.uint8)
    return ReliefImage(pixels=pixels)


def write_pgm(image: ReliefImage, sink) -> None:
    """Binary PGM (``P5``), top row first, so the largest L comes first."""
    header = f"P5\n{image.width} {image.height} 255\n".encode("ascii")
    sink.write(header + np.ascontiguousarray(image.pixels[::-1]).tobytes())


def read_pgm(source) -> ReliefImage:
    data = source if isinstance(source, (bytes, bytearray)) else source.read()
    parts = data.split(b"\n", 2)
    if len(parts) != 3 or parts[0] != b"P5":
        raise ParseError("not a binary PGM")
    width, height, maxval = (int(f) for f in parts[1].split())
    if maxval != 255:
        raise ParseError(f"unsupported maxval {maxval}")
    raw = np.frombuffer(parts[2], dtype=np.uint8)
    if raw.size != width * height:
        raise ParseError("pixel data size does not match header")
    return ReliefImage(pixels=raw.reshape(height, width)[::-1].copy())


def _fmt(v: float) -> str:
    return repr(float(v))


def write_matrix_csv(matrix, sink) -> None:
    """One row per time index, one column per window length or scale.

    Undefined cells are empty fields; values use shortest round-trip repr.
    Scalegrams are written as signed coefficients.
    """
    if isinstance(matrix, DeltaMatrix):
        labels = [str(int(L)) for L in matrix.l_values]
        values, defined = matrix.values, matrix.defined_mask
    elif isinstance(matrix, Scalegram):
        labels = [_fmt(a) for a in matrix.scales]
        values, defined = matrix.values, np.ones(matrix.values.shape, dtype=bool)
    else:
        raise TypeError(f"cannot export {type(matrix).__name__}")
    lines = ["t," + ",".join(labels)]
    for t in range(values.shape[1]):
        cells = (_fmt(values[i, t]) if defined[i, t] else "" for i in range(values.shape[0]))
        lines.append(f"{t + 1}," + ",".join(cells))
    _emit(sink, "\n".join(lines) + "\n")


def read_matrix_csv(source):
    """Inverse of :func:`write_matrix_csv`.

    Returns ``(labels, values, defined_mask)`` with ``values`` shaped
    ``(n_columns, n_times)`` like the in-memory matrices.
    """
    rows = list(csv.reader(io.StringIO(_read_text(source))))
    if not rows or rows[0][0] != "t":
        raise ParseError("missing 't' header", line=1)
    labels = np.array([float(v) for v in rows[0][1:]])
    body = rows[1:]
    values = np.full((len(labels), len(body)), np.nan)
    for j, row in enumerate(body):
        for i, cell in enumerate(row[1:]):
            if cell != "":
                values[i, j] = float(cell)
    return labels, values, ~np.isnan(values)


def write_spectrum_csv(spectrum, sink) -> None:
    lines = ["L,F"]
    lines += [f"{L},{_fmt(F)}" for L, F in spectrum.points]
    if spectrum.alpha is not None:
        lo, hi = spectrum.fit_range
        lines.append(
            f"# alpha={_fmt(spectrum.alpha)},r_squared={_fmt(spectrum.r_squared)},"
            f"fit_lo={lo},fit_hi={hi}"
        )
    _emit(sink, "\n".join(lines) + "\n")


def write_skeleton_csv(lines, gram: Scalegram, sink) -> None:
    out = ["line,scale_index,scale,b,value"]
    for k, line in enumerate(lines):
        for s, b in line:
            out.append(f"{k},{s},{_fmt(gram.scales[s])},{b},{_fmt(gram.values[s, b - 1])}")
    _emit(sink, "\n".join(out) + "\n")
