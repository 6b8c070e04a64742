"""Command-line driver: ``deltal {deltal,dfa,cwt,gen} ...``.

Exit status is 0 on success, 2 for usage errors (bad flags, invalid ranges)
and 1 for data errors. Outputs are written only after every computation has
succeeded, each through a temporary file renamed into place.
"""

from __future__ import annotations

import argparse
import io
import os
import sys
import tempfile

import numpy as np

from .cwt import WAVELETS, scalegram, skeleton
from .delta import EVEN_SHIFTS, delta_matrix
from .dfa import GRID_RATIO, dfa_spectrum, geometric_grid
from .exceptions import DeltaLError
from .io_render import (
    normalize_to_gray,
    read_series_csv,
    write_matrix_csv,
    write_pgm,
    write_skeleton_csv,
    write_spectrum_csv,
)
from .signals import KINDS, GeneratorSpec, generate


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # one-line diagnostic instead of usage + message
        self.exit(2, f"{self.prog}: error: {message}\n")


def parse_grid(text: str, *, integer: bool = False) -> np.ndarray:
    """Parse ``lo:hi:geometric|linear[:count]``.

    Without a count, geometric grids step by a factor ``2**(1/4)`` and linear
    grids by 1. Integer grids are rounded and deduplicated.
    """
    parts = text.split(":")
    if len(parts) not in (3, 4) or parts[2] not in ("geometric", "linear"):
        raise UsageError(f"bad grid {text!r}; expected lo:hi:geometric|linear[:count]")
    try:
        lo, hi = float(parts[0]), float(parts[1])
        count = int(parts[3]) if len(parts) == 4 else None
    except ValueError:
        raise UsageError(f"bad grid {text!r}") from None
    if not (0 < lo <= hi) or (count is not None and count < 1):
        raise UsageError(f"bad grid bounds in {text!r}")
    if integer and parts[2] == "geometric":
        return geometric_grid(int(round(lo)), int(round(hi)), count=count)
    if parts[2] == "geometric":
        if count is None:
            steps = int(np.floor(np.log(hi / lo) / np.log(GRID_RATIO) + 1e-9))
            grid = lo * GRID_RATIO ** np.arange(steps + 1)
        else:
            grid = np.geomspace(lo, hi, count)
    else:
        grid = np.arange(lo, hi + 1e-9, 1.0) if count is None else np.linspace(lo, hi, count)
    if integer:
        grid = np.unique(np.rint(grid).astype(np.int64))
    return grid


def _add_generator_args(p):
    p.add_argument("--n", type=int, default=366, help="series length (default 366)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--period", type=float, default=14.0)
    p.add_argument("--amplitude", type=float, default=1.0)
    p.add_argument("--position", type=int, default=None, help="1-based impulse/step position")
    p.add_argument("--height", type=float, default=1.0)
    p.add_argument("--noise-std", type=float, default=0.1)


def _add_input_args(p):
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", help="series CSV path, or '-' for standard input")
    src.add_argument("--gen-kind", choices=KINDS, help="analyse a generated series instead")
    _add_generator_args(p)
    p.add_argument("--threads", type=int, default=1, help="worker threads (output does not depend on it)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="deltal",
        description="Deviation-from-local-linear-fit diagrams, DFA and CWT scalegrams.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("deltal", help="relief matrix of |deviation| over (t, L)")
    _add_input_args(p)
    p.add_argument("--lmin", type=int, default=2)
    p.add_argument("--lmax", type=int, default=None, help="default: n // 3")
    p.add_argument("--even-shift", choices=EVEN_SHIFTS, default="left",
                   help="side the even-length window extends further to (default left)")
    p.add_argument("--image", help="output PGM path")
    p.add_argument("--matrix", help="output matrix CSV path")

    p = sub.add_parser("dfa", help="fluctuation function and scaling exponent")
    _add_input_args(p)
    p.add_argument("--l-grid", default=None,
                   help="window lengths lo:hi:geometric|linear[:count]; default 4:n/4:geometric")
    p.add_argument("--fit-lo", type=int, default=None)
    p.add_argument("--fit-hi", type=int, default=None)
    p.add_argument("--spectrum", help="output spectrum CSV path")

    p = sub.add_parser("cwt", help="wavelet scalegram and its skeleton")
    _add_input_args(p)
    p.add_argument("--wavelet", choices=WAVELETS, default="gauss2")
    p.add_argument("--scales", default="2:128:geometric",
                   help="lo:hi:geometric|linear[:count] (default 2:128:geometric)")
    p.add_argument("--drift", type=int, default=2, help="max shift change per scale step in a ridge")
    p.add_argument("--floor", type=float, default=0.05, help="drop ridges below this fraction of max |W|")
    p.add_argument("--image", help="output PGM path")
    p.add_argument("--matrix", help="output coefficient CSV path")
    p.add_argument("--skeleton", help="output ridge-line CSV path")

    p = sub.add_parser("gen", help="write a synthetic series as CSV")
    p.add_argument("--kind", choices=KINDS, required=True)
    _add_generator_args(p)
    p.add_argument("--out", required=True, help="output path, or '-' for standard output")
    return parser


def _spec_from_args(args, kind) -> GeneratorSpec:
    return GeneratorSpec(
        kind=kind, n=args.n, seed=args.seed, period=args.period, amplitude=args.amplitude,
        position=args.position, height=args.height, noise_std=args.noise_std,
    )


def _load_series(args):
    if args.gen_kind is not None:
        return generate(_spec_from_args(args, args.gen_kind))
    if args.input == "-":
        return read_series_csv(sys.stdin.buffer)
    try:
        with open(args.input, "rb") as fh:
            return read_series_csv(fh)
    except OSError as exc:
        raise UsageError(f"cannot read input {args.input!r}: {exc.strerror}") from None


def _check_outputs(*paths):
    given = [os.path.abspath(p) for p in paths if p and p != "-"]
    if len(given) != len(set(given)):
        raise UsageError("output paths must be distinct")


def _render(fn, obj) -> bytes:
    buf = io.BytesIO()
    fn(obj, buf)
    return buf.getvalue()


def _commit(outputs: dict) -> None:
    """Write every output to a temp file first, then rename them all."""
    staged = []
    try:
        for path, data in outputs.items():
            if path == "-":
                continue
            fd, tmp = tempfile.mkstemp(dir=os.path.dirname(os.path.abspath(path)), prefix=".deltal-")
            staged.append((tmp, path))
            with os.fdopen(fd, "wb") as fh:
                fh.write(data)
        for tmp, path in staged:
            os.replace(tmp, path)
    finally:
        for tmp, _ in staged:
            if os.path.exists(tmp):
                os.unlink(tmp)
    if "-" in outputs:
        sys.stdout.buffer.write(outputs["-"])
        sys.stdout.flush()


def _run_deltal(args):
    _check_outputs(args.image, args.matrix)
    if args.lmin < 2:
        raise UsageError(f"--lmin must be at least 2, got {args.lmin}")
    if args.lmax is not None and args.lmin > args.lmax:
        raise UsageError(f"--lmin {args.lmin} exceeds --lmax {args.lmax}")
    series = _load_series(args)
    lmax = args.lmax if args.lmax is not None else max(series.n // 3, args.lmin)
    if lmax > series.n:
        raise UsageError(f"--lmax {lmax} exceeds series length {series.n}")
    m = delta_matrix(series, args.lmin, lmax, even_shift=args.even_shift, n_jobs=args.threads)
    outputs = {}
    if args.image:
        outputs[args.image] = _render(write_pgm, normalize_to_gray(m))
    if args.matrix:
        outputs[args.matrix] = _render(write_matrix_csv, m)
    _commit(outputs)
    print(f"n={series.n} L={args.lmin}..{lmax} defined_cells={int(m.defined_mask.sum())}")


def _run_dfa(args):
    _check_outputs(args.spectrum)
    series = _load_series(args)
    n = series.n
    l_values = None
    if args.l_grid is not None:
        l_values = parse_grid(args.l_grid, integer=True)
        bad = [int(L) for L in l_values if L < 3 or L > n // 2]
        if bad:
            raise UsageError(f"window length L={bad[0]} outside [3, {n // 2}]")
    spectrum = dfa_spectrum(series, l_values, n_jobs=args.threads)
    lo = args.fit_lo if args.fit_lo is not None else int(spectrum.l_values[0])
    hi = args.fit_hi if args.fit_hi is not None else int(spectrum.l_values[-1])
    if lo > hi:
        raise UsageError(f"--fit-lo {lo} exceeds --fit-hi {hi}")
    spectrum = spectrum.with_fit((lo, hi))
    outputs = {}
    if args.spectrum:
        outputs[args.spectrum] = _render(write_spectrum_csv, spectrum)
    _commit(outputs)
    print(f"alpha={spectrum.alpha!r} r_squared={spectrum.r_squared!r} fit_lo={lo} fit_hi={hi}")


def _run_cwt(args):
    _check_outputs(args.image, args.matrix, args.skeleton)
    scales = parse_grid(args.scales)
    if args.drift < 0 or not 0 <= args.floor <= 1:
        raise UsageError("--drift must be >= 0 and --floor within [0, 1]")
    series = _load_series(args)
    gram = scalegram(series, args.wavelet, scales, n_jobs=args.threads)
    outputs = {}
    if args.image:
        outputs[args.image] = _render(write_pgm, normalize_to_gray(gram))
    if args.matrix:
        outputs[args.matrix] = _render(write_matrix_csv, gram)
    n_lines = None
    if args.skeleton:
        lines = skeleton(gram, drift=args.drift, floor=args.floor)
        n_lines = len(lines)
        outputs[args.skeleton] = _render(lambda ls, buf: write_skeleton_csv(ls, gram, buf), lines)
    _commit(outputs)
    summary = f"n={series.n} scales={len(gram.scales)} wavelet={args.wavelet}"
    if n_lines is not None:
        summary += f" ridges={n_lines}"
    print(summary)


def _run_gen(args):
    series = generate(_spec_from_args(args, args.kind))
    text = "".join(f"{v!r}\n" for v in series.samples.tolist())
    _commit({args.out: text.encode("ascii")})


COMMANDS = {"deltal": _run_deltal, "dfa": _run_dfa, "cwt": _run_cwt, "gen": _run_gen}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"deltal {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except (DeltaLError, OSError) as exc:
        print(f"deltal {args.command}: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
