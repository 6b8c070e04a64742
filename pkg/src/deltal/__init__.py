"""Deviation-from-local-linear-fit relief diagrams for time series.

The package computes, for every time point and window length, the absolute
deviation of the accumulated mean-centred series from a least-squares line
fitted over a window centred on that point. Classical detrended fluctuation
analysis and a continuous-wavelet scalegram are included for comparison.
"""

from .core import LinearFit, Profile, TimeSeries, build_profile, least_squares_fit, series_mean
from .cwt import CWTScalegram, Scalegram, SkeletonLines, cwt_coefficient, mother_wavelet, scalegram, skeleton
from .delta import DeltaLTransformer, DeltaMatrix, centered_window, delta_at, delta_matrix
from .dfa import DFA, FluctuationSpectrum, dfa_spectrum, fit_alpha, fluctuation, window_rms
from .exceptions import DeltaLError
from .io_render import ReliefImage, normalize_to_gray, read_series_csv, write_matrix_csv, write_pgm
from .signals import GeneratorSpec, generate

__version__ = "0.1.0"

__all__ = [
    "TimeSeries", "Profile", "LinearFit", "series_mean", "build_profile", "least_squares_fit",
    "FluctuationSpectrum", "window_rms", "fluctuation", "dfa_spectrum", "fit_alpha", "DFA",
    "DeltaMatrix", "centered_window", "delta_at", "delta_matrix", "DeltaLTransformer",
    "Scalegram", "SkeletonLines", "mother_wavelet", "cwt_coefficient", "scalegram", "skeleton",
    "CWTScalegram", "GeneratorSpec", "generate", "ReliefImage", "read_series_csv",
    "normalize_to_gray", "write_pgm", "write_matrix_csv", "DeltaLError",
]
