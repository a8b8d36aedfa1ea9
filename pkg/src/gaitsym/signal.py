"""Numeric kernels: speeds, DFT, fractional shift, convolution, ACF, Pearson.

All functions take and return plain numpy arrays (or the small
dataclasses below) and keep no state.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateSignalError,
    InvalidInputError,
    InvalidParameterError,
    InvalidSpectrumError,
    NoPeriodicityError,
    PreconditionError,
)
from .ingest import JointId, JointTrajectory

SYMMETRY_RTOL = 1e-9
IMAG_RESIDUE_ATOL = 1e-6

# Inputs at or above this length go through the FFT in linear_convolution.
FFT_CONVOLUTION_MIN_LENGTH = 64


class SpeedMode(str, enum.Enum):
    """How per-frame displacement (dx, dy) is reduced to a scalar speed."""

    SIGNED_SUM = "signed-sum"  # dx + dy
    ABS_SUM = "abs-sum"  # |dx| + |dy|
    EUCLIDEAN = "euclidean"
    HORIZONTAL = "horizontal"
    VERTICAL = "vertical"

    def __str__(self):
        return self.value


@dataclass(frozen=True, eq=False)
class SpeedSeries:
    values: np.ndarray
    mode: SpeedMode
    source: JointId

    def __len__(self):
        return len(self.values)

    def __array__(self, dtype=None, copy=None):
        return self.values if dtype is None else self.values.astype(dtype)


@dataclass(frozen=True, eq=False)
class SpectrumCoefficients:
    coefficients: np.ndarray
    original_length: int

    def __post_init__(self):
        if len(self.coefficients) != self.original_length:
            raise InvalidSpectrumError(
                f"{len(self.coefficients)} coefficients for a length-{self.original_length} signal"
            )


@dataclass(frozen=True)
class CycleEstimate:
    period_frames: int
    peak_acf: float
    search_range: tuple[int, int]


def _as_series(values, name="series") -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1:
        raise InvalidInputError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if not np.isfinite(arr).all():
        raise InvalidInputError(f"{name} contains non-finite values")
    return arr


# ── Speed ──────────────────────────────────────────────────────────


def speed_series(traj: JointTrajectory, mode: SpeedMode = SpeedMode.ABS_SUM) -> SpeedSeries:
    """Per-frame speed of one joint (pixels/frame), length M - 1."""
    mode = SpeedMode(mode)
    if not traj.repaired and traj.gap_mask.any():
        raise PreconditionError(f"{traj.joint}: trajectory has unrepaired gaps; run interpolate_gaps first")
    if not (np.isfinite(traj.x).all() and np.isfinite(traj.y).all()):
        raise PreconditionError(f"{traj.joint}: trajectory contains non-finite coordinates")
    dx = np.diff(traj.x)
    dy = np.diff(traj.y)
    if mode is SpeedMode.SIGNED_SUM:
        v = dx + dy
    elif mode is SpeedMode.ABS_SUM:
        v = np.abs(dx) + np.abs(dy)
    elif mode is SpeedMode.EUCLIDEAN:
        v = np.hypot(dx, dy)
    elif mode is SpeedMode.HORIZONTAL:
        v = dx
    else:
        v = dy
    v.setflags(write=False)
    return SpeedSeries(v, mode, traj.joint)


# ── Fourier ────────────────────────────────────────────────────────


def dft(series) -> SpectrumCoefficients:
    """X(k) = sum_n x(n) exp(-2j pi k n / M), k = 0..M-1."""
    x = _as_series(series)
    if x.size == 0:
        raise InvalidInputError("cannot transform an empty series")
    return SpectrumCoefficients(np.fft.fft(x), x.size)


def idft(spec: SpectrumCoefficients) -> np.ndarray:
    """Inverse of :func:`dft` for spectra of real signals."""
    X = np.asarray(spec.coefficients, dtype=complex)
    M = spec.original_length
    mirrored = np.conj(X[(-np.arange(M)) % M])
    scale = max(1.0, float(np.max(np.abs(X))))
    if np.max(np.abs(X - mirrored)) > SYMMETRY_RTOL * scale:
        raise InvalidSpectrumError("spectrum is not conjugate-symmetric; it does not describe a real signal")
    x = np.fft.ifft(X)
    residue = float(np.max(np.abs(x.imag)))
    if residue > IMAG_RESIDUE_ATOL:
        raise InvalidSpectrumError(f"inverse transform has imaginary residue {residue:.3g}")
    return x.real.copy()


def _shift_factors(M: int, d: float) -> np.ndarray:
    k = np.arange(M)
    signed_k = np.where(k <= M // 2, k, k - M)
    factors = np.exp(-2j * np.pi * signed_k * d / M)
    if M % 2 == 0:
        # Nyquist bin: the real part is all that survives sampling
        factors[M // 2] = np.cos(np.pi * d)
    return factors


def fractional_circular_shift(series, shift_frames: float) -> np.ndarray:
    """Delay a series by a possibly fractional number of samples, circularly.

    Positive ``shift_frames`` moves content to higher indices. Each
    coefficient is multiplied by exp(-2j pi k d / M) using the signed
    frequency index, so the result stays real. A shift of M/4 multiplies
    every coefficient by (-j)**k.

    For even M the Nyquist component cannot be delayed by a fraction of a
    sample and is scaled by cos(pi d), so fractional shifts are only
    exactly invertible for series without Nyquist content.
    """
    x = _as_series(series)
    if x.size < 2:
        raise InvalidInputError(f"shift needs at least 2 samples, got {x.size}")
    spec = dft(x)
    shifted = SpectrumCoefficients(spec.coefficients * _shift_factors(x.size, float(shift_frames)), x.size)
    return idft(shifted)


# ── Convolution ────────────────────────────────────────────────────


def _direct_convolution(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.convolve(a, b, mode="full")


def _fft_convolution(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    n = a.size + b.size - 1
    nfft = 1 << (n - 1).bit_length()
    return np.fft.irfft(np.fft.rfft(a, nfft) * np.fft.rfft(b, nfft), nfft)[:n]


def linear_convolution(a, b, method: str = "auto") -> np.ndarray:
    """Full linear convolution of two equal-length series (length 2N - 1).

    ``method`` is ``"direct"``, ``"fft"`` or ``"auto"`` (FFT from
    ``FFT_CONVOLUTION_MIN_LENGTH`` samples on).
    """
    a = _as_series(a, "a")
    b = _as_series(b, "b")
    if a.size != b.size:
        raise InvalidInputError(f"convolution operands differ in length ({a.size} vs {b.size})")
    if a.size == 0:
        raise InvalidInputError("cannot convolve empty series")
    if method == "auto":
        method = "fft" if a.size >= FFT_CONVOLUTION_MIN_LENGTH else "direct"
    if method == "direct":
        return _direct_convolution(a, b)
    if method == "fft":
        return _fft_convolution(a, b)
    raise InvalidParameterError(f"unknown convolution method {method!r}")


# ── Periodicity ────────────────────────────────────────────────────


def autocorrelation(series) -> np.ndarray:
    """Biased autocorrelation normalized at lag 0, for lags 0..M-1."""
    x = _as_series(series)
    if x.size < 4:
        raise InvalidInputError(f"autocorrelation needs at least 4 samples, got {x.size}")
    d = x - x.mean()
    energy = float(d @ d)
    if energy <= 1e-12 * max(1.0, float(np.abs(x).max()) ** 2) * x.size:
        raise DegenerateSignalError("series has zero variance; autocorrelation undefined")
    M = x.size
    if M >= FFT_CONVOLUTION_MIN_LENGTH:
        nfft = 1 << (2 * M - 1).bit_length()
        F = np.fft.rfft(d, nfft)
        r = np.fft.irfft(F * np.conj(F), nfft)[:M]
    else:
        r = np.correlate(d, d, mode="full")[M - 1 :]
    r = r / energy
    r[0] = 1.0
    return r


def _mean_squared_difference(x: np.ndarray, lag: int) -> float:
    diff = x[lag:] - x[:-lag]
    return float(diff @ diff) / diff.size


def estimate_cycle(
    series,
    min_lag: int = 15,
    max_lag: int | None = None,
    min_peak: float = 0.2,
    refine_radius: int = 2,
) -> CycleEstimate:
    """Cycle length (frames) from the autocorrelation peak.

    The strongest local maximum of the autocorrelation in
    ``[min_lag, max_lag]`` picks the cycle; ties go to the shorter lag. The
    biased estimator's triangular taper pulls that peak toward shorter lags
    (by up to a frame for long cycles in short records), so the lag is then
    refined within ``refine_radius`` frames by minimising the mean squared
    difference between the series and its lagged copy, which vanishes
    exactly at the period of a periodic signal.
    """
    x = _as_series(series)
    M = x.size
    if max_lag is None:
        max_lag = M // 2
    if not (1 <= min_lag < max_lag):
        raise InvalidParameterError(f"need 1 <= min_lag < max_lag, got {min_lag}, {max_lag}")
    if max_lag >= M:
        raise InvalidParameterError(f"max_lag {max_lag} must be shorter than the series ({M})")
    r = autocorrelation(x)

    lags = np.arange(min_lag, max_lag + 1)
    left = r[lags - 1]
    right = r[np.minimum(lags + 1, M - 1)]
    is_peak = (r[lags] >= left) & (r[lags] >= right) & (r[lags] >= min_peak)
    if not is_peak.any():
        raise NoPeriodicityError(
            f"no autocorrelation peak >= {min_peak} between lags {min_lag} and {max_lag}"
        )
    candidates = lags[is_peak]
    coarse = int(candidates[np.argmax(r[candidates])])  # argmax takes the first, i.e. shortest, tie

    lo = max(min_lag, coarse - refine_radius)
    hi = min(max_lag, coarse + refine_radius)
    period = min(range(lo, hi + 1), key=lambda k: (_mean_squared_difference(x, k), k))
    return CycleEstimate(int(period), float(r[period]), (int(min_lag), int(max_lag)))


# ── Correlation ────────────────────────────────────────────────────


def pearson(x, y) -> float:
    """Correlation coefficient with population (1/M) moments."""
    x = _as_series(x, "x")
    y = _as_series(y, "y")
    if x.size != y.size:
        raise InvalidInputError(f"pearson operands differ in length ({x.size} vs {y.size})")
    if x.size < 2:
        raise InvalidInputError("pearson needs at least 2 samples")
    dx = x - x.mean()
    dy = y - y.mean()
    sx = np.sqrt(np.mean(dx * dx))
    sy = np.sqrt(np.mean(dy * dy))
    tiny = 1e-12
    if sx <= tiny * max(1.0, float(np.abs(x).max())) or sy <= tiny * max(1.0, float(np.abs(y).max())):
        raise DegenerateSignalError("pearson undefined for a constant series")
    rho = float(np.mean(dx * dy) / (sx * sy))
    return min(1.0, max(-1.0, rho))
