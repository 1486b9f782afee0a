"""Oscillation frequency, synchronization, and non-reciprocity metrics."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.signal import hilbert

from .errors import AnalysisError

MIN_SAMPLES = 64
DEFAULT_EPS_OSC = 1e-3


@dataclass(frozen=True)
class SpectralResult:
    frequency: float        # cycles per unit time
    amplitude: float        # half peak-to-peak of the detrended series
    is_oscillatory: bool
    window: tuple[float, float]


@dataclass(frozen=True)
class SyncMetrics:
    order_parameter: float
    locked_fraction: float
    ensemble_frequency: SpectralResult


@dataclass(frozen=True)
class ContrastResult:
    """Non-reciprocity contrast; eta is None when both frequencies vanish."""

    f_cou: float
    f_co: float
    eta: float | None


def _detrend(y: np.ndarray, t: np.ndarray) -> np.ndarray:
    slope, intercept = np.polyfit(t, y, 1)
    return y - (slope * t + intercept)


def dominant_frequency(series, dt: float, t_min: float | None = None,
                       eps_osc: float = DEFAULT_EPS_OSC) -> SpectralResult:
    """Dominant non-DC frequency of a uniformly sampled real series.

    The series after the transient cutoff is linearly detrended, Hann
    windowed, and Fourier transformed; the largest non-DC magnitude peak
    is refined by parabolic interpolation of the log magnitudes over the
    three neighboring bins.  A series whose half peak-to-peak amplitude
    stays below eps_osc is reported as non-oscillatory with frequency 0.
    """
    y = np.asarray(series, dtype=float)
    if dt <= 0:
        raise AnalysisError("dt must be positive")
    if y.ndim != 1:
        raise AnalysisError("series must be one-dimensional")
    t_total = (len(y) - 1) * dt
    if t_min is None:
        t_min = t_total / 3.0
    start = int(np.ceil(t_min / dt))
    y = y[start:]
    if len(y) < MIN_SAMPLES:
        raise AnalysisError(
            f"need at least {MIN_SAMPLES} samples after the cutoff, "
            f"got {len(y)}")
    t = dt * np.arange(len(y))
    y = _detrend(y, t)
    amplitude = 0.5 * (y.max() - y.min())
    window = (start * dt, start * dt + t[-1])
    if amplitude < eps_osc:
        return SpectralResult(0.0, float(amplitude), False, window)

    spec = np.abs(np.fft.rfft(y * np.hanning(len(y))))
    if len(spec) < 3:
        raise AnalysisError("series too short for spectral analysis")
    peak = 1 + int(np.argmax(spec[1:]))
    if peak == len(spec) - 1:
        peak -= 1
    # parabolic refinement on log magnitudes; exact for a windowed tone
    a, b, c = np.log(spec[peak - 1:peak + 2] + 1e-300)
    denom = a - 2.0 * b + c
    offset = 0.0 if denom == 0.0 else 0.5 * (a - c) / denom
    offset = float(np.clip(offset, -0.5, 0.5))
    freq = (peak + offset) / (len(y) * dt)
    return SpectralResult(float(freq), float(amplitude), True, window)


def contrast_ratio(f_cou: float, f_co: float) -> ContrastResult:
    """Non-reciprocity contrast (f_cou - f_co) / (f_cou + f_co)."""
    if f_cou < 0 or f_co < 0:
        raise AnalysisError("frequencies must be non-negative")
    if f_cou == 0.0 and f_co == 0.0:
        return ContrastResult(f_cou, f_co, None)
    return ContrastResult(f_cou, f_co, (f_cou - f_co) / (f_cou + f_co))


def sync_metrics(series_matrix, weights, dt: float,
                 t_min: float | None = None,
                 eps_osc: float = DEFAULT_EPS_OSC,
                 freq_tol: float = 0.05) -> SyncMetrics:
    """Synchronization metrics over a (time x class) series matrix.

    locked_fraction sums the weights of classes whose dominant frequency
    sits within freq_tol (relative) of the ensemble frequency; the order
    parameter is the window-averaged magnitude of the weighted mean
    phasor, with per-class phases taken from the analytic signal of each
    detrended column.
    """
    ys = np.asarray(series_matrix, dtype=float)
    if ys.ndim != 2:
        raise AnalysisError("series_matrix must be (time x class)")
    w = np.asarray(weights, dtype=float)
    if len(w) != ys.shape[1]:
        raise AnalysisError("weights length must match the class count")

    ens_series = ys @ w
    ens = dominant_frequency(ens_series, dt, t_min=t_min, eps_osc=eps_osc)

    per_class = [dominant_frequency(ys[:, j], dt, t_min=t_min,
                                    eps_osc=eps_osc)
                 for j in range(ys.shape[1])]

    if ens.frequency == 0.0:
        locked = 0.0
    else:
        rel = np.array([abs(r.frequency - ens.frequency) / ens.frequency
                        for r in per_class])
        locked = float(w[rel < freq_tol].sum())

    t_total = (ys.shape[0] - 1) * dt
    start = int(np.ceil((t_total / 3.0 if t_min is None else t_min) / dt))
    cut = ys[start:]
    t = dt * np.arange(cut.shape[0])
    detrended = np.column_stack([_detrend(cut[:, j], t)
                                 for j in range(cut.shape[1])])
    phases = np.angle(hilbert(detrended, axis=0))
    order = float(np.mean(np.abs(np.exp(1j * phases) @ w)))
    return SyncMetrics(order_parameter=order, locked_fraction=locked,
                       ensemble_frequency=ens)
