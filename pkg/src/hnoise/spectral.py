"""Frequency-domain estimators: periodogram, Welch averaging, scaling of
readout-level spectra to bias level, DC removal, and the sum-rule check.

One-sided convention: the factor of two multiplies interior bins only, so
summing the spectrum times the bin width reproduces total power exactly.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, replace

import numpy as np
from scipy.integrate import trapezoid
from scipy.signal import get_window

from .core import InvalidArgumentError, SampleMatrix
from .noise_synth import NoiseTrace

WINDOWS = ("hann", "rectangular")


@dataclass(frozen=True)
class SpectrumEstimate:
    """One-sided PSD on the grid f_l = l / (segment_length * delta_t)."""

    frequencies: np.ndarray  # Hz, strictly increasing up to 1 / (2 delta_t)
    values: np.ndarray       # seconds (1/Hz)
    level: str               # "beta" or "phi"
    window: str
    segment_length: int
    n_segments: int          # periodograms averaged (segments x qubits)
    f0_removed: bool = False

    def __post_init__(self):
        if self.level not in ("beta", "phi"):
            raise InvalidArgumentError(f"unknown level {self.level!r}")
        if self.window not in WINDOWS:
            raise InvalidArgumentError(f"unknown window {self.window!r}")


def _window_array(window: str, n: int) -> np.ndarray:
    if window == "rectangular":
        return np.ones(n)
    return get_window("hann", n, fftbins=True)


def _one_sided_psd(x: np.ndarray, delta_t: float, w: np.ndarray,
                   detrend: bool) -> np.ndarray:
    n = x.size
    if detrend:
        x = x - x.mean()
    xw = x * w
    spec = np.abs(np.fft.rfft(xw)) ** 2
    # Power normalization: a white input keeps its level for any window.
    spec *= 2.0 * delta_t / (n * np.mean(w * w))
    spec[0] *= 0.5
    if n % 2 == 0:
        spec[-1] *= 0.5
    return spec


def periodogram(series: np.ndarray, delta_t: float, window: str = "hann",
                detrend: bool = True, level: str = "beta") -> SpectrumEstimate:
    """Windowed one-sided periodogram of a single real series."""
    x = np.asarray(series, dtype=float).ravel()
    if x.size < 8:
        raise InvalidArgumentError(f"series length must be >= 8, got {x.size}")
    w = _window_array(window, x.size)
    values = _one_sided_psd(x, delta_t, w, detrend)
    freqs = np.fft.rfftfreq(x.size, d=delta_t)
    return SpectrumEstimate(frequencies=freqs, values=values, level=level,
                            window=window, segment_length=x.size, n_segments=1)


def _as_columns(data) -> tuple[np.ndarray, float | None]:
    """Normalize sample matrices, trace lists, or arrays to (N, n) columns."""
    if isinstance(data, SampleMatrix):
        return data.readouts.astype(float), data.schedule.delta_t
    if isinstance(data, NoiseTrace):
        return data.values[:, None], data.sample_period
    if isinstance(data, (list, tuple)) and data and isinstance(data[0], NoiseTrace):
        periods = {t.sample_period for t in data}
        if len(periods) != 1:
            raise InvalidArgumentError("traces have mixed sample periods")
        return np.stack([t.values for t in data], axis=1), periods.pop()
    arr = np.asarray(data, dtype=float)
    if arr.ndim == 1:
        arr = arr[:, None]
    if arr.ndim != 2:
        raise InvalidArgumentError("expected 1-D or 2-D input")
    return arr, None


def welch_psd(data, delta_t: float | None = None,
              segment_length: int | None = None,
              overlap_fraction: float = 0.5, window: str = "hann",
              detrend: bool = True, level: str = "beta") -> SpectrumEstimate:
    """Welch estimate averaged over segments and over qubits (columns).

    The default segment length equals the full series length, so smoothing
    comes entirely from qubit averaging; segment averaging kicks in when a
    shorter segment_length is requested.
    """
    cols, inferred_dt = _as_columns(data)
    delta_t = delta_t if delta_t is not None else inferred_dt
    if delta_t is None or delta_t <= 0:
        raise InvalidArgumentError("delta_t must be provided and positive")
    n = cols.shape[0]
    seg = n if segment_length is None else int(segment_length)
    if seg > n:
        raise InvalidArgumentError(f"segment_length {seg} exceeds series length {n}")
    if seg < 8:
        raise InvalidArgumentError(f"segment_length must be >= 8, got {seg}")
    if not 0.0 <= overlap_fraction < 1.0:
        raise InvalidArgumentError("overlap_fraction must be in [0, 1)")
    step = max(1, int(round(seg * (1.0 - overlap_fraction))))
    starts = range(0, n - seg + 1, step)
    w = _window_array(window, seg)
    acc = np.zeros(seg // 2 + 1)
    count = 0
    for q in range(cols.shape[1]):
        for s in starts:
            acc += _one_sided_psd(cols[s:s + seg, q], delta_t, w, detrend)
            count += 1
    freqs = np.fft.rfftfreq(seg, d=delta_t)
    return SpectrumEstimate(frequencies=freqs, values=acc / count, level=level,
                            window=window, segment_length=seg, n_segments=count)


def scale_to_phi(spec: SpectrumEstimate, alpha: float) -> SpectrumEstimate:
    """Readout-level PSD to bias-level PSD: divide by 4 alpha^2."""
    if alpha <= 0:
        raise InvalidArgumentError(f"alpha must be positive, got {alpha}")
    if spec.level != "beta":
        raise InvalidArgumentError("scale_to_phi expects a beta-level spectrum")
    return replace(spec, values=spec.values / (4.0 * alpha * alpha), level="phi")


def remove_f0(spec: SpectrumEstimate) -> SpectrumEstimate:
    """Drop the DC bin so static polarization does not enter the model fit."""
    if spec.f0_removed:
        warnings.warn("f=0 bin already removed; no-op", UserWarning)
        return spec
    keep = spec.frequencies > 0.0
    return replace(spec, frequencies=spec.frequencies[keep],
                   values=spec.values[keep], f0_removed=True)


@dataclass(frozen=True)
class SumRuleReport:
    """Band integral of the spectrum against the total-power target."""

    integral: float
    target: float
    relative_error: float


def check_sum_rule(spec: SpectrumEstimate, alpha: float,
                   delta_t: float) -> SumRuleReport:
    """Trapezoid band integral vs the total power forced by <beta^2> = 1.

    Readout-level spectra must integrate to 1; bias-level spectra to
    1 / (4 alpha^2).
    """
    if alpha <= 0:
        raise InvalidArgumentError(f"alpha must be positive, got {alpha}")
    integral = float(trapezoid(spec.values, spec.frequencies))
    target = 1.0 if spec.level == "beta" else 1.0 / (4.0 * alpha * alpha)
    return SumRuleReport(integral=integral, target=target,
                         relative_error=abs(integral - target) / target)
