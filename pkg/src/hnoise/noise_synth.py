"""Stationary Gaussian colored-noise synthesis with a prescribed spectrum.

Ground-truth generator for the simulated annealer backend: produces traces
whose one-sided power spectral density follows the flux-noise power law
(amplitude/f)^exponent expressed in microsecond units.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import COMMON_STREAM, MICROSECOND, InvalidArgumentError, SeedSpec

# Oversampling factor: traces are synthesized at OVERSAMPLE x the requested
# length and a random contiguous window is kept. This both breaks the
# circulant periodicity of FFT synthesis and carries low-frequency power
# (below the measurement resolution 1/(N dt)) into the window as drift, the
# way a real infrared-divergent process would.
OVERSAMPLE = 16


@dataclass(frozen=True)
class FluxNoiseSpec:
    """Power-law noise target: S(f) = (amplitude_hz / f)^exponent microseconds."""

    amplitude_hz: float
    exponent: float
    common_mode_fraction: float = 0.0

    def __post_init__(self):
        if self.amplitude_hz < 0:
            raise InvalidArgumentError(f"amplitude must be >= 0, got {self.amplitude_hz}")
        if not 0.0 < self.exponent < 1.0:
            raise InvalidArgumentError(
                f"exponent must lie strictly inside (0, 1), got {self.exponent}")
        if not 0.0 <= self.common_mode_fraction <= 1.0:
            raise InvalidArgumentError("common_mode_fraction must be in [0, 1]")


@dataclass(frozen=True)
class NoiseTrace:
    """Dimensionless bias-fluctuation samples at a fixed period."""

    values: np.ndarray
    sample_period: float  # seconds

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if not np.all(np.isfinite(v)):
            raise InvalidArgumentError("trace values must be finite")
        if self.sample_period <= 0:
            raise InvalidArgumentError("sample_period must be positive")
        object.__setattr__(self, "values", v)

    def __len__(self) -> int:
        return self.values.size


def model_psd(spec: FluxNoiseSpec, f):
    """One-sided PSD of the power-law model at frequency f, in seconds (1/Hz).

    Diverges at f = 0; callers must stay strictly above DC.
    """
    f = np.asarray(f, dtype=float)
    if np.any(f <= 0):
        raise InvalidArgumentError("model_psd requires f > 0")
    if spec.amplitude_hz == 0.0:
        out = np.zeros_like(f)
    else:
        out = (spec.amplitude_hz / f) ** spec.exponent * MICROSECOND
    return out if out.ndim else float(out)


def _synthesize_full(spec: FluxNoiseSpec, n_total: int, sample_period: float,
                     rng: np.random.Generator) -> np.ndarray:
    """Frequency-domain synthesis of a length-n_total trace at the target PSD.

    Draws independent complex Gaussian spectral coefficients with variance
    proportional to the model PSD, zeroes the DC bin, and inverse-transforms.
    The expected periodogram of the result equals model_psd exactly.
    """
    freqs = np.fft.rfftfreq(n_total, d=sample_period)
    n_bins = freqs.size
    coeffs = np.zeros(n_bins, dtype=complex)
    if spec.amplitude_hz > 0.0:
        s = model_psd(spec, freqs[1:])
        # Interior bins: complex Gaussian, E|X|^2 = S * n / (2 dt), so that the
        # one-sided periodogram (2 dt / n) |X|^2 has expectation S.
        scale = np.sqrt(s * n_total / (4.0 * sample_period))
        g = rng.standard_normal((2, n_bins - 1))
        coeffs[1:] = scale * (g[0] + 1j * g[1])
        if n_total % 2 == 0:
            # Nyquist coefficient of a real signal is real; it enters the
            # one-sided spectrum without the interior factor of two.
            coeffs[-1] = np.sqrt(s[-1] * n_total / sample_period) * g[0, -1]
    return np.fft.irfft(coeffs, n=n_total)


def synthesize_trace(spec: FluxNoiseSpec, n_samples: int, sample_period: float,
                     stream: np.random.Generator) -> NoiseTrace:
    """Generate one Gaussian trace (zero mean in expectation) matching the
    model spectrum.

    Synthesizes OVERSAMPLE x n_samples points and keeps a random contiguous
    window; the window retains any slow drift from sub-resolution power.
    """
    if n_samples < 8:
        raise InvalidArgumentError(f"n_samples must be >= 8, got {n_samples}")
    if sample_period <= 0:
        raise InvalidArgumentError("sample_period must be positive")
    n_total = OVERSAMPLE * int(n_samples)
    full = _synthesize_full(spec, n_total, sample_period, stream)
    start = int(stream.integers(0, n_total - n_samples + 1))
    window = full[start:start + n_samples]
    # The window mean is NOT subtracted: sub-resolution power must stay in
    # the window as drift so the downstream sum-rule bookkeeping matches the
    # model, which budgets flux power all the way down to f = 0. Zero mean
    # holds in expectation (the DC bin of the full trace is zeroed).
    return NoiseTrace(values=window, sample_period=sample_period)


def synthesize_ensemble(spec: FluxNoiseSpec, n_qubits: int, n_samples: int,
                        sample_period: float, seeds: SeedSpec) -> list[NoiseTrace]:
    """Per-qubit traces with an optional shared (common-mode) component.

    Each trace is sqrt(c) * shared + sqrt(1 - c) * independent with
    c = common_mode_fraction, so every trace keeps the model PSD and the
    cross-qubit correlation coefficient equals c.
    """
    if n_qubits < 1:
        raise InvalidArgumentError(f"n_qubits must be >= 1, got {n_qubits}")
    c = spec.common_mode_fraction
    shared = None
    if c > 0.0:
        shared = synthesize_trace(spec, n_samples, sample_period,
                                  seeds.stream(COMMON_STREAM, "noise-common"))
    traces = []
    for i in range(n_qubits):
        if c >= 1.0:
            traces.append(shared)
            continue
        own = synthesize_trace(spec, n_samples, sample_period,
                               seeds.stream(i, "noise"))
        if c == 0.0:
            traces.append(own)
        else:
            mix = np.sqrt(c) * shared.values + np.sqrt(1.0 - c) * own.values
            traces.append(NoiseTrace(values=mix, sample_period=sample_period))
    return traces
