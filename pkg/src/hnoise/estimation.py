"""Time-domain estimators: solution-state correlation, alpha calibration,
conversion from readout-level to bias-level correlation, and the rms
bias-uncertainty summary.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, replace

import numpy as np

from .core import (
    CalibrationRangeError,
    InvalidArgumentError,
    NoiseFloorWarning,
    SampleMatrix,
)
from .sampler import LINEAR_RANGE_MAX, SweepPoint


@dataclass(frozen=True)
class CorrelationSeries:
    """Lag-indexed correlation estimates with per-lag observation counts."""

    lags: np.ndarray       # integers 0..k_max
    times: np.ndarray      # t_k = k * delta_t, seconds
    values: np.ndarray
    counts: np.ndarray     # observations entering each lag, N - k
    level: str             # "beta" (readout) or "phi" (bias fluctuation)
    stderr: np.ndarray | None = None
    lag0_excluded: bool = False

    def __post_init__(self):
        if self.level not in ("beta", "phi"):
            raise InvalidArgumentError(f"unknown level {self.level!r}")

    def value_at_lag(self, k: int) -> float:
        idx = int(np.searchsorted(self.lags, k))
        if idx >= self.lags.size or self.lags[idx] != k:
            raise InvalidArgumentError(f"lag {k} not present in series")
        return float(self.values[idx])


def _lag_products(series: np.ndarray, k_max: int) -> np.ndarray:
    # Exact sums of beta(j+k) * beta(j); integer-valued, so no FFT rounding.
    x = np.asarray(series, dtype=float)
    return np.array([np.dot(x[k:], x[:x.size - k] if k else x)
                     for k in range(k_max + 1)])


def qubit_correlation(series: np.ndarray, k_max: int,
                      delta_t: float = 1.0) -> CorrelationSeries:
    """Per-qubit solution-state correlation at lags 0..k_max.

    values[k] = (1 / (N - k)) * sum_j beta(j + k) beta(j); values[0] is 1
    exactly for +-1 inputs.
    """
    x = np.asarray(series, dtype=float).ravel()
    n = x.size
    if k_max > n // 2:
        raise InvalidArgumentError(f"k_max {k_max} exceeds N/2 = {n // 2}")
    lags = np.arange(k_max + 1)
    counts = n - lags
    values = _lag_products(x, k_max) / counts
    return CorrelationSeries(lags=lags, times=lags * delta_t, values=values,
                             counts=counts, level="beta")


def averaged_correlation(matrix: SampleMatrix, k_max: int | None = None) -> CorrelationSeries:
    """Qubit-averaged correlation with a per-qubit jackknife error bar.

    k_max defaults to N/2 so every lag keeps at least half the observations.
    """
    r = matrix.readouts.astype(float)
    n_runs, n_qubits = r.shape
    if k_max is None:
        k_max = n_runs // 2
    if k_max > n_runs // 2:
        raise InvalidArgumentError(f"k_max {k_max} exceeds N/2 = {n_runs // 2}")
    lags = np.arange(k_max + 1)
    counts = n_runs - lags
    per_qubit = np.empty((k_max + 1, n_qubits))
    for k in range(k_max + 1):
        top = r[k:] if k else r
        bot = r[:n_runs - k] if k else r
        per_qubit[k] = np.einsum("ij,ij->j", top, bot) / counts[k]
    values = per_qubit.mean(axis=1)
    if n_qubits > 1:
        stderr = per_qubit.std(axis=1, ddof=1) / np.sqrt(n_qubits)
    else:
        stderr = np.zeros(k_max + 1)
    return CorrelationSeries(lags=lags, times=lags * matrix.schedule.delta_t,
                             values=values, counts=counts, level="beta",
                             stderr=stderr)


@dataclass(frozen=True)
class CalibrationResult:
    """Fitted readout slope alpha(t_a) from a small-bias sweep."""

    alpha: float
    alpha_stderr: float
    points: tuple          # (phi, p_minus estimate, binomial stderr) per point
    linear_range_max: float
    diagnostics: tuple = ()


def fit_alpha(sweep: list[SweepPoint],
              linear_range_max: float = LINEAR_RANGE_MAX) -> CalibrationResult:
    """Weighted least-squares slope of (p_minus - 1/2) vs phi through the origin.

    The intercept is pinned at 1/2 by the linear readout model; weights are
    inverse binomial variances. Points beyond the linear range are excluded.
    """
    used, all_points, diagnostics = [], [], []
    for pt in sweep:
        p_hat = pt.fraction_minus
        var = p_hat * (1.0 - p_hat) / pt.count_total
        var = max(var, 0.25 / pt.count_total ** 2)  # guard p_hat in {0, 1}
        all_points.append((pt.phi, p_hat, float(np.sqrt(var))))
        if abs(pt.phi) <= linear_range_max:
            used.append((pt.phi, p_hat, var))
        else:
            diagnostics.append(f"excluded phi={pt.phi} beyond linear range")
    if not used:
        raise CalibrationRangeError(
            f"no sweep points within the linear range |phi| <= {linear_range_max}")
    x = np.array([u[0] for u in used])
    y = np.array([u[1] - 0.5 for u in used])
    w = np.array([1.0 / u[2] for u in used])
    sxx = float(np.sum(w * x * x))
    if sxx == 0.0:
        diagnostics.append("degenerate sweep: all usable points at phi = 0")
        return CalibrationResult(alpha=0.0, alpha_stderr=0.0,
                                 points=tuple(all_points),
                                 linear_range_max=linear_range_max,
                                 diagnostics=tuple(diagnostics))
    alpha = float(np.sum(w * x * y) / sxx)
    resid = y - alpha * x
    m = len(used)
    if m > 1:
        chi2 = float(np.sum(w * resid * resid))
        stderr = float(np.sqrt(chi2 / (m - 1) / sxx))
    else:
        stderr = 0.0
    if alpha <= 0.0:
        diagnostics.append(
            "non-positive fitted slope: possible sign-convention mismatch")
    return CalibrationResult(alpha=alpha, alpha_stderr=stderr,
                             points=tuple(all_points),
                             linear_range_max=linear_range_max,
                             diagnostics=tuple(diagnostics))


def beta_to_phi(corr: CorrelationSeries, alpha: float) -> CorrelationSeries:
    """Convert readout-level correlation to bias-level: divide by 4 alpha^2.

    The relation assumes the anneal probed the bias, so it holds only for
    t >= delta_t; the lag-0 point (identically 1) is excluded.
    """
    if alpha <= 0:
        raise InvalidArgumentError(f"alpha must be positive, got {alpha}")
    if corr.level != "beta":
        raise InvalidArgumentError("beta_to_phi expects a beta-level series")
    factor = 4.0 * alpha * alpha
    values = corr.values / factor
    stderr = corr.stderr / factor if corr.stderr is not None else None
    if corr.lags.size and corr.lags[0] == 0:
        values = values.copy()
        values[0] = np.nan
        if stderr is not None:
            stderr = stderr.copy()
            stderr[0] = np.nan
    return replace(corr, values=values, stderr=stderr, level="phi",
                   lag0_excluded=True)


def rms_phi(corr: CorrelationSeries) -> float | None:
    """Root of the lag-1 bias-level correlation: the programming uncertainty.

    Returns None (with a warning) when the lag-1 estimate is negative,
    i.e. below the statistical noise floor.
    """
    if corr.level != "phi":
        raise InvalidArgumentError("rms_phi expects a phi-level series")
    v = corr.value_at_lag(1)
    if v < 0:
        warnings.warn("negative lag-1 correlation: rms undefined, estimate "
                      "is below the noise floor", NoiseFloorWarning)
        return None
    return float(np.sqrt(v))


def collapse_alphas(curves: list[CorrelationSeries],
                    calibrations: list[CalibrationResult],
                    n_grid: int = 21) -> list[float]:
    """Optional collapse adjustment of per-schedule alphas.

    Rescales each alpha within +-1 fitted stderr to minimize the summed
    squared distance between bias-level correlation curves over the lags
    they share. Off by default in the pipeline.
    """
    if len(curves) != len(calibrations):
        raise InvalidArgumentError("one calibration per curve required")
    if len(curves) < 2:
        return [c.alpha for c in calibrations]
    k_shared = min(int(c.lags[-1]) for c in curves)
    lags = np.arange(1, k_shared + 1)
    base = [np.array([c.value_at_lag(int(k)) for k in lags]) for c in curves]

    def spread(alphas):
        phi = np.array([b / (4.0 * a * a) for b, a in zip(base, alphas)])
        return float(np.sum((phi - phi.mean(axis=0)) ** 2))

    alphas = [c.alpha for c in calibrations]
    # Coordinate descent over small per-schedule grids; the objective is
    # smooth and the search box is one standard error wide.
    for _ in range(8):
        improved = False
        for i, cal in enumerate(calibrations):
            lo = cal.alpha - cal.alpha_stderr
            hi = cal.alpha + cal.alpha_stderr
            if lo <= 0 or hi <= lo:
                continue
            grid = np.linspace(lo, hi, n_grid)
            scores = []
            for g in grid:
                trial = list(alphas)
                trial[i] = g
                scores.append(spread(trial))
            best = grid[int(np.argmin(scores))]
            if best != alphas[i]:
                alphas[i] = float(best)
                improved = True
        if not improved:
            break
    return alphas
