"""Flux-noise model fitting across schedules.

Model: S_phi(f) = [(A/f)^a + W] microseconds, with the white background W
pinned per schedule by the sum rule, so the global fit has exactly two free
parameters (A, a) shared by all spectra.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .core import FitInfeasibleError, InvalidArgumentError, MICROSECOND
from .spectral import SpectrumEstimate

LOG10A_BOUNDS = (-1.0, 5.0)
EXPONENT_BOUNDS = (0.05, 0.95)
_GRID_POINTS = 5
_PENALTY = 1e4
_OBJ_TOL = 1e-9


def white_background(amplitude_hz: float, exponent: float, alpha: float,
                     delta_t: float) -> float:
    """Sum-rule white background W in microsecond-report units.

    W = (delta_t / us) / (2 alpha^2) - (2 delta_t A)^a / (1 - a).
    May come out negative; callers flag that as infeasible.
    """
    if not 0.0 < exponent < 1.0:
        raise InvalidArgumentError(
            f"exponent must lie in (0, 1), got {exponent}")
    if alpha <= 0:
        raise InvalidArgumentError(f"alpha must be positive, got {alpha}")
    if delta_t <= 0:
        raise InvalidArgumentError(f"delta_t must be positive, got {delta_t}")
    shot = (delta_t / MICROSECOND) / (2.0 * alpha * alpha)
    if amplitude_hz == 0.0:
        return shot
    flux = (2.0 * delta_t * amplitude_hz) ** exponent / (1.0 - exponent)
    return shot - flux


def model_curve(amplitude_hz: float, exponent: float, background: float,
                frequencies) -> np.ndarray:
    """Model PSD values in seconds on the given frequency grid."""
    f = np.asarray(frequencies, dtype=float)
    if np.any(f <= 0):
        raise InvalidArgumentError("model_curve requires f > 0")
    if amplitude_hz == 0.0:
        flux = np.zeros_like(f)
    else:
        flux = (amplitude_hz / f) ** exponent
    return (flux + background) * MICROSECOND


@dataclass(frozen=True)
class ScheduleBackground:
    """Per-schedule white background at the fitted parameters."""

    delta_t: float
    alpha: float
    w: float          # clamped-at-zero value used in the model curve
    w_raw: float      # unclamped sum-rule value
    feasible: bool


@dataclass(frozen=True)
class FluxNoiseFit:
    """Result of the simultaneous multi-schedule fit."""

    amplitude_hz: float
    amplitude_stderr: float
    exponent: float
    exponent_stderr: float
    backgrounds: tuple      # ScheduleBackground per input spectrum
    residual_norm: float    # summed squared log10 residuals at the minimum
    n_points: int
    converged: bool
    flags: tuple = ()


def _prepare(spectra):
    prepped = []
    for spec, alpha, delta_t in spectra:
        if not isinstance(spec, SpectrumEstimate):
            raise InvalidArgumentError("expected SpectrumEstimate inputs")
        if spec.level != "phi":
            raise InvalidArgumentError("global_fit expects phi-level spectra")
        if not spec.f0_removed or (spec.frequencies.size and spec.frequencies[0] == 0.0):
            raise InvalidArgumentError(
                "remove the f=0 bin before fitting (remove_f0)")
        if alpha <= 0 or delta_t <= 0:
            raise InvalidArgumentError("alpha and delta_t must be positive")
        keep = spec.values > 0.0
        prepped.append((spec.frequencies[keep],
                        np.log10(spec.values[keep]), alpha, delta_t))
    if not prepped:
        raise InvalidArgumentError("at least one spectrum required")
    return prepped


def _objective(params, prepped):
    log_a10, exponent = params
    amplitude = 10.0 ** log_a10
    total = 0.0
    any_feasible = False
    for freqs, log_est, alpha, delta_t in prepped:
        w = white_background(amplitude, exponent, alpha, delta_t)
        if w >= 0.0:
            any_feasible = True
            w_used = w
        else:
            # Quadratic penalty keeps the objective continuous while pushing
            # the search back toward the feasible region.
            total += _PENALTY * w * w
            w_used = 0.0
        model = model_curve(amplitude, exponent, w_used, freqs)
        r = log_est - np.log10(model)
        total += float(np.dot(r, r))
    return total, any_feasible


def global_fit(spectra, log10a_bounds=LOG10A_BOUNDS,
               exponent_bounds=EXPONENT_BOUNDS) -> FluxNoiseFit:
    """Fit (A, a) jointly to several bias-level spectra in log space.

    spectra: list of (SpectrumEstimate at phi level, alpha, delta_t).
    Objective: uniform-weight sum of squared log10 residuals; W per spectrum
    follows from the sum rule and is not a free parameter. Derivative-free
    simplex refinement from the best coarse-grid starts keeps the fit
    deterministic.
    """
    prepped = _prepare(spectra)
    flags = []

    def obj(p):
        return _objective(p, prepped)[0]

    la_grid = np.linspace(*log10a_bounds, _GRID_POINTS)
    a_grid = np.linspace(*exponent_bounds, _GRID_POINTS)
    starts = []
    feasible_seen = False
    for la in la_grid:
        for a in a_grid:
            val, feas = _objective((la, a), prepped)
            feasible_seen = feasible_seen or feas
            starts.append((val, la, a))
    if not feasible_seen:
        raise FitInfeasibleError(
            "white background is negative everywhere in the search region")
    starts.sort(key=lambda t: t[0])

    best = None
    for val, la, a in starts[:2]:
        res = minimize(obj, x0=[la, a], method="Nelder-Mead",
                       bounds=[log10a_bounds, exponent_bounds],
                       options={"xatol": 1e-10, "fatol": _OBJ_TOL,
                                "maxiter": 4000})
        if best is None or res.fun < best.fun:
            best = res
    # The (log A, a) landscape has a long shallow ridge; restarting the
    # simplex from the found point escapes premature-shrinkage stalls.
    for _ in range(3):
        res = minimize(obj, x0=best.x, method="Nelder-Mead",
                       bounds=[log10a_bounds, exponent_bounds],
                       options={"xatol": 1e-10, "fatol": _OBJ_TOL,
                                "maxiter": 4000})
        if res.fun >= best.fun - _OBJ_TOL:
            best = res if res.fun < best.fun else best
            break
        best = res
    converged = bool(best.success)
    if not converged:
        flags.append("optimizer did not converge within budget; "
                     "best point so far reported")
    log_a10, exponent = (float(v) for v in best.x)
    amplitude = 10.0 ** log_a10

    n_points = sum(p[0].size for p in prepped)
    la_err, a_err, hess_flags = _uncertainties(best.x, best.fun, obj, n_points)
    flags.extend(hess_flags)

    backgrounds = []
    for _, _, alpha, delta_t in prepped:
        w_raw = white_background(amplitude, exponent, alpha, delta_t)
        backgrounds.append(ScheduleBackground(
            delta_t=delta_t, alpha=alpha, w=max(w_raw, 0.0), w_raw=w_raw,
            feasible=w_raw >= 0.0))
    if any(not b.feasible for b in backgrounds):
        flags.append("negative white background at the optimum for at least "
                     "one schedule: sum rule infeasible there")

    return FluxNoiseFit(
        amplitude_hz=float(amplitude),
        amplitude_stderr=float(amplitude * np.log(10.0) * la_err),
        exponent=float(exponent), exponent_stderr=float(a_err),
        backgrounds=tuple(backgrounds), residual_norm=float(best.fun),
        n_points=n_points, converged=converged, flags=tuple(flags))


def _uncertainties(x, fmin, obj, n_points):
    """Parameter errors from the finite-difference Hessian of the objective.

    Covariance = 2 s^2 H^{-1} with s^2 the residual variance, the local
    quadratic (Gauss) approximation at the minimum.
    """
    flags = []
    steps = (1e-4, 1e-4)
    h = np.zeros((2, 2))
    for i in range(2):
        for j in range(i, 2):
            ei = np.eye(2)[i] * steps[i]
            ej = np.eye(2)[j] * steps[j]
            if i == j:
                h[i, i] = (obj(x + ei) - 2.0 * fmin + obj(x - ei)) / steps[i] ** 2
            else:
                h[i, j] = h[j, i] = (
                    obj(x + ei + ej) - obj(x + ei - ej)
                    - obj(x - ei + ej) + obj(x - ei - ej)
                ) / (4.0 * steps[i] * steps[j])
    dof = max(n_points - 2, 1)
    s2 = max(fmin, 0.0) / dof
    try:
        cov = 2.0 * s2 * np.linalg.inv(h)
        diag = np.diag(cov)
        if np.any(diag < 0):
            raise np.linalg.LinAlgError("negative variance")
        return float(np.sqrt(diag[0])), float(np.sqrt(diag[1])), flags
    except np.linalg.LinAlgError:
        flags.append("Hessian not positive definite; uncertainties unavailable")
        return float("nan"), float("nan"), flags


@dataclass(frozen=True)
class ResidualSummary:
    """Low-band vs high-band log residuals for one spectrum."""

    delta_t: float
    low_band_mean: float
    high_band_spread: float
    n_low: int
    n_high: int
    flagged: bool


# Smallest low-band mean log10 residual treated as a real excess; below this
# the comparison against the high-band spread is numerical noise.
EXCESS_FLOOR = 0.01


def residual_diagnostics(fit: FluxNoiseFit, spectra) -> list[ResidualSummary]:
    """Detect low-frequency excess noise above the fitted flux-noise law.

    Splits each spectrum into its lowest frequency decade and the rest; a
    spectrum is flagged when the low-band mean log residual exceeds three
    times the high-band residual spread (and the absolute floor).
    """
    prepped = _prepare(spectra)
    out = []
    for (freqs, log_est, alpha, delta_t), bg in zip(prepped, fit.backgrounds):
        model = model_curve(fit.amplitude_hz, fit.exponent, bg.w, freqs)
        resid = log_est - np.log10(model)
        low = freqs <= freqs[0] * 10.0
        m_lo = float(resid[low].mean())
        hi = resid[~low]
        s_hi = float(hi.std(ddof=1)) if hi.size > 1 else 0.0
        flagged = bool(m_lo > max(3.0 * s_hi, EXCESS_FLOOR))
        out.append(ResidualSummary(delta_t=delta_t, low_band_mean=m_lo,
                                   high_band_spread=s_hi,
                                   n_low=int(low.sum()), n_high=int(hi.size),
                                   flagged=flagged))
    return out
