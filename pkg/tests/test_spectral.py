"""Frequency-domain estimators: periodogram, Welch, scaling, sum rule."""
import warnings

import numpy as np
import pytest

from hnoise.core import InvalidArgumentError, SeedSpec, make_schedule
from hnoise.noise_synth import FluxNoiseSpec, synthesize_ensemble
from hnoise.sampler import BackendProfile, SimulatedAnnealer, run_degenerate_protocol
from hnoise.spectral import (
    check_sum_rule,
    periodogram,
    remove_f0,
    scale_to_phi,
    welch_psd,
)


class TestPeriodogram:
    def test_zero_series(self):
        p = periodogram(np.zeros(64), delta_t=1e-3)
        assert np.allclose(p.values, 0.0)

    def test_on_grid_cosine(self):
        # rectangular window, no detrend: an exact-bin cosine of amplitude c
        # puts dt*N*c^2/2 in its bin and nothing elsewhere
        N, dt, c, l0 = 128, 1e-3, 0.7, 9
        t = np.arange(N)
        x = c * np.cos(2 * np.pi * l0 * t / N)
        p = periodogram(x, delta_t=dt, window="rectangular", detrend=False)
        assert p.values[l0] == pytest.approx(dt * N * c * c / 2, rel=1e-10)
        others = np.delete(p.values, l0)
        assert np.all(others < 1e-12 * p.values[l0])

    def test_white_noise_level(self):
        # unit-variance white noise has one-sided PSD 2*dt
        dt, N = 1e-3, 1000
        means = []
        for s in range(50):
            x = SeedSpec(s).stream(0, "white").standard_normal(N)
            p = periodogram(x, delta_t=dt, window="hann", detrend=False)
            means.append(p.values.mean())
        assert np.mean(means) == pytest.approx(2 * dt, rel=0.1)

    def test_linearity_in_power(self):
        x = SeedSpec(0).stream(0, "w").standard_normal(128)
        p1 = periodogram(x, delta_t=1e-3)
        p3 = periodogram(3.0 * x, delta_t=1e-3)
        assert np.allclose(p3.values, 9.0 * p1.values, rtol=1e-12)

    def test_parseval_identity(self):
        # rectangular, no detrend: plain sum of P * df equals the mean square
        dt, N = 296e-6, 1000
        x = SeedSpec(1).stream(0, "w").standard_normal(N)
        p = periodogram(x, delta_t=dt, window="rectangular", detrend=False)
        df = 1.0 / (N * dt)
        assert np.sum(p.values) * df == pytest.approx(np.mean(x ** 2),
                                                      rel=1e-10)

    def test_frequency_grid(self):
        dt, N = 296e-6, 1000
        p = periodogram(np.ones(N), delta_t=dt)
        assert p.frequencies[0] == 0.0
        assert p.frequencies[1] == pytest.approx(1.0 / (N * dt), rel=1e-12)
        assert p.frequencies[-1] == pytest.approx(1.0 / (2 * dt), rel=1e-12)

    def test_short_series_rejected(self):
        with pytest.raises(InvalidArgumentError):
            periodogram(np.ones(7), delta_t=1e-3)


class TestWelch:
    def test_degenerate_welch_equals_periodogram(self):
        x = SeedSpec(2).stream(0, "w").standard_normal(256)
        w = welch_psd(x, delta_t=1e-3)
        p = periodogram(x, delta_t=1e-3)
        assert np.allclose(w.values, p.values, rtol=1e-12)
        assert w.n_segments == 1

    def test_segment_averaging_reduces_variance(self):
        dt = 1e-3
        var_full, var_half = [], []
        for s in range(30):
            x = SeedSpec(s).stream(0, "w").standard_normal(1024)
            full = welch_psd(x, delta_t=dt, window="rectangular",
                             detrend=False)
            half = welch_psd(x, delta_t=dt, segment_length=512,
                             overlap_fraction=0.0, window="rectangular",
                             detrend=False)
            var_full.append(np.var(full.values[1:-1]))
            var_half.append(np.var(half.values[1:-1]))
        ratio = np.mean(var_full) / np.mean(var_half)
        assert 1.4 < ratio < 2.8

    def test_qubit_permutation_invariant(self):
        rng = np.random.default_rng(3)
        cols = rng.standard_normal((256, 5))
        a = welch_psd(cols, delta_t=1e-3)
        b = welch_psd(cols[:, ::-1], delta_t=1e-3)
        assert np.allclose(a.values, b.values, rtol=1e-12)

    def test_accepts_trace_list(self):
        traces = synthesize_ensemble(FluxNoiseSpec(23.0, 0.7), 4, 256,
                                     296e-6, SeedSpec(0))
        w = welch_psd(traces)
        assert w.segment_length == 256
        assert w.n_segments == 4

    def test_segment_too_long_rejected(self):
        with pytest.raises(InvalidArgumentError):
            welch_psd(np.ones(64), delta_t=1e-3, segment_length=128)


class TestScaleToPhi:
    def _spec(self):
        return periodogram(SeedSpec(0).stream(0, "w").standard_normal(64),
                           delta_t=1e-3)

    def test_alpha_half_unchanged(self):
        s = self._spec()
        assert np.allclose(scale_to_phi(s, 0.5).values, s.values, rtol=1e-15)

    def test_arithmetic(self):
        s = self._spec()
        out = scale_to_phi(s, 25.0)
        assert out.values[5] == pytest.approx(s.values[5] / 2500.0, rel=1e-15)
        assert out.level == "phi"

    def test_round_trip(self):
        s = self._spec()
        out = scale_to_phi(s, 25.0)
        assert np.allclose(out.values * 2500.0, s.values, rtol=1e-15)

    def test_rejects_bad_inputs(self):
        s = self._spec()
        with pytest.raises(InvalidArgumentError):
            scale_to_phi(s, 0.0)
        with pytest.raises(InvalidArgumentError):
            scale_to_phi(scale_to_phi(s, 1.0), 1.0)


class TestRemoveF0:
    def test_drops_dc_bin(self):
        s = periodogram(np.ones(64) + 0.01, delta_t=1e-3)
        out = remove_f0(s)
        assert out.frequencies.size == s.frequencies.size - 1
        assert out.frequencies[0] > 0
        assert out.f0_removed

    def test_idempotent_with_warning(self):
        s = remove_f0(periodogram(np.ones(64), delta_t=1e-3))
        with pytest.warns(UserWarning, match="already removed"):
            out = remove_f0(s)
        assert out is s

    def test_constant_offset_leakage(self):
        # after mean removal and f=0 removal a constant contributes nothing
        x = np.full(256, 5.0)
        s = remove_f0(periodogram(x, delta_t=1e-3, detrend=True))
        assert np.sum(s.values) < 1e-10 * 25.0


class TestSumRule:
    def _simulated(self, n_qubits=64, N=1000):
        profile = BackendProfile(name="sim", n_qubits=n_qubits, t_d=295e-6,
                                 alpha_table={1e-6: 25.0},
                                 noise_spec=FluxNoiseSpec(23.0, 0.7))
        backend = SimulatedAnnealer(profile)
        sched = make_schedule(1e-6, 295e-6, N)
        return run_degenerate_protocol(backend, sched, SeedSpec(0)), sched

    def test_beta_level_integral_is_one(self):
        m, sched = self._simulated()
        spec = welch_psd(m, window="rectangular", detrend=False)
        report = check_sum_rule(spec, alpha=25.0, delta_t=sched.delta_t)
        assert report.target == 1.0
        assert report.relative_error < 0.02

    def test_phi_level_integral(self):
        m, sched = self._simulated()
        spec = scale_to_phi(welch_psd(m, window="rectangular", detrend=True),
                            25.0)
        report = check_sum_rule(spec, alpha=25.0, delta_t=sched.delta_t)
        assert report.target == pytest.approx(1.0 / 2500.0, rel=1e-12)
        assert report.relative_error < 0.05

    def test_zero_spectrum(self):
        spec = periodogram(np.zeros(64), delta_t=1e-3)
        report = check_sum_rule(spec, alpha=1.0, delta_t=1e-3)
        assert report.integral == 0.0
        assert report.relative_error == 1.0

    def test_scaling_chain_consistency(self):
        # the correlation-scaling route and the spectrum-integral route must
        # agree on total phi power
        from hnoise.estimation import averaged_correlation, beta_to_phi
        m, sched = self._simulated()
        spec = scale_to_phi(welch_psd(m, window="rectangular", detrend=False),
                            25.0)
        report = check_sum_rule(spec, alpha=25.0, delta_t=sched.delta_t)
        # <beta^2> = 1 always, so total phi-level power is 1/(4 alpha^2)
        assert report.integral == pytest.approx(report.target, rel=0.02)
