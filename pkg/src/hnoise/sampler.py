"""Annealer backends and measurement protocols.

Two backends share one contract: a simulated annealer with known injected
bias noise, and a replay backend that re-serves recorded readout files.
Protocols on top of them: degenerate runs for noise benchmarking and small
bias sweeps for readout-slope calibration.
"""
from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .core import (
    AnnealSchedule,
    BiasProgram,
    ConfigurationError,
    DataFormatError,
    InvalidArgumentError,
    LinearityWarning,
    SampleMatrix,
    SeedSpec,
    degenerate_program,
    make_schedule,
)
from .noise_synth import FluxNoiseSpec, synthesize_ensemble

# Largest |bias| for which the linear readout response is trusted.
LINEAR_RANGE_MAX = 1e-2


@dataclass(frozen=True)
class BackendProfile:
    """Static description of one annealer backend.

    alpha_table maps annealing time t_a (seconds) to the readout slope
    alpha(t_a); it and noise_spec apply to the simulated backend only.
    """

    name: str
    n_qubits: int
    t_d: float
    alpha_table: Mapping[float, float] | None = None
    noise_spec: FluxNoiseSpec | None = None
    bias_range: float = 1.0

    def __post_init__(self):
        if self.n_qubits < 1:
            raise InvalidArgumentError("n_qubits must be >= 1")
        if self.t_d < 0:
            raise InvalidArgumentError("t_d must be >= 0")
        if self.alpha_table is not None:
            if any(a <= 0 for a in self.alpha_table.values()):
                raise InvalidArgumentError("every alpha(t_a) must be positive")
            object.__setattr__(self, "alpha_table", dict(self.alpha_table))

    def alpha_for(self, t_a: float) -> float:
        if self.alpha_table is None:
            raise ConfigurationError(f"backend {self.name!r} has no alpha table")
        for key, val in self.alpha_table.items():
            if math.isclose(key, t_a, rel_tol=1e-9, abs_tol=0.0):
                return val
        raise ConfigurationError(
            f"no alpha entry for t_a = {t_a} s in backend {self.name!r}")


@dataclass(frozen=True)
class SampleDiagnostics:
    """Side-channel counters from one sample() call."""

    clamp_events: int = 0
    total_draws: int = 0

    @property
    def clamp_fraction(self) -> float:
        return self.clamp_events / self.total_draws if self.total_draws else 0.0


class SimulatedAnnealer:
    """Backend drawing readouts from the linear bias-to-probability model.

    Each qubit reads -1 with probability clamp(1/2 + alpha(t_a) * (h + phi), 0, 1)
    where phi is its injected noise trace sampled once per run at period
    delta_t. Clamp events mark departures from the linear model and are
    counted in the diagnostics.
    """

    def __init__(self, profile: BackendProfile):
        if profile.noise_spec is None or profile.alpha_table is None:
            raise ConfigurationError(
                "simulated backend requires noise_spec and alpha_table")
        self.profile = profile

    def sample_with_diagnostics(self, program: BiasProgram,
                                schedule: AnnealSchedule, seeds: SeedSpec,
                                purpose: str = "readout"):
        prof = self.profile
        if program.n_qubits != prof.n_qubits:
            raise InvalidArgumentError(
                f"program length {program.n_qubits} != backend qubits {prof.n_qubits}")
        alpha = prof.alpha_for(schedule.t_a)
        traces = synthesize_ensemble(prof.noise_spec, prof.n_qubits,
                                     schedule.n_runs, schedule.delta_t, seeds)
        n, N = prof.n_qubits, schedule.n_runs
        readouts = np.empty((N, n), dtype=np.int8)
        clamps = 0
        for i in range(n):
            p_minus = 0.5 + alpha * (program.biases[i] + traces[i].values)
            clamps += int(np.count_nonzero((p_minus < 0.0) | (p_minus > 1.0)))
            p_minus = np.clip(p_minus, 0.0, 1.0)
            u = seeds.stream(i, purpose).random(N)
            readouts[:, i] = np.where(u < p_minus, -1, 1)
        matrix = SampleMatrix(schedule=schedule, readouts=readouts, origin="simulated")
        return matrix, SampleDiagnostics(clamp_events=clamps, total_draws=N * n)

    def sample(self, program: BiasProgram, schedule: AnnealSchedule,
               seeds: SeedSpec) -> SampleMatrix:
        matrix, _ = self.sample_with_diagnostics(program, schedule, seeds)
        return matrix


class ReplayBackend:
    """Backend re-serving a recorded sample file; never alters the data."""

    def __init__(self, matrix: SampleMatrix, name: str = "replay"):
        self.matrix = matrix
        self.profile = BackendProfile(
            name=name, n_qubits=matrix.n_qubits,
            t_d=matrix.schedule.t_d)

    @classmethod
    def from_jsonl(cls, path) -> "ReplayBackend":
        return cls(read_samples_jsonl(path), name=f"replay:{path}")

    def sample(self, program: BiasProgram, schedule: AnnealSchedule,
               seeds: SeedSpec) -> SampleMatrix:
        if program.n_qubits != self.matrix.n_qubits:
            raise DataFormatError(
                f"program length {program.n_qubits} != recorded qubits "
                f"{self.matrix.n_qubits}")
        if schedule.n_runs != self.matrix.n_runs:
            raise DataFormatError(
                f"schedule n_runs {schedule.n_runs} != recorded runs "
                f"{self.matrix.n_runs}")
        return self.matrix


def run_degenerate_protocol(backend, schedule: AnnealSchedule,
                            seeds: SeedSpec) -> SampleMatrix:
    """All-zero bias program: any readout correlation witnesses bias noise."""
    program = degenerate_program(backend.profile.n_qubits)
    return backend.sample(program, schedule, seeds)


@dataclass(frozen=True)
class SweepPoint:
    """Pooled -1 counts at one bias value of a calibration sweep."""

    phi: float
    count_minus: int
    count_total: int

    @property
    def fraction_minus(self) -> float:
        return self.count_minus / self.count_total


def run_bias_sweep(backend, schedule: AnnealSchedule,
                   phi_grid: Sequence[float], n_runs_per_point: int,
                   seeds: SeedSpec) -> list[SweepPoint]:
    """Small-bias sweeps for alpha calibration, pooled over all qubits.

    Each grid value programs the same bias on every qubit for
    n_runs_per_point anneal runs; -1 counts are pooled over runs and qubits.
    """
    if len(phi_grid) == 0:
        raise InvalidArgumentError("phi_grid must be non-empty")
    n_qubits = backend.profile.n_qubits
    bias_range = backend.profile.bias_range
    if any(abs(p) > bias_range for p in phi_grid):
        raise InvalidArgumentError("phi_grid value beyond programmable bias range")
    points = []
    for idx, phi in enumerate(phi_grid):
        if abs(phi) > LINEAR_RANGE_MAX:
            warnings.warn(
                f"bias {phi} exceeds the linear range {LINEAR_RANGE_MAX}; "
                "the calibration fit will exclude it", LinearityWarning)
        sweep_schedule = AnnealSchedule(
            t_a=schedule.t_a, t_d=schedule.t_d, delta_t=schedule.delta_t,
            n_runs=int(n_runs_per_point))
        program = BiasProgram(biases=np.full(n_qubits, float(phi)),
                              bias_range=bias_range)
        sweep_seeds = _point_seeds(seeds, idx)
        matrix = backend.sample(program, sweep_schedule, sweep_seeds)
        count_minus = int(np.count_nonzero(matrix.readouts == -1))
        points.append(SweepPoint(phi=float(phi), count_minus=count_minus,
                                 count_total=matrix.readouts.size))
    return points


def _point_seeds(seeds: SeedSpec, point_index: int) -> SeedSpec:
    # Independent sub-seed per sweep point so points do not reuse noise.
    sub = seeds.stream(point_index, "sweep-point").integers(0, 2**63 - 1)
    return SeedSpec(master_seed=int(sub))


# ---------------------------------------------------------------------------
# JSON Lines sample persistence: one record per run, in run order.
#   {"run": j, "t_a_us": ..., "t_d_us": ..., "readout": [+-1, ...]}
# ---------------------------------------------------------------------------

def write_samples_jsonl(path, matrix: SampleMatrix) -> None:
    path = Path(path)
    t_a_us = matrix.schedule.t_a / 1e-6
    t_d_us = matrix.schedule.t_d / 1e-6
    with path.open("w", encoding="utf-8") as fh:
        for j in range(matrix.n_runs):
            rec = {"run": j, "t_a_us": t_a_us, "t_d_us": t_d_us,
                   "readout": [int(v) for v in matrix.readouts[j]]}
            fh.write(json.dumps(rec) + "\n")


def read_samples_jsonl(path) -> SampleMatrix:
    """Parse a recorded sample file; the first offending line names any error."""
    path = Path(path)
    rows = []
    t_a_us = t_d_us = width = None
    with path.open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataFormatError(f"{path}:{lineno}: invalid JSON: {exc}") from exc
            for key in ("run", "t_a_us", "t_d_us", "readout"):
                if key not in rec:
                    raise DataFormatError(f"{path}:{lineno}: missing field {key!r}")
            readout = rec["readout"]
            if not isinstance(readout, list) or any(v not in (-1, 1) for v in readout):
                raise DataFormatError(
                    f"{path}:{lineno}: readout entries must be -1 or +1")
            if t_a_us is None:
                t_a_us, t_d_us, width = rec["t_a_us"], rec["t_d_us"], len(readout)
            else:
                if rec["t_a_us"] != t_a_us or rec["t_d_us"] != t_d_us:
                    raise DataFormatError(
                        f"{path}:{lineno}: timing fields differ from first record")
                if len(readout) != width:
                    raise DataFormatError(
                        f"{path}:{lineno}: readout length {len(readout)} != {width}")
            if rec["run"] != len(rows):
                raise DataFormatError(
                    f"{path}:{lineno}: run index {rec['run']} out of order")
            rows.append(readout)
    if len(rows) < 4:
        raise DataFormatError(f"{path}: needs at least 4 run records, got {len(rows)}")
    schedule = make_schedule(t_a_us * 1e-6, t_d_us * 1e-6, len(rows))
    return SampleMatrix(schedule=schedule,
                        readouts=np.asarray(rows, dtype=np.int8),
                        origin="replayed")
