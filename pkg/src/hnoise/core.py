"""Shared domain types: schedules, bias programs, sample matrices, seeding.

All times are kept in seconds and frequencies in Hz internally; report
formatting converts to microseconds only at the output layer.
"""
from __future__ import annotations

import hashlib
import struct
from dataclasses import dataclass, field

import numpy as np

MICROSECOND = 1e-6


class InvalidArgumentError(ValueError):
    """A caller-supplied value violates a documented precondition."""


class ConfigurationError(Exception):
    """The run configuration is incomplete or inconsistent."""


class DataFormatError(Exception):
    """An input file does not conform to the documented format."""


class FitInfeasibleError(Exception):
    """No feasible model parameters exist in the search region."""


class CalibrationRangeError(Exception):
    """No calibration points fall inside the linear-response range."""


class LinearityWarning(UserWarning):
    """A bias value lies outside the validated linear-response range."""


class NoiseFloorWarning(UserWarning):
    """An estimate fell below the statistical noise floor."""


@dataclass(frozen=True)
class AnnealSchedule:
    """Timing of one benchmark series: anneal time, dead time, run count."""

    t_a: float       # user-set annealing time, seconds
    t_d: float       # fixed initialization + readout time, seconds
    delta_t: float   # run period, seconds; always t_a + t_d
    n_runs: int

    def __post_init__(self):
        if self.t_a <= 0:
            raise InvalidArgumentError(f"t_a must be positive, got {self.t_a}")
        if self.t_d < 0:
            raise InvalidArgumentError(f"t_d must be >= 0, got {self.t_d}")
        if self.n_runs < 4:
            raise InvalidArgumentError(f"n_runs must be >= 4, got {self.n_runs}")
        if self.delta_t != self.t_a + self.t_d:
            raise InvalidArgumentError(
                f"delta_t {self.delta_t} != t_a + t_d = {self.t_a + self.t_d}")


def make_schedule(t_a: float, t_d: float, n_runs: int) -> AnnealSchedule:
    """Build a schedule with the run period fixed to t_a + t_d."""
    return AnnealSchedule(t_a=t_a, t_d=t_d, delta_t=t_a + t_d, n_runs=int(n_runs))


@dataclass(frozen=True)
class BiasProgram:
    """Per-qubit dimensionless bias values h_i; couplers are out of scope."""

    biases: np.ndarray
    bias_range: float = 1.0  # programmable |h| limit, device configuration

    def __post_init__(self):
        b = np.asarray(self.biases, dtype=float)
        object.__setattr__(self, "biases", b)
        if b.ndim != 1 or b.size == 0:
            raise InvalidArgumentError("biases must be a non-empty 1-D vector")
        if np.max(np.abs(b)) > self.bias_range:
            raise InvalidArgumentError(
                f"|h_i| exceeds programmable range {self.bias_range}")

    @property
    def n_qubits(self) -> int:
        return self.biases.size

    @property
    def is_degenerate(self) -> bool:
        return bool(np.all(self.biases == 0.0))


def degenerate_program(n_qubits: int) -> BiasProgram:
    return BiasProgram(biases=np.zeros(n_qubits))


@dataclass(frozen=True)
class SampleMatrix:
    """N x n matrix of +/-1 readout outcomes from one protocol execution."""

    schedule: AnnealSchedule
    readouts: np.ndarray      # shape (n_runs, n_qubits), entries in {-1, +1}
    origin: str = "simulated"  # "simulated" or "replayed"

    def __post_init__(self):
        r = np.asarray(self.readouts)
        if r.ndim != 2:
            raise InvalidArgumentError("readouts must be a 2-D matrix")
        if not np.all(np.abs(r) == 1):
            raise InvalidArgumentError("readout entries must be exactly -1 or +1")
        if r.shape[0] != self.schedule.n_runs:
            raise InvalidArgumentError(
                f"readout rows {r.shape[0]} != schedule n_runs {self.schedule.n_runs}")
        if self.origin not in ("simulated", "replayed"):
            raise InvalidArgumentError(f"unknown origin {self.origin!r}")
        object.__setattr__(self, "readouts", r.astype(np.int8))

    @property
    def n_runs(self) -> int:
        return self.readouts.shape[0]

    @property
    def n_qubits(self) -> int:
        return self.readouts.shape[1]


# Qubit index reserved for noise components shared across the whole chip.
COMMON_STREAM = -1


@dataclass(frozen=True)
class SeedSpec:
    """Derives independent, order-free random streams from one master seed.

    Streams are keyed on (master_seed, qubit index, purpose tag) through a
    counter-based generator, so per-qubit work can be scheduled in any order
    and still reproduce bit-identical results.
    """

    master_seed: int

    def stream(self, qubit: int, purpose: str) -> np.random.Generator:
        h = hashlib.blake2b(digest_size=16)
        h.update(struct.pack("<q", int(self.master_seed)))
        h.update(struct.pack("<q", int(qubit)))
        h.update(purpose.encode("utf-8"))
        key = int.from_bytes(h.digest(), "little")
        return np.random.Generator(np.random.Philox(key=key))

    def child(self, label: str) -> "SeedSpec":
        """Derive an independent sub-seed, e.g. one per schedule or stage."""
        h = hashlib.blake2b(digest_size=8)
        h.update(struct.pack("<q", int(self.master_seed)))
        h.update(label.encode("utf-8"))
        return SeedSpec(master_seed=int.from_bytes(h.digest(), "little",
                                                   signed=True))
