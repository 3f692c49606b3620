"""Hamiltonian-noise benchmarking for quantum annealers.

Estimates the time correlation and power spectral density of the effective
qubit-bias fluctuation from degenerate annealing runs, and fits a power-law
flux-noise model with a sum-rule white background. Ships a simulated
backend with known injected noise so the whole pipeline is verifiable.
"""

__version__ = "0.1.0"

from .core import (
    AnnealSchedule,
    BiasProgram,
    CalibrationRangeError,
    ConfigurationError,
    DataFormatError,
    FitInfeasibleError,
    InvalidArgumentError,
    SampleMatrix,
    SeedSpec,
    make_schedule,
)
from .noise_synth import (
    FluxNoiseSpec,
    NoiseTrace,
    model_psd,
    synthesize_ensemble,
    synthesize_trace,
)
from .sampler import (
    BackendProfile,
    ReplayBackend,
    SimulatedAnnealer,
    run_bias_sweep,
    run_degenerate_protocol,
)
from .estimation import (
    CalibrationResult,
    CorrelationSeries,
    averaged_correlation,
    beta_to_phi,
    fit_alpha,
    qubit_correlation,
    rms_phi,
)
from .spectral import (
    SpectrumEstimate,
    check_sum_rule,
    periodogram,
    remove_f0,
    scale_to_phi,
    welch_psd,
)
from .pipeline import (
    AnalysisResult,
    PipelineConfig,
    ScheduleAnalysis,
    analyze,
    calibrate_schedules,
    collect_samples,
    fit_report,
    run_benchmark,
)
from .modelfit import (
    FluxNoiseFit,
    global_fit,
    model_curve,
    residual_diagnostics,
    white_background,
)
