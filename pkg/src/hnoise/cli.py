"""Command-line surface: configuration parsing, persistence, reports, plots.

Subcommands: synth, run, calibrate, analyze, report. All state flows through
a TOML config file plus a handful of override flags; every output directory
gets a manifest with config hash, seed, and tool version so reruns are
verifiable byte for byte.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from . import __version__
from .core import (
    CalibrationRangeError,
    ConfigurationError,
    DataFormatError,
    FitInfeasibleError,
    InvalidArgumentError,
    MICROSECOND,
)
from .modelfit import model_curve
from .noise_synth import synthesize_ensemble
from .pipeline import (
    AnalysisResult,
    PipelineConfig,
    analyze,
    build_backend,
    calibrate_schedules,
    collect_samples,
    fit_report,
    injected_calibrations,
)
from .sampler import read_samples_jsonl, write_samples_jsonl

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DATA_FORMAT = 3
EXIT_FIT_INFEASIBLE = 4
EXIT_INTERNAL = 5


# ---------------------------------------------------------------------------
# Configuration
# ---------------------------------------------------------------------------

def _get(section: dict, key: str, kind, where: str, default=None):
    if key not in section:
        if default is not None:
            return default
        raise ConfigurationError(f"missing config field {where}.{key}")
    val = section[key]
    if kind is float and isinstance(val, int):
        val = float(val)
    if not isinstance(val, kind):
        raise ConfigurationError(
            f"config field {where}.{key} must be {kind.__name__}, "
            f"got {type(val).__name__}")
    return val


def config_from_dict(raw: dict, overrides: dict | None = None) -> PipelineConfig:
    """Validate a parsed config mapping; overrides come from CLI flags."""
    overrides = overrides or {}
    backend = raw.get("backend", {})
    noise = raw.get("noise", {})
    run = raw.get("run", {})
    cal = raw.get("calibration", {})
    est = raw.get("estimator", {})
    fit = raw.get("fit", {})

    kind = _get(backend, "kind", str, "backend", "simulated")
    t_d_us = _get(backend, "t_d_us", float, "backend", 295.0)
    schedules_us = overrides.get("schedules") or \
        run.get("schedules_us", [1.0, 100.0, 500.0])
    if not isinstance(schedules_us, list) or not schedules_us:
        raise ConfigurationError("run.schedules_us must be a non-empty list")
    t_a_values = tuple(float(s) * MICROSECOND for s in schedules_us)

    alpha_raw = backend.get("alpha", {})
    if not isinstance(alpha_raw, dict):
        raise ConfigurationError("backend.alpha must be a table t_a_us -> alpha")
    try:
        alpha_table = tuple(sorted(
            (float(k) * MICROSECOND, float(v)) for k, v in alpha_raw.items()))
    except (TypeError, ValueError) as exc:
        raise ConfigurationError(f"backend.alpha entries must be numeric: {exc}")
    if not alpha_table:
        alpha_table = tuple((t, 25.0) for t in t_a_values)

    exponent = _get(noise, "exponent", float, "noise", 0.7)
    if not 0.0 < exponent < 1.0:
        raise ConfigurationError(
            f"noise.exponent must lie strictly inside (0, 1), got {exponent}")
    amplitude = _get(noise, "amplitude_hz", float, "noise", 23.0)
    if amplitude < 0:
        raise ConfigurationError("noise.amplitude_hz must be >= 0")

    replay = backend.get("replay", {})
    replay_files = tuple(replay.get("files", []))
    if kind == "replay":
        for p in replay_files:
            if not Path(p).is_file():
                raise ConfigurationError(f"replay file does not exist: {p}")

    seg = est.get("segment_length")
    k_max = est.get("k_max")
    try:
        return PipelineConfig(
            backend_kind=kind,
            backend_name=_get(backend, "name", str, "backend", "simulated"),
            n_qubits=int(overrides.get("qubits")
                         or _get(backend, "n_qubits", int, "backend", 256)),
            n_runs=int(overrides.get("runs")
                       or _get(run, "n_runs", int, "run", 1000)),
            t_d=t_d_us * MICROSECOND,
            t_a_values=t_a_values,
            alpha_table=alpha_table,
            amplitude_hz=amplitude,
            exponent=exponent,
            common_mode_fraction=_get(noise, "common_mode_fraction", float,
                                      "noise", 0.0),
            bias_range=_get(backend, "bias_range", float, "backend", 1.0),
            calibration_grid=tuple(cal.get("grid", [0.002, 0.004, 0.008])),
            calibration_runs=_get(cal, "n_runs", int, "calibration", 1000),
            k_max=int(k_max) if k_max is not None else None,
            window=_get(est, "window", str, "estimator", "hann"),
            segment_length=int(seg) if seg is not None else None,
            overlap_fraction=_get(est, "overlap_fraction", float,
                                  "estimator", 0.5),
            detrend=_get(est, "detrend", bool, "estimator", True),
            fit_skip_bins=_get(fit, "skip_bins", int, "fit", 1),
            log10a_bounds=tuple(fit.get("log10_amplitude_bounds", [-1.0, 5.0])),
            exponent_bounds=tuple(fit.get("exponent_bounds", [0.05, 0.95])),
            collapse=_get(fit, "collapse", bool, "fit", False),
            seed=int(overrides["seed"]) if overrides.get("seed") is not None
                 else _get(raw, "seed", int, "<top level>", 0),
            replay_files=replay_files,
        )
    except InvalidArgumentError as exc:
        raise ConfigurationError(str(exc)) from exc


def load_config(path: str | None, overrides: dict | None = None) -> PipelineConfig:
    raw = {}
    if path is not None:
        try:
            with open(path, "rb") as fh:
                raw = tomllib.load(fh)
        except FileNotFoundError:
            raise ConfigurationError(f"config file not found: {path}")
        except tomllib.TOMLDecodeError as exc:
            raise ConfigurationError(f"{path}: invalid TOML: {exc}")
    return config_from_dict(raw, overrides)


def config_as_dict(config: PipelineConfig) -> dict:
    """Effective configuration, microsecond units, JSON-serializable."""
    return {
        "backend": {
            "kind": config.backend_kind, "name": config.backend_name,
            "n_qubits": config.n_qubits, "t_d_us": config.t_d / MICROSECOND,
            "bias_range": config.bias_range,
            "alpha": {f"{t / MICROSECOND:g}": a for t, a in config.alpha_table},
            "replay_files": list(config.replay_files),
        },
        "noise": {
            "amplitude_hz": config.amplitude_hz, "exponent": config.exponent,
            "common_mode_fraction": config.common_mode_fraction,
        },
        "run": {
            "schedules_us": [t / MICROSECOND for t in config.t_a_values],
            "n_runs": config.n_runs,
        },
        "calibration": {
            "grid": list(config.calibration_grid),
            "n_runs": config.calibration_runs,
        },
        "estimator": {
            "window": config.window, "detrend": config.detrend,
            "overlap_fraction": config.overlap_fraction,
            "segment_length": config.segment_length, "k_max": config.k_max,
        },
        "fit": {
            "skip_bins": config.fit_skip_bins,
            "log10_amplitude_bounds": list(config.log10a_bounds),
            "exponent_bounds": list(config.exponent_bounds),
            "collapse": config.collapse,
        },
        "seed": config.seed,
    }


def config_hash(config: PipelineConfig) -> str:
    blob = json.dumps(config_as_dict(config), sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()


# ---------------------------------------------------------------------------
# Persistence helpers
# ---------------------------------------------------------------------------

def _json_default(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def _dump_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True,
                               default=_json_default) + "\n",
                    encoding="utf-8")


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _update_manifest(out: Path, config: PipelineConfig,
                     files: list[Path]) -> None:
    manifest_path = out / "manifest.json"
    manifest = {"version": __version__, "seed": config.seed,
                "config_sha256": config_hash(config), "files": {}}
    if manifest_path.exists():
        old = json.loads(manifest_path.read_text())
        if old.get("config_sha256") == manifest["config_sha256"]:
            manifest["files"] = old.get("files", {})
    for f in files:
        manifest["files"][f.name] = _sha256(f)
    _dump_json(manifest_path, manifest)


def _prepare_out(config: PipelineConfig, out_dir: str) -> Path:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    _dump_json(out / "config.json", config_as_dict(config))
    return out


def _write_csv(path: Path, header: str, rows) -> None:
    with path.open("w", encoding="utf-8") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(_csv_cell(v) for v in row) + "\n")


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))


def _schedule_tag(schedule) -> str:
    return f"ta{schedule.t_a / MICROSECOND:g}us"


# ---------------------------------------------------------------------------
# SVG plot (log-log PSD with fitted dashed curves), template-based
# ---------------------------------------------------------------------------

_PLOT_W, _PLOT_H = 640, 480
_MARGIN = 60
_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e")


def _log_ticks(lo: float, hi: float) -> list[float]:
    lo_e = int(np.floor(np.log10(lo)))
    hi_e = int(np.ceil(np.log10(hi)))
    return [10.0 ** e for e in range(lo_e, hi_e + 1)
            if lo <= 10.0 ** e <= hi]


def render_psd_svg(result: AnalysisResult) -> str:
    """Log-log phi-level PSD per schedule with the fitted model dashed.

    PSD values are drawn in microsecond report units to mirror the model's
    [(A/f)^a + W] bracket.
    """
    fit = result.fit
    xs, ys = [], []
    for sa in result.per_schedule:
        xs.extend(sa.spectrum.frequencies)
        ys.extend(sa.spectrum.values / MICROSECOND)
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = max(min(ys), 1e-12), max(ys)

    def px(f):
        return _MARGIN + (np.log10(f) - np.log10(x_lo)) / \
            (np.log10(x_hi) - np.log10(x_lo)) * (_PLOT_W - 2 * _MARGIN)

    def py(v):
        v = max(v, y_lo)
        return _PLOT_H - _MARGIN - (np.log10(v) - np.log10(y_lo)) / \
            (np.log10(y_hi) - np.log10(y_lo)) * (_PLOT_H - 2 * _MARGIN)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_PLOT_W}" '
        f'height="{_PLOT_H}" viewBox="0 0 {_PLOT_W} {_PLOT_H}">',
        f'<rect width="{_PLOT_W}" height="{_PLOT_H}" fill="white"/>',
        f'<rect x="{_MARGIN}" y="{_MARGIN}" width="{_PLOT_W - 2 * _MARGIN}" '
        f'height="{_PLOT_H - 2 * _MARGIN}" fill="none" stroke="black"/>',
    ]
    for f in _log_ticks(x_lo, x_hi):
        x = px(f)
        parts.append(f'<line x1="{x:.1f}" y1="{_PLOT_H - _MARGIN}" '
                     f'x2="{x:.1f}" y2="{_PLOT_H - _MARGIN + 5}" stroke="black"/>')
        parts.append(f'<text x="{x:.1f}" y="{_PLOT_H - _MARGIN + 18}" '
                     f'font-size="11" text-anchor="middle">1e{int(np.log10(f))}'
                     f'</text>')
    for v in _log_ticks(y_lo, y_hi):
        y = py(v)
        parts.append(f'<line x1="{_MARGIN - 5}" y1="{y:.1f}" '
                     f'x2="{_MARGIN}" y2="{y:.1f}" stroke="black"/>')
        parts.append(f'<text x="{_MARGIN - 8}" y="{y + 4:.1f}" font-size="11" '
                     f'text-anchor="end">1e{int(np.log10(v))}</text>')
    parts.append(f'<text x="{_PLOT_W / 2}" y="{_PLOT_H - 12}" font-size="13" '
                 f'text-anchor="middle">f (Hz)</text>')
    parts.append(f'<text x="16" y="{_PLOT_H / 2}" font-size="13" '
                 f'text-anchor="middle" transform="rotate(-90 16 {_PLOT_H / 2})">'
                 f'S_phi(f) (us)</text>')

    for i, (sa, bg) in enumerate(zip(result.per_schedule, fit.backgrounds)):
        color = _COLORS[i % len(_COLORS)]
        freqs = sa.spectrum.frequencies
        pts = " ".join(f"{px(f):.1f},{py(v / MICROSECOND):.1f}"
                       for f, v in zip(freqs, sa.spectrum.values))
        parts.append(f'<polyline points="{pts}" fill="none" '
                     f'stroke="{color}" stroke-width="1"/>')
        model = model_curve(fit.amplitude_hz, fit.exponent, bg.w, freqs)
        mpts = " ".join(f"{px(f):.1f},{py(v / MICROSECOND):.1f}"
                        for f, v in zip(freqs, model))
        parts.append(f'<polyline points="{mpts}" fill="none" stroke="{color}" '
                     f'stroke-width="1.5" stroke-dasharray="6,4"/>')
        label = f"dt = {sa.schedule.delta_t / MICROSECOND:g} us"
        parts.append(f'<text x="{_PLOT_W - _MARGIN - 8}" '
                     f'y="{_MARGIN + 16 + 16 * i}" font-size="12" '
                     f'text-anchor="end" fill="{color}">{label}</text>')
    parts.append(
        f'<text x="{_MARGIN + 8}" y="{_MARGIN + 16}" font-size="12">'
        f'fit: A = {fit.amplitude_hz:.3g} Hz, a = {fit.exponent:.3g}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_synth(config: PipelineConfig, out_dir: str) -> int:
    out = _prepare_out(config, out_dir)
    sched = config.schedules[0]
    traces = synthesize_ensemble(config.noise_spec, config.n_qubits,
                                 config.n_runs, sched.delta_t,
                                 config.seeds.child("synth"))
    written = []
    for i, tr in enumerate(traces):
        path = out / f"trace_q{i:04d}.csv"
        _write_csv(path, "index,value",
                   ((j, v) for j, v in enumerate(tr.values)))
        written.append(path)
    _update_manifest(out, config, written + [out / "config.json"])
    print(f"wrote {len(written)} trace files to {out}")
    return EXIT_OK


def cmd_run(config: PipelineConfig, out_dir: str) -> int:
    out = _prepare_out(config, out_dir)
    matrices = collect_samples(config)
    written = []
    for sched, matrix in zip(config.schedules, matrices):
        path = out / f"samples_{_schedule_tag(sched)}.jsonl"
        write_samples_jsonl(path, matrix)
        written.append(path)
    _update_manifest(out, config, written + [out / "config.json"])
    print(f"wrote {len(written)} sample files to {out}")
    return EXIT_OK


def cmd_calibrate(config: PipelineConfig, out_dir: str) -> int:
    out = _prepare_out(config, out_dir)
    results = calibrate_schedules(config)
    payload = []
    for sched, cal in zip(config.schedules, results):
        payload.append({
            "t_a_us": sched.t_a / MICROSECOND,
            "delta_t_us": sched.delta_t / MICROSECOND,
            "alpha": cal.alpha, "alpha_stderr": cal.alpha_stderr,
            "points": [{"phi": p, "fraction_minus": frac, "stderr": se}
                       for p, frac, se in cal.points],
            "linear_range_max": cal.linear_range_max,
            "diagnostics": list(cal.diagnostics),
        })
    path = out / "calibration.json"
    _dump_json(path, payload)
    _update_manifest(out, config, [path, out / "config.json"])
    for entry in payload:
        print(f"t_a = {entry['t_a_us']:g} us: alpha = {entry['alpha']:.3f} "
              f"+/- {entry['alpha_stderr']:.3f}")
    return EXIT_OK


def _load_calibrations(config: PipelineConfig, out: Path):
    from .estimation import CalibrationResult
    path = out / "calibration.json"
    if path.exists():
        payload = json.loads(path.read_text())
        if len(payload) != len(config.t_a_values):
            raise ConfigurationError(
                f"{path} has {len(payload)} entries for "
                f"{len(config.t_a_values)} schedules; rerun `hnoise calibrate`")
        return [CalibrationResult(
            alpha=e["alpha"], alpha_stderr=e["alpha_stderr"], points=(),
            linear_range_max=e["linear_range_max"],
            diagnostics=tuple(e.get("diagnostics", ()))) for e in payload]
    if config.backend_kind == "replay":
        return injected_calibrations(config)
    raise ConfigurationError(
        f"no calibration found in {out}; run `hnoise calibrate` first")


def cmd_analyze(config: PipelineConfig, out_dir: str) -> int:
    out = _prepare_out(config, out_dir)
    # Validate every input before any computation starts.
    sample_paths = [out / f"samples_{_schedule_tag(s)}.jsonl"
                    for s in config.schedules]
    if config.backend_kind == "replay":
        sample_paths = [Path(p) for p in config.replay_files]
    missing = [str(p) for p in sample_paths if not p.exists()]
    if missing:
        raise ConfigurationError(
            "missing sample files (run `hnoise run` first): "
            + ", ".join(missing))
    calibrations = _load_calibrations(config, out)
    matrices = [read_samples_jsonl(p) for p in sample_paths]

    result = analyze(config, matrices, calibrations)
    written = []
    for sa in result.per_schedule:
        tag = _schedule_tag(sa.schedule)
        for corr, name in ((sa.beta_correlation, "beta"),
                           (sa.phi_correlation, "phi")):
            path = out / f"correlation_{name}_{tag}.csv"
            _write_csv(path, "lag,t_seconds,value,count,stderr",
                       zip(corr.lags, corr.times, corr.values, corr.counts,
                           corr.stderr if corr.stderr is not None
                           else [None] * corr.lags.size))
            written.append(path)
        spath = out / f"spectrum_phi_{tag}.csv"
        _write_csv(spath, "f_hz,psd_seconds,psd_microseconds",
                   ((f, v, v / MICROSECOND)
                    for f, v in zip(sa.spectrum.frequencies,
                                    sa.spectrum.values)))
        written.append(spath)
        meta = out / f"spectrum_phi_{tag}.meta.json"
        _dump_json(meta, {
            "level": sa.spectrum.level, "window": sa.spectrum.window,
            "segment_length": sa.spectrum.segment_length,
            "n_segments": sa.spectrum.n_segments,
            "f0_removed": sa.spectrum.f0_removed, "alpha": sa.alpha,
            "delta_t_us": sa.schedule.delta_t / MICROSECOND})
        written.append(meta)

    report = fit_report(config, result)
    report["provenance"] = {"config_sha256": config_hash(config),
                            "seed": config.seed, "version": __version__}
    fit_path = out / "fit.json"
    _dump_json(fit_path, report)
    written.append(fit_path)

    svg_path = out / "psd_fit.svg"
    svg_path.write_text(render_psd_svg(result), encoding="utf-8")
    written.append(svg_path)

    _update_manifest(out, config, written + [out / "config.json"])
    print(f"fit: A = {report['A_hz']:.4g} +/- {report['A_stderr']:.2g} Hz, "
          f"a = {report['a']:.4g} +/- {report['a_stderr']:.2g}")
    for entry in report["per_schedule"]:
        print(f"  dt = {entry['delta_t_us']:g} us: alpha = {entry['alpha']:.3f}"
              f", W = {entry['W']:.4g}"
              f"{'' if entry['feasible'] else ' (infeasible)'}")
    return EXIT_OK


def cmd_report(config: PipelineConfig, out_dir: str) -> int:
    out = Path(out_dir)
    fit_path = out / "fit.json"
    if not fit_path.exists():
        raise ConfigurationError(
            f"no fit report in {out}; run `hnoise analyze` first")
    report = json.loads(fit_path.read_text())
    lines = [
        "Hamiltonian-noise benchmark report",
        f"  tool version : {report.get('provenance', {}).get('version', '?')}",
        f"  seed         : {report.get('provenance', {}).get('seed', '?')}",
        f"  config hash  : "
        f"{report.get('provenance', {}).get('config_sha256', '?')[:16]}...",
        "",
        f"  flux-noise amplitude A = {report['A_hz']:.4g} "
        f"+/- {report['A_stderr']:.2g} Hz",
        f"  flux-noise exponent  a = {report['a']:.4g} "
        f"+/- {report['a_stderr']:.2g}",
        "",
        "  per schedule:",
    ]
    for e in report["per_schedule"]:
        rms = e.get("rms_phi")
        lines.append(
            f"    dt = {e['delta_t_us']:7g} us | alpha = {e['alpha']:7.3f} | "
            f"W = {e['W']:.4g}{'' if e['feasible'] else ' (infeasible)'} | "
            f"rms phi = {'n/a' if rms is None else format(rms, '.3g')} | "
            f"sum rule {e['sum_rule_integral'] / e['sum_rule_target']:.3f} "
            f"of target")
    flagged = [e for e in report.get("low_frequency_excess", [])
               if e["flagged"]]
    if flagged:
        lines.append("")
        lines.append("  low-frequency excess flagged at dt = "
                     + ", ".join(f"{e['delta_t_us']:g} us" for e in flagged))
    if report.get("flags"):
        lines.append("")
        lines.extend(f"  note: {f}" for f in report["flags"])
    lines.append("")
    lines.append(f"  {report.get('alpha_note', '')}")
    text = "\n".join(lines) + "\n"
    (out / "report.txt").write_text(text, encoding="utf-8")
    print(text, end="")
    return EXIT_OK


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------

_COMMANDS = {
    "synth": cmd_synth,
    "run": cmd_run,
    "calibrate": cmd_calibrate,
    "analyze": cmd_analyze,
    "report": cmd_report,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hnoise",
        description="Benchmark Hamiltonian (bias) noise in quantum annealers "
                    "from degenerate annealing runs.")
    parser.add_argument("--version", action="version",
                        version=f"hnoise {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
            ("synth", "write ground-truth noise traces"),
            ("run", "execute degenerate protocols, write sample JSONL"),
            ("calibrate", "run bias sweeps and fit alpha per schedule"),
            ("analyze", "estimate correlations and spectra, fit the model"),
            ("report", "summarize an existing analysis directory")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", default=None, help="TOML config file")
        p.add_argument("--seed", type=int, default=None,
                       help="override the master seed")
        p.add_argument("--out", default="out", help="output directory")
        p.add_argument("--schedules", default=None,
                       help="comma-separated annealing times in microseconds")
        p.add_argument("--runs", type=int, default=None,
                       help="override run count N per schedule")
        p.add_argument("--qubits", type=int, default=None,
                       help="override qubit count n")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        schedules = None
        if args.schedules is not None:
            try:
                schedules = [float(s) for s in args.schedules.split(",") if s]
            except ValueError:
                raise ConfigurationError(
                    f"--schedules must be comma-separated numbers, "
                    f"got {args.schedules!r}")
        config = load_config(args.config, {
            "seed": args.seed, "schedules": schedules,
            "runs": args.runs, "qubits": args.qubits})
        return _COMMANDS[args.command](config, args.out)
    except (ConfigurationError, CalibrationRangeError, InvalidArgumentError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DataFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA_FORMAT
    except FitInfeasibleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FIT_INFEASIBLE
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
