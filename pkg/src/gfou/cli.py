"""Command-line surface: config-driven simulation and validation campaigns.

Subcommands: ``simulate`` (replicated paths + per-time summary),
``validate-cov`` (closed form / series / quadrature / optional Monte Carlo
covariance triangle), ``hurst`` (variance-time and rescaled-range
estimators with block-bootstrap errors), ``pvariation`` (stabilization /
divergence study against the analytic classifier), and ``gate`` (existence
and stationarity verdicts without simulating).

Configuration is a TOML file with nested sections; unknown keys are errors.
All randomness flows from one base seed: replication r uses the stream
seeded by (base_seed, r), so outputs are byte-identical for a given
effective config regardless of worker count.  Every output file embeds the
SHA-256 of the effective config and the seed in '# ' header comments; CSV
numbers carry 17 significant digits; a summary JSON sits alongside.

Exit codes: 0 success, 2 validation failure, 3 gate failure, 4 config error.
The default output directory is, in order: --out, the GFOU_OUT_DIR
environment variable, the config's run.out, then ./gfou_results.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .covariance import covariance_report, mc_covariance
from .fbm import HurstIndex, SamplePath, sample_fbm_uniform
from .levy import (
    GateError,
    JumpLaw,
    LevyModel,
    PVariation,
    ThetaConstants,
    alpha_stable,
    brownian_motion_with_drift,
    classify_p_variation,
    compound_poisson,
    gfou_existence_gate,
    pure_drift,
    sample_levy,
    theta_constants,
)
from .pathint import p_variation_estimate
from .process import (
    GfouSpec,
    InitialValue,
    SdeSpec,
    euler_sde,
    simulate_fou,
    simulate_gfou,
    simulate_gfou_many,
    simulate_gou,
    simulate_w,
)

__all__ = [
    "ConfigError",
    "ValidationFailure",
    "EstimatorResult",
    "load_config",
    "estimate_hurst",
    "run_simulate",
    "run_validate_covariance",
    "run_hurst",
    "run_pvariation_study",
    "run_gate",
    "main",
]

_OUT_ENV_VAR = "GFOU_OUT_DIR"


class ConfigError(ValueError):
    """The experiment configuration is missing, malformed, or mistyped."""


class ValidationFailure(RuntimeError):
    """A validation campaign found a disagreement beyond tolerance."""


@dataclass(frozen=True)
class EstimatorResult:
    """A named point estimate with its uncertainty and sample size."""

    name: str
    point_estimate: float
    stderr_or_ci: float
    n_used: int
    method: str

    def __post_init__(self) -> None:
        if not (math.isfinite(self.point_estimate) and math.isfinite(self.stderr_or_ci)):
            raise ValueError(f"estimator values must be finite, got {self}")


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------

_NUM = (int, float)
_MODEL_KEYS = {
    "kind": (str,),
    "mu": _NUM,
    "sigma": _NUM,
    "rate": _NUM,
    "drift": _NUM,
    "gaussian_a": _NUM,
    "alpha": _NUM,
    "c1": _NUM,
    "c2": _NUM,
    "jump": {
        "law": (str,),
        "size": _NUM,
        "low": _NUM,
        "high": _NUM,
        "mean": _NUM,
        "std": _NUM,
    },
}
_SCHEMA = {
    "process": {
        "kind": (str,),
        "hurst": _NUM,
        "horizon": _NUM,
        "mesh": _NUM,
        "lambda": _NUM,
        "x0": _NUM,
        "initial": (str, int, float),
        "t_trunc": _NUM,
        "drift_a": _NUM,
        "exponent": _MODEL_KEYS,
        "noise": _MODEL_KEYS,
        "driver": _MODEL_KEYS,
    },
    "run": {
        "replications": (int,),
        "seed": (int,),
        "jobs": (int,),
        "out": (str,),
        "thin": (int,),
    },
    "validate": {
        "lags": (list,),
        "tolerance": _NUM,
        "series_terms": (int,),
        "mc_replications": (int,),
        "analytic_theta1": _NUM,
        "analytic_theta2": _NUM,
    },
    "hurst": {
        "source": (str,),
        "n": (int,),
        "method": (str,),
    },
    "pvariation": {
        "target": (str,),
        "p_grid": (list,),
        "levels": (list,),
        "replications": (int,),
        "horizon": _NUM,
        "stabilization_slope": _NUM,
    },
}


def _check_keys(section: dict, schema: dict, path: str) -> None:
    for key, value in section.items():
        where = f"{path}.{key}" if path else key
        if key not in schema:
            raise ConfigError(f"unknown config key {where!r}")
        allowed = schema[key]
        if isinstance(allowed, dict):
            if not isinstance(value, dict):
                raise ConfigError(f"config key {where!r} must be a table")
            _check_keys(value, allowed, where)
        elif not isinstance(value, allowed) or isinstance(value, bool):
            names = "/".join(t.__name__ for t in allowed)
            raise ConfigError(f"config key {where!r} must have type {names}")


def load_config(path: str | Path) -> dict:
    """Parse and schema-check a TOML experiment configuration."""
    try:
        with open(path, "rb") as fh:
            cfg = tomllib.load(fh)
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid TOML: {exc}") from exc
    _check_keys(cfg, _SCHEMA, "")
    return cfg


def _section(cfg: dict, name: str) -> dict:
    part = cfg.get(name)
    if part is None:
        raise ConfigError(f"config is missing the [{name}] section")
    return part


def _require(section: dict, key: str, where: str):
    if key not in section:
        raise ConfigError(f"config is missing key {key!r} in [{where}]")
    return section[key]


def _config_hash(cfg: dict) -> str:
    canon = json.dumps(cfg, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(canon.encode()).hexdigest()


def _rep_rng(seed: int, rep: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(rep,)))


# ---------------------------------------------------------------------------
# model and grid builders
# ---------------------------------------------------------------------------

def _parse_jump_law(section: dict, where: str) -> JumpLaw:
    law = _require(section, "law", where)
    try:
        if law == "constant":
            return JumpLaw.constant(_require(section, "size", where))
        if law == "uniform":
            return JumpLaw.uniform(
                _require(section, "low", where), _require(section, "high", where)
            )
        if law == "normal":
            return JumpLaw.normal(
                _require(section, "mean", where), _require(section, "std", where)
            )
        if law == "exponential":
            return JumpLaw.exponential(_require(section, "mean", where))
    except ValueError as exc:
        raise ConfigError(f"bad jump law in [{where}]: {exc}") from exc
    raise ConfigError(f"unknown jump law {law!r} in [{where}]")


def _parse_levy(section: dict, where: str) -> LevyModel:
    kind = _require(section, "kind", where)
    try:
        if kind == "bm_drift":
            return brownian_motion_with_drift(
                _require(section, "mu", where), _require(section, "sigma", where)
            )
        if kind == "drift":
            return pure_drift(_require(section, "mu", where))
        if kind == "compound_poisson":
            law = _parse_jump_law(_require(section, "jump", where), f"{where}.jump")
            return compound_poisson(
                _require(section, "rate", where),
                law,
                drift=section.get("drift", 0.0),
                gaussian_a=section.get("gaussian_a", 0.0),
            )
        if kind == "stable":
            return alpha_stable(
                _require(section, "alpha", where),
                _require(section, "c1", where),
                _require(section, "c2", where),
            )
    except ValueError as exc:
        raise ConfigError(f"bad model in [{where}]: {exc}") from exc
    raise ConfigError(f"unknown model kind {kind!r} in [{where}]")


def _parse_hurst(proc: dict) -> HurstIndex:
    try:
        return HurstIndex(_require(proc, "hurst", "process"))
    except ValueError as exc:
        raise ConfigError(f"bad hurst index: {exc}") from exc


def _parse_grid(proc: dict) -> np.ndarray:
    horizon = _require(proc, "horizon", "process")
    mesh = _require(proc, "mesh", "process")
    if not (horizon > 0 and mesh > 0):
        raise ConfigError(f"need horizon > 0 and mesh > 0, got ({horizon}, {mesh})")
    n_cells = round(horizon / mesh)
    if n_cells < 1 or abs(n_cells * mesh - horizon) > 1e-9 * horizon:
        raise ConfigError(
            f"mesh {mesh} must divide horizon {horizon} into whole cells"
        )
    return np.linspace(0.0, horizon, n_cells + 1)


def _parse_initial(proc: dict) -> InitialValue:
    raw = proc.get("initial", 0.0)
    if raw == "stationary":
        return InitialValue.stationary(t_trunc=proc.get("t_trunc"))
    if isinstance(raw, str):
        raise ConfigError(f"initial must be a number or 'stationary', got {raw!r}")
    return InitialValue.constant(float(raw))


# ---------------------------------------------------------------------------
# output helpers
# ---------------------------------------------------------------------------

def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, str):
        return value
    return f"{value:.17g}"


def _write_csv(
    path: Path,
    header_lines: Iterable[str],
    colnames: Sequence[str],
    columns: Sequence[Sequence],
) -> None:
    with open(path, "w", newline="\n") as fh:
        for line in header_lines:
            fh.write(f"# {line}\n")
        fh.write(",".join(colnames) + "\n")
        for row in zip(*columns):
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _write_json(path: Path, payload: dict) -> None:
    with open(path, "w", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _out_dir(cfg: dict, override: str | None) -> Path:
    if override:
        out = override
    elif os.environ.get(_OUT_ENV_VAR):
        out = os.environ[_OUT_ENV_VAR]
    else:
        out = cfg.get("run", {}).get("out", "gfou_results")
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _headers(cfg: dict, seed: int, extra: Sequence[str] = ()) -> list[str]:
    return [f"config_sha256={_config_hash(cfg)}", f"seed={seed}", *extra]


# ---------------------------------------------------------------------------
# simulate
# ---------------------------------------------------------------------------

def _simulate_one(cfg: dict, rep: int) -> tuple[np.ndarray, dict[str, np.ndarray]]:
    """One replication on the stream (seed, rep); returns times and columns."""
    proc = _section(cfg, "process")
    kind = _require(proc, "kind", "process")
    seed = _section(cfg, "run").get("seed", 0)
    rng = _rep_rng(seed, rep)
    grid = _parse_grid(proc)
    if kind == "fou":
        path = simulate_fou(
            _require(proc, "lambda", "process"),
            _parse_hurst(proc),
            proc.get("x0", 0.0),
            grid,
            rng,
        )
        return path.times, {"value": path.values}
    if kind == "gou":
        path = simulate_gou(
            _parse_levy(_require(proc, "exponent", "process"), "process.exponent"),
            _parse_levy(_require(proc, "noise", "process"), "process.noise"),
            float(proc.get("initial", 0.0)),
            grid,
            rng,
        )
        return path.times, {"value": path.values}
    if kind == "gfou":
        spec = GfouSpec(
            _parse_levy(_require(proc, "exponent", "process"), "process.exponent"),
            _parse_hurst(proc),
            _parse_initial(proc),
            grid,
        )
        path = simulate_gfou(spec, rng)
        return path.times, {"value": path.values}
    if kind == "w":
        pair = simulate_w(
            _parse_hurst(proc),
            float(proc.get("initial", 2.0)),
            grid,
            rng,
            drift_a=proc.get("drift_a", 0.0),
        )
        return pair.closed.times, {"closed": pair.closed.values, "rs": pair.rs.values}
    if kind == "sde":
        spec = SdeSpec(
            _parse_levy(_require(proc, "driver", "process"), "process.driver"),
            _parse_hurst(proc),
            float(proc.get("initial", 0.0)),
            grid,
        )
        path = euler_sde(spec, rng)
        return path.times, {"value": path.values}
    raise ConfigError(f"unknown process kind {kind!r}")


def _simulate_worker(payload: tuple[dict, int]) -> tuple[int, np.ndarray, dict]:
    cfg, rep = payload
    times, cols = _simulate_one(cfg, rep)
    return rep, times, cols


def run_simulate(cfg: dict, out_dir: Path, jobs: int = 1) -> dict:
    """Replicated path simulation with per-time-slice summary statistics.

    Writes rep_XXXXX.csv per replication (thinned by run.thin), a
    summary.csv of mean/variance per base-grid time across replications,
    and summary.json.  Replication r draws from the (seed, r) stream, so
    outputs do not depend on the worker count.
    """
    run = _section(cfg, "run")
    reps = run.get("replications", 1)
    if reps < 1:
        raise ConfigError(f"run.replications must be >= 1, got {reps}")
    seed = run.get("seed", 0)
    thin = run.get("thin", 1)
    if thin < 1:
        raise ConfigError(f"run.thin must be >= 1, got {thin}")
    base_grid = _parse_grid(_section(cfg, "process"))
    payloads = [(cfg, r) for r in range(reps)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_simulate_worker, payloads))
    else:
        results = [_simulate_worker(p) for p in payloads]
    results.sort(key=lambda item: item[0])

    at_base = np.empty((reps, base_grid.size))
    main_col = None
    for rep, times, cols in results:
        main_col = next(iter(cols))
        idx = np.searchsorted(times, base_grid)
        at_base[rep] = cols[main_col][idx]
        sel = np.arange(0, times.size, thin)
        _write_csv(
            out_dir / f"rep_{rep:05d}.csv",
            _headers(cfg, seed, [f"replication={rep}"]),
            ["time", *cols],
            [times[sel], *(c[sel] for c in cols.values())],
        )
    mean = at_base.mean(axis=0)
    var = at_base.var(axis=0, ddof=1) if reps > 1 else np.zeros(base_grid.size)
    _write_csv(
        out_dir / "summary.csv",
        _headers(cfg, seed, [f"replications={reps}"]),
        ["time", "mean", "variance"],
        [base_grid, mean, var],
    )
    summary = {
        "command": "simulate",
        "config_sha256": _config_hash(cfg),
        "seed": seed,
        "replications": reps,
        "column": main_col,
        "terminal_mean": float(mean[-1]),
        "terminal_variance": float(var[-1]),
    }
    _write_json(out_dir / "summary.json", summary)
    return summary


# ---------------------------------------------------------------------------
# validate-cov
# ---------------------------------------------------------------------------

def _mc_stationary_values(
    cfg: dict, lags: Sequence[float], n_reps: int
) -> tuple[np.ndarray, np.ndarray]:
    """Stationary values at times {0} + lags for n_reps replications."""
    proc = _section(cfg, "process")
    mesh = _require(proc, "mesh", "process")
    horizon = max(lags)
    n_cells = round(horizon / mesh)
    if abs(n_cells * mesh - horizon) > 1e-9 * horizon:
        raise ConfigError(f"mesh {mesh} must divide the largest lag {horizon}")
    grid = np.linspace(0.0, horizon, n_cells + 1)
    spec = GfouSpec(
        _parse_levy(_require(proc, "exponent", "process"), "process.exponent"),
        _parse_hurst(proc),
        InitialValue.stationary(t_trunc=proc.get("t_trunc")),
        grid,
    )
    seed = _section(cfg, "run").get("seed", 0)
    if spec.levy.jumps is None:
        times, values = simulate_gfou_many(spec, _rep_rng(seed, 0), n_reps)
    else:
        rows = []
        times = grid
        for rep in range(n_reps):
            path = simulate_gfou(spec, _rep_rng(seed, rep))
            rows.append(path.values[np.searchsorted(path.times, grid)])
        values = np.asarray(rows)
    cols = np.empty((n_reps, len(lags) + 1))
    cols[:, 0] = values[:, 0]
    for j, s in enumerate(lags):
        k = np.searchsorted(times, s)
        if not math.isclose(times[min(k, times.size - 1)], s, rel_tol=0, abs_tol=1e-9):
            raise ConfigError(f"lag {s} is not on the simulation grid")
        cols[:, j + 1] = values[:, k]
    return np.asarray(lags, dtype=float), cols


def run_validate_covariance(
    cfg: dict, out_dir: Path, tolerance: float | None = None
) -> dict:
    """Closed form vs series vs quadrature oracle (vs optional Monte Carlo).

    One CovarianceReport row per configured lag; raises
    :class:`ValidationFailure` if any closed-vs-oracle flag is false.
    """
    val = cfg.get("validate", {})
    lags = val.get("lags", [0.5, 1.0, 2.0, 5.0, 10.0])
    if not lags or not all(isinstance(s, _NUM) and s > 0 for s in lags):
        raise ConfigError("validate.lags must be a list of positive numbers")
    tol = tolerance if tolerance is not None else val.get("tolerance", 1e-5)
    n_series = val.get("series_terms", 50)
    proc = _section(cfg, "process")
    model = _parse_levy(_require(proc, "exponent", "process"), "process.exponent")
    h = _parse_hurst(proc)
    try:
        theta = theta_constants(model)
    except ValueError as exc:
        raise GateError(str(exc)) from exc
    if "analytic_theta1" in val or "analytic_theta2" in val:
        theta = ThetaConstants(
            val.get("analytic_theta1", theta.theta1),
            val.get("analytic_theta2", theta.theta2),
        )
    if not theta.valid_for_stationary:
        raise GateError(
            "covariance validation needs the stationary regime theta2 > 0, "
            f"got theta2 = {theta.theta2:.6g}"
        )
    mc_reps = val.get("mc_replications", 0)
    mc_by_lag: dict[float, tuple[float, float]] = {}
    if mc_reps > 0:
        _, cols = _mc_stationary_values(cfg, lags, mc_reps)
        for j, s in enumerate(lags):
            mc_by_lag[s] = mc_covariance(cols[:, 0], cols[:, j + 1])

    reports = []
    for s in lags:
        mc_est, mc_se = mc_by_lag.get(s, (None, None))
        reports.append(
            covariance_report(
                theta, h, s,
                mc_estimate=mc_est, mc_stderr=mc_se,
                n_series=n_series, tol_oracle=tol,
            )
        )
    seed = _section(cfg, "run").get("seed", 0)
    colnames = ["s", "analytic", "series", "oracle", "mc", "mc_stderr",
                "agree_oracle", "agree_series", "agree_mc"]
    _write_csv(
        out_dir / "covariance_report.csv",
        _headers(cfg, seed, [f"tolerance={tol:.17g}"]),
        colnames,
        [
            [r.lag_s for r in reports],
            [r.analytic for r in reports],
            [r.series for r in reports],
            [r.oracle for r in reports],
            [r.mc_estimate for r in reports],
            [r.mc_stderr for r in reports],
            [r.agreement["closed_vs_oracle"] for r in reports],
            [r.agreement["closed_vs_series"] for r in reports],
            [r.agreement.get("closed_vs_mc", "") for r in reports],
        ],
    )
    summary = {
        "command": "validate-cov",
        "config_sha256": _config_hash(cfg),
        "seed": seed,
        "tolerance": tol,
        "lags": [float(s) for s in lags],
        "oracle_agreement": [bool(r.agreement["closed_vs_oracle"]) for r in reports],
        "series_agreement": [bool(r.agreement["closed_vs_series"]) for r in reports],
    }
    if mc_by_lag:
        summary["mc_agreement"] = [
            bool(r.agreement["closed_vs_mc"]) for r in reports
        ]
    _write_json(out_dir / "summary.json", summary)
    bad = [s for s, ok in zip(lags, summary["oracle_agreement"]) if not ok]
    if bad:
        raise ValidationFailure(
            f"closed form disagrees with the quadrature oracle beyond "
            f"{tol:g} relative at lags {bad}"
        )
    return summary


# ---------------------------------------------------------------------------
# hurst estimation
# ---------------------------------------------------------------------------

def _block_sizes(n: int, smallest: int) -> np.ndarray:
    sizes = []
    m = smallest
    while m <= n // 8:
        sizes.append(m)
        m *= 2
    return np.asarray(sizes)


def _variance_time_h(increments: np.ndarray) -> float:
    n = increments.size
    sizes = _block_sizes(n, 1)
    logv = []
    for m in sizes:
        k = n // m
        means = increments[: k * m].reshape(k, m).mean(axis=1)
        logv.append(math.log(means.var(ddof=1)))
    slope = np.polyfit(np.log(sizes), logv, 1)[0]
    return 1.0 + 0.5 * slope


def _rescaled_range_h(increments: np.ndarray) -> float:
    n = increments.size
    sizes = _block_sizes(n, 8)
    logrs = []
    for m in sizes:
        k = n // m
        blocks = increments[: k * m].reshape(k, m)
        dev = np.cumsum(blocks - blocks.mean(axis=1, keepdims=True), axis=1)
        r = dev.max(axis=1) - dev.min(axis=1)
        s = blocks.std(axis=1, ddof=1)
        ok = s > 0.0
        logrs.append(math.log(np.mean(r[ok] / s[ok])))
    slope = np.polyfit(np.log(sizes), logrs, 1)[0]
    return float(slope)


_HURST_METHODS = {"variance-time": _variance_time_h, "rs": _rescaled_range_h}


def estimate_hurst(
    data: SamplePath | np.ndarray,
    method: str = "variance-time",
    rng: np.random.Generator | None = None,
    n_boot: int = 50,
) -> EstimatorResult:
    """Roughness/memory exponent from equispaced increments.

    ``variance-time`` regresses log Var(block means) on log block size
    (slope 2H - 2); ``rs`` is the classical rescaled-range slope.  The
    standard error comes from a moving-block bootstrap (block length
    ~ sqrt(n), ``n_boot`` resamples).  A SamplePath input must be on a
    uniform grid and is differenced; an array input is the increments
    themselves.  Needs at least 512 increments.
    """
    if isinstance(data, SamplePath):
        dt = np.diff(data.times)
        if not np.allclose(dt, dt[0], rtol=1e-9, atol=0.0):
            raise ValueError("Hurst estimation needs a uniform grid")
        increments = np.diff(data.values)
    else:
        increments = np.asarray(data, dtype=float)
    if increments.ndim != 1 or increments.size < 512:
        raise ValueError(
            f"need >= 512 equispaced increments, got {increments.size}"
        )
    if method not in _HURST_METHODS:
        raise ValueError(f"unknown method {method!r}; use variance-time or rs")
    estimator = _HURST_METHODS[method]
    point = float(estimator(increments))
    if rng is None:
        rng = np.random.default_rng(0)
    n = increments.size
    block = max(16, int(math.sqrt(n)))
    n_blocks = math.ceil(n / block)
    boot = np.empty(n_boot)
    for i in range(n_boot):
        starts = rng.integers(0, n - block + 1, n_blocks)
        sample = np.concatenate([increments[s:s + block] for s in starts])[:n]
        boot[i] = estimator(sample)
    stderr = float(np.std(boot, ddof=1))
    return EstimatorResult("hurst", point, stderr, n, method)


def run_hurst(cfg: dict, out_dir: Path) -> dict:
    """Estimate H from configured increments with both estimators."""
    hcfg = cfg.get("hurst", {})
    source = hcfg.get("source", "fbm")
    n = hcfg.get("n", 2 ** 14)
    method = hcfg.get("method", "both")
    methods = ["variance-time", "rs"] if method == "both" else [method]
    proc = _section(cfg, "process")
    seed = _section(cfg, "run").get("seed", 0)
    rng = _rep_rng(seed, 0)
    if source == "fbm":
        h = _parse_hurst(proc)
        increments = np.diff(sample_fbm_uniform(h, n, 1.0, rng)[0])
    elif source == "process":
        times, cols = _simulate_one(cfg, 0)
        grid = _parse_grid(proc)
        idx = np.searchsorted(times, grid)
        increments = np.diff(next(iter(cols.values()))[idx])
    else:
        raise ConfigError(f"hurst.source must be fbm or process, got {source!r}")
    results = [
        estimate_hurst(increments, m, rng=_rep_rng(seed, 1 + i))
        for i, m in enumerate(methods)
    ]
    _write_csv(
        out_dir / "hurst.csv",
        _headers(cfg, seed, [f"source={source}"]),
        ["method", "estimate", "stderr", "n_used"],
        [
            [r.method for r in results],
            [r.point_estimate for r in results],
            [r.stderr_or_ci for r in results],
            [float(r.n_used) for r in results],
        ],
    )
    summary = {
        "command": "hurst",
        "config_sha256": _config_hash(cfg),
        "seed": seed,
        "source": source,
        "estimates": {r.method: r.point_estimate for r in results},
        "stderrs": {r.method: r.stderr_or_ci for r in results},
    }
    _write_json(out_dir / "summary.json", summary)
    for r in results:
        print(f"H[{r.method}] = {r.point_estimate:.4f} +/- {r.stderr_or_ci:.4f}")
    return summary


# ---------------------------------------------------------------------------
# p-variation study
# ---------------------------------------------------------------------------

def _pvariation_path(
    cfg: dict, target: str, n_points: int, horizon: float, rng: np.random.Generator
) -> SamplePath:
    proc = _section(cfg, "process")
    if target == "noise":
        h = _parse_hurst(proc)
        dt = horizon / n_points
        values = sample_fbm_uniform(h, n_points, dt, rng)[0]
        return SamplePath(np.linspace(0.0, horizon, n_points + 1), values)
    if target == "exponent":
        model = _parse_levy(_require(proc, "exponent", "process"), "process.exponent")
        return sample_levy(model, np.linspace(0.0, horizon, n_points + 1), rng)
    raise ConfigError(f"pvariation.target must be noise or exponent, got {target!r}")


def _expected_verdict(cfg: dict, target: str, p: float) -> str:
    proc = _section(cfg, "process")
    if target == "noise":
        return "finite" if p > 1.0 / _parse_hurst(proc).h else "infinite"
    model = _parse_levy(_require(proc, "exponent", "process"), "process.exponent")
    return classify_p_variation(model, p).value


def run_pvariation_study(cfg: dict, out_dir: Path) -> dict:
    """Median p-variation estimates per (p, resolution) with verdicts.

    The empirical verdict fits the log-log slope of the median estimate
    against the point count: slopes above pvariation.stabilization_slope
    read as divergence.  The empirical transition (midpoint between the
    last diverging and first stabilizing p) is compared with the analytic
    one from the classifier.
    """
    pv = cfg.get("pvariation", {})
    target = pv.get("target", "noise")
    p_grid = pv.get("p_grid", [round(0.8 + 0.1 * i, 10) for i in range(13)])
    levels = pv.get("levels", [2 ** 11, 2 ** 12, 2 ** 13])
    reps = pv.get("replications", 20)
    horizon = pv.get("horizon", 1.0)
    slope_tol = pv.get("stabilization_slope", 0.05)
    if len(levels) < 2 or sorted(levels) != list(levels):
        raise ConfigError("pvariation.levels must be an increasing list of >= 2 sizes")
    seed = _section(cfg, "run").get("seed", 0)

    paths = [
        [_pvariation_path(cfg, target, n, horizon, _rep_rng(seed, r))
         for n in levels]
        for r in range(reps)
    ]
    medians = np.empty((len(p_grid), len(levels)))
    for i, p in enumerate(p_grid):
        for j in range(len(levels)):
            medians[i, j] = float(np.median(
                [p_variation_estimate(paths[r][j], p) for r in range(reps)]
            ))
    log_n = np.log(np.asarray(levels, dtype=float))
    slopes = [float(np.polyfit(log_n, np.log(medians[i]), 1)[0])
              for i in range(len(p_grid))]
    empirical = ["diverges" if sl > slope_tol else "stabilizes" for sl in slopes]
    expected = [_expected_verdict(cfg, target, p) for p in p_grid]
    agree = [
        (e == "diverges") == (x == "infinite")
        for e, x in zip(empirical, expected)
    ]

    rows_p, rows_n, rows_med = [], [], []
    for i, p in enumerate(p_grid):
        for j, n in enumerate(levels):
            rows_p.append(float(p))
            rows_n.append(float(n))
            rows_med.append(medians[i, j])
    _write_csv(
        out_dir / "pvariation.csv",
        _headers(cfg, seed, [f"target={target}", f"replications={reps}"]),
        ["p", "n_points", "median_estimate"],
        [rows_p, rows_n, rows_med],
    )
    _write_csv(
        out_dir / "pvariation_verdicts.csv",
        _headers(cfg, seed, [f"stabilization_slope={slope_tol:.17g}"]),
        ["p", "slope", "empirical", "expected", "agree"],
        [[float(p) for p in p_grid], slopes, empirical, expected, agree],
    )
    transition = None
    for i in range(1, len(p_grid)):
        if empirical[i - 1] == "diverges" and empirical[i] == "stabilizes":
            transition = 0.5 * (p_grid[i - 1] + p_grid[i])
    summary = {
        "command": "pvariation",
        "config_sha256": _config_hash(cfg),
        "seed": seed,
        "target": target,
        "empirical_transition": transition,
        "agreement_fraction": float(np.mean(agree)),
    }
    _write_json(out_dir / "summary.json", summary)
    return summary


# ---------------------------------------------------------------------------
# gate
# ---------------------------------------------------------------------------

def run_gate(cfg: dict) -> dict:
    """Print existence/stationarity gate verdicts without simulating."""
    proc = _section(cfg, "process")
    model = _parse_levy(_require(proc, "exponent", "process"), "process.exponent")
    h = _parse_hurst(proc)
    result = gfou_existence_gate(model, h)
    verdicts = {"existence": {"ok": result.ok, "reason": result.reason,
                              "witness_p": result.witness_p}}
    print(f"existence gate: {'PASS' if result.ok else 'FAIL'} - {result.reason}")
    if proc.get("initial") == "stationary":
        try:
            theta = theta_constants(model)
            ok = theta.valid_for_stationary and h.h > 0.5
            reason = (
                f"theta1 = {theta.theta1:.6g}, theta2 = {theta.theta2:.6g}; "
                + ("stationary version exists (theta2 > 0 drives the exponent "
                   "to +infinity and the improper integral converges in L2)"
                   if theta.valid_for_stationary
                   else "theta2 <= 0: no L2 stationary version")
            )
            if theta.valid_for_stationary and h.h <= 0.5:
                reason += "; but H <= 1/2 is outside the stationary theory"
        except ValueError as exc:
            ok, reason = False, str(exc)
        verdicts["stationarity"] = {"ok": ok, "reason": reason}
        print(f"stationarity gate: {'PASS' if ok else 'FAIL'} - {reason}")
    if not all(v["ok"] for v in verdicts.values()):
        raise GateError("; ".join(
            v["reason"] for v in verdicts.values() if not v["ok"]
        ))
    return verdicts


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def _apply_overrides(cfg: dict, args: argparse.Namespace) -> dict:
    if args.seed is not None:
        cfg.setdefault("run", {})["seed"] = args.seed
    if args.reps is not None:
        if args.command == "simulate":
            cfg.setdefault("run", {})["replications"] = args.reps
        elif args.command == "validate-cov":
            cfg.setdefault("validate", {})["mc_replications"] = args.reps
        elif args.command == "pvariation":
            cfg.setdefault("pvariation", {})["replications"] = args.reps
    if getattr(args, "tolerance", None) is not None:
        cfg.setdefault("validate", {})["tolerance"] = args.tolerance
    return cfg


def main(argv: Sequence[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="gfou",
        description="Simulation and validation lab for fractional OU "
                    "processes with random Lévy discounting.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in [
        ("simulate", "replicated path simulation with summaries"),
        ("validate-cov", "closed form vs series vs quadrature vs Monte Carlo"),
        ("hurst", "variance-time and rescaled-range H estimates"),
        ("pvariation", "stabilization/divergence study over a p grid"),
        ("gate", "existence/stationarity verdicts without simulating"),
    ]:
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--config", required=True, help="TOML experiment config")
        p.add_argument("--seed", type=int, default=None, help="base seed override")
        p.add_argument("--reps", type=int, default=None, help="replication override")
        p.add_argument("--out", default=None, help="output directory")
        p.add_argument("--jobs", type=int, default=None, help="worker pool size")
        p.add_argument("--tolerance", type=float, default=None,
                       help="validation tolerance override")
    args = parser.parse_args(argv)
    try:
        cfg = _apply_overrides(load_config(args.config), args)
        if args.command == "gate":
            run_gate(cfg)
            return 0
        out_dir = _out_dir(cfg, args.out)
        if args.command == "simulate":
            # the worker count is an execution detail: it must not enter
            # the hashed effective config, and results never depend on it
            jobs = args.jobs if args.jobs is not None else cfg.get("run", {}).get("jobs", 1)
            run_simulate(cfg, out_dir, jobs=jobs)
        elif args.command == "validate-cov":
            run_validate_covariance(cfg, out_dir)
        elif args.command == "hurst":
            run_hurst(cfg, out_dir)
        elif args.command == "pvariation":
            run_pvariation_study(cfg, out_dir)
        return 0
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 4
    except GateError as exc:
        print(f"gate failure: {exc}", file=sys.stderr)
        return 3
    except ValidationFailure as exc:
        print(f"validation failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
