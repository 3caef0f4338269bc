"""End-to-end tests for the command-line surface.

Tests cover:
  1. Config loading: schema enforcement (unknown keys, wrong types,
     malformed TOML, missing files all raise ConfigError).
  2. The Hurst estimators: recovery of a known index from exact noise,
     input validation, bootstrap standard errors.
  3. Each subcommand through main(): exit codes (0 success, 2 validation
     failure, 3 gate failure, 4 config error), output files with embedded
     config hash and seed, and the summary JSON payloads.
  4. Determinism: byte-identical outputs across reruns and across worker
     counts, seed overrides changing results, output-directory precedence
     (--out, then the environment variable, then run.out).
"""

import json
import math
from pathlib import Path

import numpy as np
import pytest

from gfou.cli import (
    ConfigError,
    EstimatorResult,
    estimate_hurst,
    load_config,
    main,
)
from gfou.fbm import HurstIndex, SamplePath, sample_fbm_uniform

# ---------------------------------------------------------------------------
# config fixtures
# ---------------------------------------------------------------------------

FOU_CONFIG = """
[process]
kind = "fou"
hurst = 0.7
horizon = 1.0
mesh = 0.125
lambda = 1.0
x0 = 2.0

[run]
replications = 3
seed = 7
"""

VALIDATE_CONFIG = """
[process]
kind = "gfou"
hurst = 0.7
horizon = 1.0
mesh = 0.125
initial = "stationary"

[process.exponent]
kind = "bm_drift"
mu = 1.5
sigma = 1.0

[run]
seed = 12

[validate]
lags = [0.5]
"""


def write_config(tmp_path: Path, body: str, name: str = "cfg.toml") -> str:
    path = tmp_path / name
    path.write_text(body)
    return str(path)


def read_summary(out_dir: Path) -> dict:
    return json.loads((out_dir / "summary.json").read_text())


def dir_bytes(out_dir: Path) -> dict[str, bytes]:
    return {p.name: p.read_bytes() for p in sorted(out_dir.iterdir())}


# ---------------------------------------------------------------------------
# configuration loading
# ---------------------------------------------------------------------------

class TestLoadConfig:
    def test_valid_config_parses(self, tmp_path: Path) -> None:
        cfg = load_config(write_config(tmp_path, FOU_CONFIG))
        assert cfg["process"]["kind"] == "fou"
        assert cfg["run"]["seed"] == 7

    def test_missing_file(self, tmp_path: Path) -> None:
        with pytest.raises(ConfigError, match="not found"):
            load_config(tmp_path / "absent.toml")

    def test_malformed_toml(self, tmp_path: Path) -> None:
        with pytest.raises(ConfigError, match="not valid TOML"):
            load_config(write_config(tmp_path, "[process\nkind ="))

    def test_unknown_top_level_key(self, tmp_path: Path) -> None:
        with pytest.raises(ConfigError, match="bogus"):
            load_config(write_config(tmp_path, FOU_CONFIG + "\n[bogus]\nx = 1\n"))

    def test_unknown_nested_key(self, tmp_path: Path) -> None:
        body = FOU_CONFIG.replace("x0 = 2.0", "x0 = 2.0\ntypo_key = 1.0")
        with pytest.raises(ConfigError, match="process.typo_key"):
            load_config(write_config(tmp_path, body))

    def test_wrong_type(self, tmp_path: Path) -> None:
        body = FOU_CONFIG.replace("seed = 7", 'seed = "seven"')
        with pytest.raises(ConfigError, match="run.seed"):
            load_config(write_config(tmp_path, body))

    def test_bool_is_not_an_int(self, tmp_path: Path) -> None:
        body = FOU_CONFIG.replace("replications = 3", "replications = true")
        with pytest.raises(ConfigError, match="run.replications"):
            load_config(write_config(tmp_path, body))


# ---------------------------------------------------------------------------
# Hurst estimation
# ---------------------------------------------------------------------------

class TestEstimateHurst:
    @pytest.mark.parametrize("method,lo,hi", [
        ("variance-time", 0.60, 0.80),
        ("rs", 0.58, 0.85),
    ])
    def test_recovers_known_index(self, method: str, lo: float, hi: float) -> None:
        rng = np.random.default_rng(100)
        values = sample_fbm_uniform(HurstIndex(0.7), 2 ** 14, 1.0, rng)[0]
        result = estimate_hurst(np.diff(values), method, rng=rng)
        assert lo < result.point_estimate < hi, (
            f"{method} estimate {result.point_estimate:.3f} outside "
            f"({lo}, {hi}) for H = 0.7"
        )
        assert result.stderr_or_ci > 0.0
        assert result.n_used == 2 ** 14
        assert result.method == method

    def test_sample_path_input_matches_increment_input(self) -> None:
        rng = np.random.default_rng(101)
        values = sample_fbm_uniform(HurstIndex(0.7), 1024, 0.01, rng)[0]
        path = SamplePath(np.linspace(0.0, 10.24, 1025), values)
        a = estimate_hurst(path, rng=np.random.default_rng(0))
        b = estimate_hurst(np.diff(values), rng=np.random.default_rng(0))
        assert a.point_estimate == b.point_estimate
        assert a.stderr_or_ci == b.stderr_or_ci

    def test_needs_uniform_grid(self) -> None:
        times = np.concatenate([np.linspace(0.0, 1.0, 600), [1.5]])
        path = SamplePath(times, np.zeros(601))
        with pytest.raises(ValueError, match="uniform"):
            estimate_hurst(path)

    def test_needs_enough_increments(self) -> None:
        with pytest.raises(ValueError, match="512"):
            estimate_hurst(np.zeros(100))

    def test_unknown_method(self) -> None:
        with pytest.raises(ValueError, match="method"):
            estimate_hurst(np.random.default_rng(0).standard_normal(1024), "wavelet")

    def test_result_requires_finite_values(self) -> None:
        with pytest.raises(ValueError):
            EstimatorResult("hurst", math.nan, 0.1, 100, "rs")


# ---------------------------------------------------------------------------
# simulate subcommand
# ---------------------------------------------------------------------------

class TestSimulate:
    def test_outputs_and_headers(self, tmp_path: Path) -> None:
        cfg = write_config(tmp_path, FOU_CONFIG)
        out = tmp_path / "out"
        assert main(["simulate", "--config", cfg, "--out", str(out)]) == 0
        reps = sorted(out.glob("rep_*.csv"))
        assert [p.name for p in reps] == ["rep_00000.csv", "rep_00001.csv",
                                          "rep_00002.csv"]
        lines = reps[0].read_text().splitlines()
        assert lines[0].startswith("# config_sha256=")
        assert len(lines[0]) == len("# config_sha256=") + 64
        assert lines[1] == "# seed=7"
        assert lines[3] == "time,value"
        assert len(lines) == 4 + 9  # headers + column row + 9 grid points
        summary = read_summary(out)
        assert summary["command"] == "simulate"
        assert summary["replications"] == 3
        # x0 = 2 with unit mean reversion: terminal values hover near 2/e
        assert abs(summary["terminal_mean"]) < 5.0

    def test_summary_csv_matches_rep_files(self, tmp_path: Path) -> None:
        cfg = write_config(tmp_path, FOU_CONFIG)
        out = tmp_path / "out"
        main(["simulate", "--config", cfg, "--out", str(out)])
        values = np.array([
            np.loadtxt(out / f"rep_{r:05d}.csv", delimiter=",", comments="#",
                       skiprows=4, usecols=1)
            for r in range(3)
        ])
        table = np.loadtxt(out / "summary.csv", delimiter=",", comments="#",
                           skiprows=4)
        np.testing.assert_allclose(table[:, 1], values.mean(axis=0), atol=1e-15)
        np.testing.assert_allclose(table[:, 2], values.var(axis=0, ddof=1),
                                   atol=1e-15)

    def test_byte_identical_reruns(self, tmp_path: Path) -> None:
        cfg = write_config(tmp_path, FOU_CONFIG)
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        main(["simulate", "--config", cfg, "--out", str(out_a)])
        main(["simulate", "--config", cfg, "--out", str(out_b)])
        assert dir_bytes(out_a) == dir_bytes(out_b)

    def test_worker_count_does_not_change_bytes(self, tmp_path: Path) -> None:
        cfg = write_config(tmp_path, FOU_CONFIG)
        serial, pooled = tmp_path / "serial", tmp_path / "pooled"
        main(["simulate", "--config", cfg, "--out", str(serial)])
        assert main(["simulate", "--config", cfg, "--out", str(pooled),
                     "--jobs", "2"]) == 0
        assert dir_bytes(serial) == dir_bytes(pooled)

    def test_seed_override_changes_output(self, tmp_path: Path) -> None:
        cfg = write_config(tmp_path, FOU_CONFIG)
        base, other = tmp_path / "base", tmp_path / "other"
        main(["simulate", "--config", cfg, "--out", str(base)])
        main(["simulate", "--config", cfg, "--out", str(other), "--seed", "8"])
        assert read_summary(other)["seed"] == 8
        assert (dir_bytes(base)["rep_00000.csv"]
                != dir_bytes(other)["rep_00000.csv"])

    def test_thinning(self, tmp_path: Path) -> None:
        body = FOU_CONFIG.replace("seed = 7", "seed = 7\nthin = 4")
        cfg = write_config(tmp_path, body)
        out = tmp_path / "out"
        main(["simulate", "--config", cfg, "--out", str(out)])
        lines = (out / "rep_00000.csv").read_text().splitlines()
        # 9 grid points thinned by 4 -> indices 0, 4, 8
        assert len(lines) == 4 + 3

    def test_w_process_writes_both_routes(self, tmp_path: Path) -> None:
        body = """
[process]
kind = "w"
hurst = 0.7
horizon = 1.0
mesh = 0.25
initial = 2.0

[run]
seed = 3
"""
        cfg = write_config(tmp_path, body)
        out = tmp_path / "out"
        assert main(["simulate", "--config", cfg, "--out", str(out)]) == 0
        lines = (out / "rep_00000.csv").read_text().splitlines()
        assert lines[3] == "time,closed,rs"

    def test_mesh_must_divide_horizon(self, tmp_path: Path) -> None:
        body = FOU_CONFIG.replace("mesh = 0.125", "mesh = 0.3")
        cfg = write_config(tmp_path, body)
        assert main(["simulate", "--config", cfg,
                     "--out", str(tmp_path / "x")]) == 4

    def test_unknown_key_exits_4(self, tmp_path: Path) -> None:
        cfg = write_config(tmp_path, FOU_CONFIG + "\n[process.bogus]\nx = 1\n")
        assert main(["simulate", "--config", cfg,
                     "--out", str(tmp_path / "x")]) == 4


# ---------------------------------------------------------------------------
# output directory resolution
# ---------------------------------------------------------------------------

class TestOutDirPrecedence:
    def test_env_var_used_without_flag(self, tmp_path: Path, monkeypatch) -> None:
        cfg = write_config(tmp_path, FOU_CONFIG)
        env_dir = tmp_path / "from_env"
        monkeypatch.setenv("GFOU_OUT_DIR", str(env_dir))
        assert main(["simulate", "--config", cfg]) == 0
        assert (env_dir / "summary.json").exists()

    def test_flag_beats_env_var(self, tmp_path: Path, monkeypatch) -> None:
        cfg = write_config(tmp_path, FOU_CONFIG)
        env_dir, flag_dir = tmp_path / "env", tmp_path / "flag"
        monkeypatch.setenv("GFOU_OUT_DIR", str(env_dir))
        main(["simulate", "--config", cfg, "--out", str(flag_dir)])
        assert (flag_dir / "summary.json").exists()
        assert not env_dir.exists()

    def test_config_out_is_the_fallback(self, tmp_path: Path, monkeypatch) -> None:
        monkeypatch.delenv("GFOU_OUT_DIR", raising=False)
        monkeypatch.chdir(tmp_path)
        body = FOU_CONFIG.replace("seed = 7", 'seed = 7\nout = "cfg_dir"')
        cfg = write_config(tmp_path, body)
        main(["simulate", "--config", cfg])
        assert (tmp_path / "cfg_dir" / "summary.json").exists()


# ---------------------------------------------------------------------------
# validate-cov subcommand
# ---------------------------------------------------------------------------

class TestValidateCov:
    def test_oracle_agreement_passes(self, tmp_path: Path) -> None:
        cfg = write_config(tmp_path, VALIDATE_CONFIG)
        out = tmp_path / "out"
        assert main(["validate-cov", "--config", cfg, "--out", str(out)]) == 0
        summary = read_summary(out)
        assert summary["oracle_agreement"] == [True]
        # the literal 50-term series diverges at small lags; the report
        # must say so rather than agree
        assert summary["series_agreement"] == [False]
        report = (out / "covariance_report.csv").read_text().splitlines()
        assert report[3] == ("s,analytic,series,oracle,mc,mc_stderr,"
                             "agree_oracle,agree_series,agree_mc")
        assert ",true,false," in report[4]

    def test_monte_carlo_route(self, tmp_path: Path) -> None:
        body = VALIDATE_CONFIG + "mc_replications = 400\n"
        cfg = write_config(tmp_path, body)
        out = tmp_path / "out"
        assert main(["validate-cov", "--config", cfg, "--out", str(out)]) == 0
        summary = read_summary(out)
        assert summary["mc_agreement"] == [True]

    def test_unachievable_tolerance_exits_2(self, tmp_path: Path) -> None:
        # closed form and quadrature agree to ~1e-12, not to 1e-16: the
        # failure path must report exit code 2
        cfg = write_config(tmp_path, VALIDATE_CONFIG)
        assert main(["validate-cov", "--config", cfg,
                     "--out", str(tmp_path / "out"),
                     "--tolerance", "1e-16"]) == 2

    def test_nonstationary_exponent_exits_3(self, tmp_path: Path) -> None:
        body = VALIDATE_CONFIG.replace("mu = 1.5", "mu = -0.5")
        cfg = write_config(tmp_path, body)
        assert main(["validate-cov", "--config", cfg,
                     "--out", str(tmp_path / "out")]) == 3

    def test_off_grid_lag_exits_4(self, tmp_path: Path) -> None:
        body = VALIDATE_CONFIG.replace(
            "lags = [0.5]", "lags = [0.3]\nmc_replications = 8"
        )
        cfg = write_config(tmp_path, body)
        assert main(["validate-cov", "--config", cfg,
                     "--out", str(tmp_path / "out")]) == 4


# ---------------------------------------------------------------------------
# hurst subcommand
# ---------------------------------------------------------------------------

class TestHurstCommand:
    def test_estimates_from_exact_noise(self, tmp_path: Path, capsys) -> None:
        body = FOU_CONFIG + "\n[hurst]\nsource = \"fbm\"\nn = 8192\n"
        cfg = write_config(tmp_path, body.replace("seed = 7", "seed = 11"))
        out = tmp_path / "out"
        assert main(["hurst", "--config", cfg, "--out", str(out)]) == 0
        summary = read_summary(out)
        for method in ("variance-time", "rs"):
            assert 0.6 < summary["estimates"][method] < 0.8, (
                f"{method} estimate {summary['estimates'][method]:.3f} "
                "outside (0.6, 0.8) for exact H = 0.7 noise"
            )
        captured = capsys.readouterr().out
        assert "H[variance-time]" in captured and "H[rs]" in captured
        assert (out / "hurst.csv").exists()

    def test_process_source(self, tmp_path: Path) -> None:
        body = (FOU_CONFIG.replace("mesh = 0.125", "mesh = 0.0009765625")
                + "\n[hurst]\nsource = \"process\"\n")
        cfg = write_config(tmp_path, body)
        out = tmp_path / "out"
        assert main(["hurst", "--config", cfg, "--out", str(out)]) == 0
        # mean reversion at unit rate barely moves in 2^-10 steps, so the
        # path increments still look like the driving noise
        estimate = read_summary(out)["estimates"]["variance-time"]
        assert 0.55 < estimate < 0.85

    def test_unknown_source_exits_4(self, tmp_path: Path) -> None:
        body = FOU_CONFIG + "\n[hurst]\nsource = \"csv\"\n"
        cfg = write_config(tmp_path, body)
        assert main(["hurst", "--config", cfg,
                     "--out", str(tmp_path / "out")]) == 4


# ---------------------------------------------------------------------------
# pvariation subcommand
# ---------------------------------------------------------------------------

class TestPvariationCommand:
    def test_noise_transition(self, tmp_path: Path) -> None:
        body = FOU_CONFIG.replace("seed = 7", "seed = 13") + """
[pvariation]
target = "noise"
p_grid = [1.0, 1.8]
levels = [256, 512]
replications = 5
"""
        cfg = write_config(tmp_path, body)
        out = tmp_path / "out"
        assert main(["pvariation", "--config", cfg, "--out", str(out)]) == 0
        summary = read_summary(out)
        # 1/H = 1.43 sits between the probed orders
        assert summary["empirical_transition"] == pytest.approx(1.4)
        assert summary["agreement_fraction"] == 1.0
        verdicts = (out / "pvariation_verdicts.csv").read_text()
        assert "diverges" in verdicts and "stabilizes" in verdicts
        assert (out / "pvariation.csv").exists()

    def test_levels_must_increase(self, tmp_path: Path) -> None:
        body = FOU_CONFIG + "\n[pvariation]\nlevels = [512, 256]\n"
        cfg = write_config(tmp_path, body)
        assert main(["pvariation", "--config", cfg,
                     "--out", str(tmp_path / "out")]) == 4


# ---------------------------------------------------------------------------
# gate subcommand
# ---------------------------------------------------------------------------

class TestGateCommand:
    def test_existence_pass(self, tmp_path: Path, capsys) -> None:
        body = """
[process]
kind = "gfou"
hurst = 0.7
horizon = 1.0
mesh = 0.125

[process.exponent]
kind = "bm_drift"
mu = 1.5
sigma = 1.0
"""
        cfg = write_config(tmp_path, body)
        assert main(["gate", "--config", cfg]) == 0
        assert "existence gate: PASS" in capsys.readouterr().out

    def test_stationarity_pass(self, tmp_path: Path, capsys) -> None:
        cfg = write_config(tmp_path, VALIDATE_CONFIG)
        assert main(["gate", "--config", cfg]) == 0
        out = capsys.readouterr().out
        assert "existence gate: PASS" in out
        assert "stationarity gate: PASS" in out

    def test_existence_failure_exits_3(self, tmp_path: Path, capsys) -> None:
        body = """
[process]
kind = "gfou"
hurst = 0.4
horizon = 1.0
mesh = 0.125

[process.exponent]
kind = "stable"
alpha = 1.8
c1 = 1.0
c2 = 1.0
"""
        cfg = write_config(tmp_path, body)
        assert main(["gate", "--config", cfg]) == 3
        assert "existence gate: FAIL" in capsys.readouterr().out

    def test_stationarity_failure_exits_3(self, tmp_path: Path, capsys) -> None:
        body = VALIDATE_CONFIG.replace("mu = 1.5", "mu = -0.5")
        cfg = write_config(tmp_path, body)
        assert main(["gate", "--config", cfg]) == 3
        out = capsys.readouterr().out
        assert "stationarity gate: FAIL" in out
        assert "theta2" in out
