"""Validation tests for the Lévy exponent models and samplers.

Tests cover:
  1. Jump-law moments, cdfs, and the Laplace exponent (analytic values,
     divergence of the exponential-jump mgf).
  2. Frozen stable-law parameter mapping (Lévy tail coefficients to
     scale/skewness) and scaling of Chambers-Mallows-Stuck increments.
  3. theta-constants: analytic references for Brownian-with-drift and
     compound-Poisson exponents, Monte Carlo fallback, and the convexity
     constraint theta2 > 0 => theta1 > 0.
  4. Exact path sampling: increment statistics, jump bookkeeping (every
     jump time a grid point, value minus left limit equals the jump),
     determinism, and the two-sided extension identities.
  5. The p-variation classifier table and the pathwise existence gate,
     including the accept/reject stable cases.
"""

import math

import numpy as np
import pytest

from gfou.fbm import GridSizeError, HurstIndex
from gfou.levy import (
    CompoundPoissonJumps,
    JumpLaw,
    LevyModel,
    PVariation,
    StableJumps,
    ThetaConstants,
    alpha_stable,
    blumenthal_getoor_index,
    brownian_motion_with_drift,
    check_drift_to_infinity,
    classify_p_variation,
    compound_poisson,
    draw_jumps,
    extend_two_sided,
    gfou_existence_gate,
    pure_drift,
    sample_levy,
    stable_sigma_beta,
    theta_constants,
)


class TestJumpLaw:
    def test_support_min(self) -> None:
        assert JumpLaw.constant(0.5).support_min == 0.5
        assert JumpLaw.uniform(-0.5, 2.0).support_min == -0.5
        assert JumpLaw.exponential(1.0).support_min == 0.0
        assert JumpLaw.normal(0.0, 1.0).support_min == -math.inf

    def test_mgf_neg_analytic(self) -> None:
        assert JumpLaw.constant(0.5).mgf_neg(2.0) == pytest.approx(math.exp(-1.0), rel=1e-15)
        assert JumpLaw.exponential(0.5).mgf_neg(2.0) == pytest.approx(0.5, rel=1e-15)
        # uniform on [0, 1]: (1 - e^{-theta}) / theta
        assert JumpLaw.uniform(0.0, 1.0).mgf_neg(1.0) == pytest.approx(
            -math.expm1(-1.0), rel=1e-14
        )
        assert JumpLaw.normal(1.0, 2.0).mgf_neg(1.0) == pytest.approx(
            math.exp(-1.0 + 2.0), rel=1e-14
        )

    def test_exponential_mgf_divergence(self) -> None:
        with pytest.raises(ValueError):
            JumpLaw.exponential(1.0).mgf_neg(-1.0)

    def test_cdf(self) -> None:
        assert JumpLaw.constant(0.5).cdf(0.4) == 0.0
        assert JumpLaw.constant(0.5).cdf(0.5) == 1.0
        assert JumpLaw.uniform(0.0, 2.0).cdf(0.5) == 0.25
        assert JumpLaw.exponential(1.0).cdf(1.0) == pytest.approx(-math.expm1(-1.0))
        assert JumpLaw.normal(0.0, 1.0).cdf(0.0) == pytest.approx(0.5)

    def test_sample_moments(self) -> None:
        rng = np.random.default_rng(3)
        draws = JumpLaw.exponential(0.7).sample(rng, 50_000)
        assert draws.mean() == pytest.approx(0.7, rel=0.02)
        assert draws.min() >= 0.0


class TestStableMapping:
    """Frozen (sigma, beta) values from the Lévy-density coefficients."""

    @pytest.mark.parametrize("alpha,c1,c2,sigma,beta", [
        (1.5, 1.0, 1.0, 2.2353855909596583, 0.0),
        (1.2, 1.0, 0.0, 1.401225938333188, 1.0),
        (1.8, 1.0, 1.0, 2.721887601668493, 0.0),
        (0.8, 1.0, 1.0, 4.8670813039404749, 0.0),
    ])
    def test_frozen_values(self, alpha, c1, c2, sigma, beta) -> None:
        got_sigma, got_beta = stable_sigma_beta(alpha, c1, c2)
        assert got_sigma == pytest.approx(sigma, rel=1e-14)
        assert got_beta == beta

    def test_alpha_one_symmetric(self) -> None:
        sigma, beta = stable_sigma_beta(1.0, 1.0, 1.0)
        assert sigma == pytest.approx(math.pi, rel=1e-15)
        assert beta == 0.0
        with pytest.raises(ValueError):
            StableJumps(1.0, 1.0, 0.5)

    def test_validation(self) -> None:
        with pytest.raises(ValueError):
            StableJumps(2.0, 1.0, 1.0)
        with pytest.raises(ValueError):
            StableJumps(1.5, 0.0, 0.0)


class TestLevyModel:
    def test_laplace_psi_bm_drift(self) -> None:
        model = brownian_motion_with_drift(1.5, 1.0)
        # log E[e^{-theta xi_1}] = theta^2 a/2 - theta mu, a = sigma^2
        assert model.laplace_psi(1.0) == pytest.approx(0.5 - 1.5, rel=1e-15)
        assert model.laplace_psi(2.0) == pytest.approx(2.0 - 3.0, rel=1e-15)

    def test_laplace_psi_compound_poisson(self) -> None:
        model = compound_poisson(2.0, JumpLaw.constant(0.5))
        expected = 2.0 * (math.exp(-0.5) - 1.0)
        assert model.laplace_psi(1.0) == pytest.approx(expected, rel=1e-15)

    def test_stable_has_no_laplace(self) -> None:
        model = alpha_stable(1.5, 1.0, 1.0)
        assert not model.has_laplace
        with pytest.raises(ValueError):
            model.laplace_psi(1.0)

    def test_validation(self) -> None:
        with pytest.raises(ValueError):
            LevyModel(gaussian_a=-1.0)


class TestThetaConstants:
    """theta_k = -log E[e^{-k xi_1}] against analytic references."""

    def test_bm_drift_reference(self) -> None:
        theta = theta_constants(brownian_motion_with_drift(1.5, 1.0))
        assert theta.theta1 == pytest.approx(1.0, rel=1e-14)
        assert theta.theta2 == pytest.approx(1.0, rel=1e-14)
        assert theta.valid_for_stationary

    def test_compound_poisson_reference(self) -> None:
        theta = theta_constants(compound_poisson(2.0, JumpLaw.constant(0.5)))
        assert theta.theta1 == pytest.approx(0.78693868057473315, rel=1e-14)
        assert theta.theta2 == pytest.approx(1.2642411176571154, rel=1e-14)

    def test_negative_drift_not_stationary(self) -> None:
        theta = theta_constants(brownian_motion_with_drift(-1.0, 0.5))
        assert not theta.valid_for_stationary

    def test_convexity_constraint(self) -> None:
        # theta2 > 0 forces theta1 >= theta2/2 > 0; violations are rejected
        with pytest.raises(ValueError):
            ThetaConstants(-0.1, 1.0)
        assert ThetaConstants(0.5, 1.0).valid_for_stationary

    def test_mc_fallback_close_to_analytic(self) -> None:
        model = brownian_motion_with_drift(1.5, 1.0)
        theta = theta_constants(model, mc_fallback=4_000, rng=np.random.default_rng(17))
        assert theta.theta1 == pytest.approx(1.0, abs=0.15)
        assert theta.theta2 == pytest.approx(1.0, abs=0.3)

    def test_stable_requires_fallback(self) -> None:
        with pytest.raises(ValueError):
            theta_constants(alpha_stable(1.5, 1.0, 1.0))


class TestSampling:
    """Exact increment draws and jump bookkeeping."""

    def test_bm_drift_terminal_moments(self) -> None:
        model = brownian_motion_with_drift(1.5, 1.0)
        grid = np.linspace(0.0, 2.0, 33)
        rng = np.random.default_rng(21)
        terminal = np.array(
            [sample_levy(model, grid, rng).values[-1] for _ in range(4_000)]
        )
        assert terminal.mean() == pytest.approx(3.0, abs=0.1)   # mu T
        assert terminal.var() == pytest.approx(2.0, rel=0.1)    # sigma^2 T

    def test_starts_at_zero_and_validates_grid(self) -> None:
        model = pure_drift(1.0)
        path = sample_levy(model, [0.0, 1.0], np.random.default_rng(0))
        assert path.values[0] == 0.0
        assert path.values[-1] == pytest.approx(1.0, rel=1e-15)
        with pytest.raises(ValueError):
            sample_levy(model, [0.5, 1.0], np.random.default_rng(0))

    def test_grid_cap(self) -> None:
        with pytest.raises(GridSizeError):
            sample_levy(pure_drift(1.0), np.linspace(0.0, 1.0, 2 ** 20 + 2),
                        np.random.default_rng(0))

    def test_jump_bookkeeping(self) -> None:
        model = compound_poisson(3.0, JumpLaw.constant(0.5), drift=1.0)
        rng = np.random.default_rng(22)
        path = sample_levy(model, np.linspace(0.0, 4.0, 9), rng)
        assert path.jump_times.size > 0, "expected at least one jump on [0, 4]"
        for jt, js in zip(path.jump_times, path.jump_sizes):
            assert js == 0.5
            # the jump lives exactly at its grid point: value - left limit = size
            assert path.value_at(jt) - path.left_limit_at(jt) == pytest.approx(js, abs=1e-12)

    def test_jump_count_poisson(self) -> None:
        model = compound_poisson(2.0, JumpLaw.exponential(1.0))
        rng = np.random.default_rng(23)
        counts = [
            sample_levy(model, [0.0, 3.0], rng).jump_times.size for _ in range(2_000)
        ]
        assert np.mean(counts) == pytest.approx(6.0, rel=0.05)  # rate * horizon

    def test_draw_jumps_avoids_grid(self) -> None:
        model = compound_poisson(50.0, JumpLaw.constant(1.0))
        avoid = np.linspace(0.0, 1.0, 101)
        jt, js = draw_jumps(model, 1.0, np.random.default_rng(24), avoid)
        assert not np.isin(jt, avoid).any()
        assert jt.size == js.size

    def test_stable_increment_scaling(self) -> None:
        # |increments| quantiles scale as dt^{1/alpha}
        model = alpha_stable(1.5, 1.0, 1.0)
        rng = np.random.default_rng(25)
        fine = np.diff(sample_levy(model, np.linspace(0.0, 1.0, 4097), rng).values)
        coarse = np.diff(sample_levy(model, np.linspace(0.0, 1.0, 257), rng).values)
        q_fine = np.quantile(np.abs(fine), 0.5)
        q_coarse = np.quantile(np.abs(coarse), 0.5)
        expected_ratio = 16.0 ** (1.0 / 1.5)  # (dt_coarse / dt_fine)^{1/alpha}
        assert q_coarse / q_fine == pytest.approx(expected_ratio, rel=0.15)

    def test_stable_symmetric_median(self) -> None:
        model = alpha_stable(1.5, 1.0, 1.0)
        rng = np.random.default_rng(26)
        terminal = np.array(
            [sample_levy(model, [0.0, 1.0], rng).values[-1] for _ in range(4_000)]
        )
        assert np.median(terminal) == pytest.approx(0.0, abs=0.15)

    def test_determinism(self) -> None:
        model = compound_poisson(2.0, JumpLaw.exponential(1.0), drift=0.5)
        a = sample_levy(model, np.linspace(0.0, 2.0, 17), np.random.default_rng(42))
        b = sample_levy(model, np.linspace(0.0, 2.0, 17), np.random.default_rng(42))
        assert np.array_equal(a.times, b.times)
        assert np.array_equal(a.values, b.values)


class TestTwoSidedExtension:
    def test_identities(self) -> None:
        model = compound_poisson(2.0, JumpLaw.constant(0.3), drift=1.0)
        rng = np.random.default_rng(31)
        grid = np.linspace(0.0, 2.0, 9)
        pos = sample_levy(model, grid, rng)
        mirror = sample_levy(model, grid, rng)
        full = extend_two_sided(model, pos, mirror)

        assert full.value_at(0.0) == 0.0
        # positive side is the first path, unchanged
        for t in pos.times:
            assert full.value_at(t) == pos.value_at(t)
        # negative side: value at -t is the negated left limit of the mirror at t
        for t in mirror.times[1:]:
            assert full.value_at(-t) == pytest.approx(-mirror.left_limit_at(t), abs=1e-14)
        # jump sizes preserved under reflection
        pos_jumps = dict(zip(full.jump_times[full.jump_times > 0],
                             full.jump_sizes[full.jump_times > 0]))
        assert pos_jumps == dict(zip(pos.jump_times, pos.jump_sizes))
        for jt, js in zip(full.jump_times, full.jump_sizes):
            assert js == pytest.approx(0.3)
            assert full.value_at(jt) - full.left_limit_at(jt) == pytest.approx(js, abs=1e-12)

    def test_rejects_bad_anchors(self) -> None:
        model = pure_drift(1.0)
        rng = np.random.default_rng(0)
        good = sample_levy(model, [0.0, 1.0], rng)
        from gfou.fbm import SamplePath
        bad = SamplePath([0.0, 1.0], [0.5, 1.0])
        with pytest.raises(ValueError):
            extend_two_sided(model, good, bad)


class TestPVariationClassifier:
    """The almost-sure classification table, component by component."""

    @pytest.mark.parametrize("p,expected", [
        (1.5, PVariation.INFINITE), (1.99, PVariation.INFINITE),
        (2.0, PVariation.FINITE), (3.0, PVariation.FINITE),
    ])
    def test_brownian(self, p: float, expected: PVariation) -> None:
        assert classify_p_variation(brownian_motion_with_drift(1.5, 1.0), p) is expected

    @pytest.mark.parametrize("p,expected", [
        (0.5, PVariation.INFINITE), (1.0, PVariation.FINITE), (2.0, PVariation.FINITE),
    ])
    def test_pure_drift(self, p: float, expected: PVariation) -> None:
        assert classify_p_variation(pure_drift(2.0), p) is expected

    @pytest.mark.parametrize("p", [0.2, 0.5, 1.0, 3.0])
    def test_compound_poisson_always_finite(self, p: float) -> None:
        model = compound_poisson(2.0, JumpLaw.constant(0.5))
        assert classify_p_variation(model, p) is PVariation.FINITE

    @pytest.mark.parametrize("p,expected", [
        (1.2, PVariation.INFINITE),
        (1.5, PVariation.INFINITE),   # boundary p = alpha is still infinite
        (1.51, PVariation.FINITE),
        (2.0, PVariation.FINITE),
    ])
    def test_stable(self, p: float, expected: PVariation) -> None:
        assert classify_p_variation(alpha_stable(1.5, 1.0, 1.0), p) is expected

    def test_gaussian_dominates_combination(self) -> None:
        model = compound_poisson(1.0, JumpLaw.constant(0.5), drift=1.0, gaussian_a=1.0)
        assert classify_p_variation(model, 1.5) is PVariation.INFINITE
        assert classify_p_variation(model, 2.0) is PVariation.FINITE

    def test_rejects_bad_order(self) -> None:
        with pytest.raises(ValueError):
            classify_p_variation(pure_drift(1.0), 0.0)

    def test_blumenthal_getoor(self) -> None:
        assert blumenthal_getoor_index(alpha_stable(1.5, 1.0, 1.0)) == 1.5
        assert blumenthal_getoor_index(compound_poisson(2.0, JumpLaw.constant(0.5))) == 0.0
        assert blumenthal_getoor_index(brownian_motion_with_drift(1.0, 1.0)) == 0.0


class TestDriftDiagnostic:
    def test_detects_onset_time(self) -> None:
        from gfou.fbm import SamplePath
        # dips below the line delta*t at t=2, recovers from t=3 on
        path = SamplePath([0.0, 1.0, 2.0, 3.0, 4.0], [0.0, 2.0, 0.5, 4.0, 6.0])
        result = check_drift_to_infinity(path, delta=1.0)
        assert result.holds
        assert result.t0 == 3.0

    def test_fails_when_terminal_below_line(self) -> None:
        from gfou.fbm import SamplePath
        path = SamplePath([0.0, 1.0, 2.0], [0.0, 2.0, 1.0])
        result = check_drift_to_infinity(path, delta=1.0)
        assert not result.holds
        assert result.t0 is None


class TestExistenceGate:
    """Accept/reject verdicts for Young integrability of e^{xi} vs H-noise."""

    def test_brownian_exponent_accepted(self) -> None:
        result = gfou_existence_gate(brownian_motion_with_drift(1.5, 1.0), HurstIndex(0.7))
        assert result.ok
        assert result.witness_p == pytest.approx(2.0, abs=1e-6)

    def test_brownian_exponent_rejected_for_rough_noise(self) -> None:
        # 1/(1-0.3) = 1.43 < 2: no admissible order
        result = gfou_existence_gate(brownian_motion_with_drift(1.5, 1.0), HurstIndex(0.3))
        assert not result.ok
        assert result.witness_p is None

    def test_stable_heavy_rejected(self) -> None:
        # alpha
        result = gfou_existence_gate(alpha_stable(1.8, 1.0, 1.0), HurstIndex(0.4))
        assert not result.ok
        assert "1.8" in result.reason

    def test_stable_light_accepted(self) -> None:
        result = gfou_existence_gate(alpha_stable(1.2, 1.0, 1.0), HurstIndex(0.4))
        assert result.ok
        assert result.witness_p == pytest.approx(1.2, abs=1e-6)
        assert result.witness_p < 1.0 / (1.0 - 0.4)

    def test_compound_poisson_always_passes(self) -> None:
        model = compound_poisson(2.0, JumpLaw.constant(0.5))
        result = gfou_existence_gate(model, HurstIndex(0.15))
        assert result.ok
