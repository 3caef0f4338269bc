"""Simulation and validation lab for fractional Ornstein-Uhlenbeck processes
with random Lévy discounting.

The package covers exact fractional Brownian motion sampling, Lévy path
construction, pathwise Riemann-Stieltjes/Young integration, the generalized
fractional OU process in pathwise and stationary form, its closed-form
stationary covariance with quadrature and series cross-checks, and a small
CLI for config-driven campaigns.
"""

from __future__ import annotations

from .covariance import (
    CovarianceReport,
    QuadratureError,
    SeriesResult,
    WCovariance,
    cov_nonstationary_asymptotic,
    cov_oracle_quadrature,
    cov_series,
    cov_stationary_closed,
    cov_stationary_closed_alt,
    cov_w,
    covariance_report,
    lambda_h_inner,
    mc_covariance,
)
from .fbm import (
    FbmGridSampler,
    GridSizeError,
    HurstIndex,
    SamplePath,
    fbm_cov,
    fbm_gram,
    increment_autocov,
    increment_autocov_series,
    refine_fbm_midpoints,
    sample_fbm,
    sample_fbm_many,
    sample_fbm_uniform,
)
from .levy import (
    CompoundPoissonJumps,
    DriftToInfinity,
    GateError,
    GateResult,
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
    extend_two_sided,
    gfou_existence_gate,
    pure_drift,
    sample_levy,
    stable_sigma_beta,
    theta_constants,
)
from .pathint import (
    IntegralEstimate,
    Partition,
    p_variation_estimate,
    p_variation_sum,
    rs_integral,
    rs_integral_refined,
    sampler_from_fbm,
    sampler_from_path,
    young_constant,
)
from .process import (
    GfouSpec,
    InitialValue,
    SdeSpec,
    SmallJumpEquivalence,
    TruncationWarning,
    WPair,
    euler_sde,
    euler_sde_from_paths,
    gfou_closed_from_paths,
    levy_measure_xi_from_u,
    simulate_fou,
    simulate_gfou,
    simulate_gfou_many,
    simulate_gou,
    simulate_w,
    small_jump_equivalence,
    stationary_truncation_error,
    xi_from_u,
)
from .specfun import (
    AccuracyError,
    SpecialValue,
    gamma,
    gamma_lower,
    gamma_upper,
    gamma_upper_scaled,
    hyp1f1,
    hyp1f1_kummer,
    hyp1f1_scaled,
)

__version__ = "0.1.0"

__all__ = [
    "AccuracyError",
    "CompoundPoissonJumps",
    "CovarianceReport",
    "DriftToInfinity",
    "FbmGridSampler",
    "GateError",
    "GateResult",
    "GfouSpec",
    "GridSizeError",
    "HurstIndex",
    "InitialValue",
    "IntegralEstimate",
    "JumpLaw",
    "LevyModel",
    "PVariation",
    "Partition",
    "QuadratureError",
    "SamplePath",
    "SdeSpec",
    "SeriesResult",
    "SmallJumpEquivalence",
    "SpecialValue",
    "StableJumps",
    "ThetaConstants",
    "TruncationWarning",
    "WCovariance",
    "WPair",
    "alpha_stable",
    "blumenthal_getoor_index",
    "brownian_motion_with_drift",
    "check_drift_to_infinity",
    "classify_p_variation",
    "compound_poisson",
    "cov_nonstationary_asymptotic",
    "cov_oracle_quadrature",
    "cov_series",
    "cov_stationary_closed",
    "cov_stationary_closed_alt",
    "cov_w",
    "covariance_report",
    "euler_sde",
    "euler_sde_from_paths",
    "extend_two_sided",
    "fbm_cov",
    "fbm_gram",
    "gamma",
    "gamma_lower",
    "gamma_upper",
    "gamma_upper_scaled",
    "gfou_closed_from_paths",
    "gfou_existence_gate",
    "hyp1f1",
    "hyp1f1_kummer",
    "hyp1f1_scaled",
    "increment_autocov",
    "increment_autocov_series",
    "lambda_h_inner",
    "levy_measure_xi_from_u",
    "mc_covariance",
    "p_variation_estimate",
    "p_variation_sum",
    "pure_drift",
    "refine_fbm_midpoints",
    "rs_integral",
    "rs_integral_refined",
    "sample_fbm",
    "sample_fbm_many",
    "sample_fbm_uniform",
    "sample_levy",
    "sampler_from_fbm",
    "sampler_from_path",
    "simulate_fou",
    "simulate_gfou",
    "simulate_gfou_many",
    "simulate_gou",
    "simulate_w",
    "small_jump_equivalence",
    "stable_sigma_beta",
    "stationary_truncation_error",
    "theta_constants",
    "xi_from_u",
    "young_constant",
]
