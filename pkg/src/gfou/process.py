"""Simulators for the OU family driven by FBM with a random discount exponent.

The central object is Y_t = e^{-xi_t} (Y_0 + S_t) where S_t is the
left-endpoint Riemann-Stieltjes sum of e^{xi_{s-}} against an independent
FBM on [0, t], xi a Lévy exponent.  Specializations: deterministic
xi_t = lambda t recovers the fractional OU process; replacing the FBM by a
second Lévy process gives the classical generalized OU process; xi = B^H
(+ drift) gives the single-noise process W with a closed form via the
chain rule.

The stationary version starts from the improper integral over (-infty, 0],
realized on a truncated window [-T, 0] with geometrically coarsening mesh
away from 0; the neglected L2 tail is bounded by 2D quadrature of the
exponential-kernel bound e^{-theta2 |u| - theta1 (u-v)} |u-v|^{2H-2}.
Stationary mode is gated on theta2 > 0 and H > 1/2; pathwise (fixed
initial) mode only on the p-variation existence gate.

The SDE bridge: dY = Y_- dU + dB^H is solved by a left-point Euler scheme
with exact jump insertion, and the Doléans-Dade conversion
xi = -U + (a/2) t - sum(log(1 + dU) - dU) maps the driver U to the
exponent so Euler paths can be checked against the closed construction
with shared noise.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Sequence, Union

import numpy as np
from scipy.integrate import quad

from .fbm import FbmGridSampler, HurstIndex, SamplePath, sample_fbm
from .levy import (
    CompoundPoissonJumps,
    GateError,
    JumpLaw,
    LevyModel,
    StableJumps,
    ThetaConstants,
    draw_jumps,
    extend_two_sided,
    gfou_existence_gate,
    sample_levy,
    sample_levy_on_grid,
    theta_constants,
)

__all__ = [
    "TruncationWarning",
    "InitialValue",
    "GfouSpec",
    "SdeSpec",
    "WPair",
    "TailFunctions",
    "SmallJumpEquivalence",
    "simulate_fou",
    "simulate_gou",
    "simulate_gfou",
    "simulate_gfou_many",
    "gfou_closed_from_paths",
    "stationary_truncation_error",
    "simulate_w",
    "xi_from_u",
    "euler_sde",
    "euler_sde_from_paths",
    "levy_measure_xi_from_u",
    "small_jump_equivalence",
]

_EULER_OVERFLOW = 1e300

InitialLaw = Union[float, Callable[[np.random.Generator], float]]


class TruncationWarning(UserWarning):
    """The stationary truncation window leaves a non-negligible tail."""


def _require_grid_from_zero(grid: Sequence[float]) -> np.ndarray:
    g = np.asarray(grid, dtype=float)
    if g.ndim != 1 or g.size < 2 or not np.all(np.diff(g) > 0.0):
        raise ValueError("grid must be strictly increasing with >= 2 points")
    if g[0] != 0.0:
        raise ValueError(f"grid must start at 0, got {g[0]!r}")
    return g


def _draw_initial(law: "InitialValue | InitialLaw", rng: np.random.Generator) -> float:
    if isinstance(law, InitialValue):
        if law.kind == "constant":
            return law.value
        if law.kind == "sampler":
            return float(law.sampler(rng))
        raise ValueError("a stationary initial value is drawn by the simulator itself")
    if callable(law):
        return float(law(rng))
    return float(law)


# ---------------------------------------------------------------------------
# specifications
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class InitialValue:
    """How Y_0 is chosen: a constant, an independent law, or stationary.

    Stationary mode replaces Y_0 by the truncated improper integral over
    [-t_trunc, 0]; ``t_trunc`` defaults to 20/theta2 (kernel e^{-theta2 T}
    tail ~ 2e-9 of the variance) and the window mesh starts at the positive
    grid's first cell, growing by ``mesh_growth`` per cell up to
    ``max_mesh`` (default 1/(8 theta2)).
    """

    kind: str
    value: float = 0.0
    sampler: Callable[[np.random.Generator], float] | None = None
    t_trunc: float | None = None
    mesh_growth: float = 1.05
    max_mesh: float | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("constant", "sampler", "stationary"):
            raise ValueError(f"unknown initial-value kind {self.kind!r}")
        if self.kind == "sampler" and self.sampler is None:
            raise ValueError("sampler kind needs a sampler callable")
        if self.t_trunc is not None and not self.t_trunc > 0.0:
            raise ValueError(f"t_trunc must be positive, got {self.t_trunc!r}")
        if not self.mesh_growth > 1.0:
            raise ValueError(f"mesh_growth must exceed 1, got {self.mesh_growth!r}")
        if self.max_mesh is not None and not self.max_mesh > 0.0:
            raise ValueError(f"max_mesh must be positive, got {self.max_mesh!r}")

    @classmethod
    def constant(cls, value: float) -> "InitialValue":
        return cls("constant", value=float(value))

    @classmethod
    def from_sampler(
        cls, sampler: Callable[[np.random.Generator], float]
    ) -> "InitialValue":
        return cls("sampler", sampler=sampler)

    @classmethod
    def stationary(
        cls,
        t_trunc: float | None = None,
        mesh_growth: float = 1.05,
        max_mesh: float | None = None,
    ) -> "InitialValue":
        return cls(
            "stationary", t_trunc=t_trunc, mesh_growth=mesh_growth, max_mesh=max_mesh
        )


@dataclass(frozen=True)
class GfouSpec:
    """Exponent model, noise roughness, initial value, and simulation grid.

    The grid covers [0, horizon]; stationary initial values extend it
    internally over the truncation window [-t_trunc, 0).
    """

    levy: LevyModel
    hurst: HurstIndex
    initial: InitialValue
    grid: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "grid", _require_grid_from_zero(self.grid))

    @property
    def horizon(self) -> float:
        return float(self.grid[-1])


def _u_jump_law_admissible(law: JumpLaw) -> bool:
    """Whether a compound-Poisson jump law puts no mass on (-inf, -1]."""
    if law.kind == "constant":
        return law.params[0] > -1.0
    if law.kind == "uniform":
        return law.params[0] >= -1.0
    if law.kind == "exponential":
        return True
    return False  # normal: unbounded below


@dataclass(frozen=True)
class SdeSpec:
    """Driver model, noise roughness, initial law, and grid for dY = Y_- dU + dB^H.

    The Doléans-Dade exponential of U must stay positive, so the driver's
    jump measure may put no mass on (-inf, -1]: normal jump laws and
    two-sided stable drivers are rejected (only the spectrally positive
    stable case c2 = 0 qualifies).
    """

    u_model: LevyModel
    hurst: HurstIndex
    y0: InitialLaw
    grid: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "grid", _require_grid_from_zero(self.grid))
        jumps = self.u_model.jumps
        if isinstance(jumps, CompoundPoissonJumps) and not _u_jump_law_admissible(jumps.law):
            raise ValueError(
                "the driver's jump law must put no mass on (-inf, -1] so that "
                "1 + jump stays positive"
            )
        if isinstance(jumps, StableJumps) and jumps.c2 != 0.0:
            raise ValueError(
                "two-sided stable drivers put mass on (-inf, -1]; only the "
                "spectrally positive case c2 = 0 is supported"
            )

    @property
    def horizon(self) -> float:
        return float(self.grid[-1])


# ---------------------------------------------------------------------------
# reductions of the family: FOU and GOU
# ---------------------------------------------------------------------------

def simulate_fou(
    lam: float, h: HurstIndex, x0: float, grid: Sequence[float], rng: np.random.Generator
) -> SamplePath:
    """Fractional OU: X_t = e^{-lambda t} (x0 + int_0^t e^{lambda s} dB^H_s).

    The integral is the left-endpoint RS sum on the grid, so this equals
    the general simulator with the deterministic exponent xi_t = lambda t.
    """
    if not lam > 0.0:
        raise ValueError(f"mean-reversion rate must be positive, got {lam!r}")
    g = _require_grid_from_zero(grid)
    b = sample_fbm(h, g, rng)
    incr = np.exp(lam * g[:-1]) * np.diff(b.values)
    s = np.concatenate([[0.0], np.cumsum(incr)])
    return SamplePath(g, np.exp(-lam * g) * (x0 + s))


def simulate_gou(
    xi_model: LevyModel,
    eta_model: LevyModel,
    v0: InitialLaw,
    grid: Sequence[float],
    rng: np.random.Generator,
) -> SamplePath:
    """Generalized OU: V_t = e^{-xi_t} (V_0 + sum of e^{xi_{s-}} d eta_s).

    xi and eta are drawn independently on one merged grid containing both
    processes' compound-Poisson jump times, so left-endpoint evaluation of
    the integrand realizes genuine left limits.
    """
    g = _require_grid_from_zero(grid)
    horizon = float(g[-1])
    jt_xi, js_xi = draw_jumps(xi_model, horizon, rng, g)
    jt_eta, js_eta = draw_jumps(eta_model, horizon, rng, np.union1d(g, jt_xi))
    times = np.union1d(np.union1d(g, jt_xi), jt_eta)
    xi = sample_levy_on_grid(xi_model, times, rng, jt_xi, js_xi)
    eta = sample_levy_on_grid(eta_model, times, rng, jt_eta, js_eta)
    v0_val = _draw_initial(v0, rng)
    incr = np.exp(xi.values[:-1]) * np.diff(eta.values)
    s = np.concatenate([[0.0], np.cumsum(incr)])
    return SamplePath(times, np.exp(-xi.values) * (v0_val + s))


# ---------------------------------------------------------------------------
# the general simulator
# ---------------------------------------------------------------------------

def _negative_window(dt0: float, t_trunc: float, growth: float, max_mesh: float) -> np.ndarray:
    """Grid on [-t_trunc, 0), finest near 0, mesh growing geometrically."""
    depth = [0.0]
    mesh = dt0
    while depth[-1] < t_trunc:
        depth.append(min(depth[-1] + mesh, t_trunc))
        mesh = min(mesh * growth, max_mesh)
    return -np.asarray(depth[1:])[::-1]


def _stationary_window(spec: GfouSpec) -> tuple[ThetaConstants, float, np.ndarray]:
    """Gate checks plus the resolved truncation window for stationary mode."""
    if spec.hurst.h <= 0.5:
        raise GateError(
            "the stationary construction is supported only for H > 1/2; the "
            "improper-integral second-order theory does not cover rougher noise"
        )
    theta = theta_constants(spec.levy)
    if not theta.valid_for_stationary:
        raise GateError(
            "stationary mode requires theta2 = -log E[e^(-2 xi_1)] > 0, so "
            "that the exponent drifts to +infinity and the improper integral "
            f"converges in L2; got theta2 = {theta.theta2:.6g}"
        )
    t_trunc = 20.0 / theta.theta2 if spec.initial.t_trunc is None else spec.initial.t_trunc
    tail = math.exp(-theta.theta1 * t_trunc)
    if tail > 1e-3:
        warnings.warn(
            f"truncation window [-{t_trunc:g}, 0] leaves a non-negligible "
            f"tail: e^(-theta1 t_trunc) = {tail:.3g} > 1e-3",
            TruncationWarning,
            stacklevel=3,
        )
    max_mesh = spec.initial.max_mesh
    if max_mesh is None:
        max_mesh = 1.0 / (8.0 * theta.theta2)
    dt0 = float(spec.grid[1] - spec.grid[0])
    neg = _negative_window(dt0, t_trunc, spec.initial.mesh_growth, max(max_mesh, dt0))
    return theta, t_trunc, neg


def _assemble_gfou(xi: SamplePath, b: SamplePath, y0: float) -> SamplePath:
    """Y = e^{-xi} (y0 + left RS sum of e^{xi} dB) with jump bookkeeping."""
    incr = np.exp(xi.values[:-1]) * np.diff(b.values)
    s = np.concatenate([[0.0], np.cumsum(incr)])
    y = np.exp(-xi.values) * (y0 + s)
    if xi.jump_times.size == 0:
        return SamplePath(xi.times, y)
    idx = np.searchsorted(xi.times, xi.jump_times)
    pre_discount = np.exp(-(xi.values[idx] - xi.jump_sizes))
    jump_y = np.expm1(-xi.jump_sizes) * pre_discount * (y0 + s[idx])
    return SamplePath(xi.times, y, xi.jump_times, jump_y)


def gfou_closed_from_paths(xi: SamplePath, b: SamplePath, y0: float) -> SamplePath:
    """Closed discount construction Y = e^{-xi} (y0 + left RS sum of e^{xi} dB)
    from pre-drawn exponent and noise paths on one shared grid.

    Left limits at exponent jumps are honored through the jump bookkeeping on
    ``xi`` (the integrand on a cell starting at a jump is the post-jump cadlag
    value, and the recorded Y jump uses e^{xi_{s-}} = e^{xi_s - dxi_s}).  This
    is the exact-solution counterpart of :func:`euler_sde_from_paths` for
    shared-noise consistency studies.
    """
    if not np.array_equal(xi.times, b.times):
        raise ValueError("exponent and noise paths must share one grid")
    return _assemble_gfou(xi, b, float(y0))


def simulate_gfou(spec: GfouSpec, rng: np.random.Generator) -> SamplePath:
    """One path of Y_t = e^{-xi_t} (Y_0 + int_0^t e^{xi_{s-}} dB^H_s).

    The existence gate (some p < 1/(1-H) with finite p-variation for the
    exponent) must pass.  For a stationary initial value the returned path
    covers the full window [-t_trunc, horizon]: xi is extended to negative
    times by an independent reflected copy, the FBM is drawn on the merged
    two-sided grid, and the RS sum starts at -t_trunc, so Y restricted to
    t >= 0 approximates the stationary version.
    """
    gate = gfou_existence_gate(spec.levy, spec.hurst)
    if not gate.ok:
        raise GateError(gate.reason)
    if spec.initial.kind == "stationary":
        _, _, neg = _stationary_window(spec)
        reflected = np.concatenate([[0.0], -neg[::-1]])
        pos = sample_levy(spec.levy, spec.grid, rng)
        mirror = sample_levy(spec.levy, reflected, rng)
        xi = extend_two_sided(spec.levy, pos, mirror)
        y0 = 0.0
    else:
        xi = sample_levy(spec.levy, spec.grid, rng)
        y0 = _draw_initial(spec.initial, rng)
    b = sample_fbm(spec.hurst, xi.times, rng)
    return _assemble_gfou(xi, b, y0)


def simulate_gfou_many(
    spec: GfouSpec,
    rng: np.random.Generator,
    n_paths: int,
    chunk: int = 2048,
) -> tuple[np.ndarray, np.ndarray]:
    """Batch of GFOU paths on the positive grid; shape (n_paths, n_times).

    The vectorized route factorizes the FBM Gram matrix once and draws
    exponent increments in bulk, which requires a continuous exponent
    (no jump component; jump models merge random jump times into the grid,
    so replications cannot share one factorization - loop
    :func:`simulate_gfou` for those).  Returns (times, values) with times
    the positive grid.
    """
    if spec.levy.jumps is not None:
        raise ValueError(
            "the batched sampler supports continuous exponents only; loop "
            "simulate_gfou for models with jumps"
        )
    gate = gfou_existence_gate(spec.levy, spec.hurst)
    if not gate.ok:
        raise GateError(gate.reason)
    stationary = spec.initial.kind == "stationary"
    if stationary:
        _, _, neg = _stationary_window(spec)
        full = np.concatenate([neg, spec.grid])
        i0 = neg.size
    else:
        full = spec.grid
        i0 = 0
    sampler = FbmGridSampler(spec.hurst, full)
    dt = np.diff(full)
    sqrt_dt = np.sqrt(dt)
    mu = spec.levy.drift_gamma
    sig = math.sqrt(spec.levy.gaussian_a)
    n = full.size
    out = np.empty((n_paths, n - i0))
    done = 0
    while done < n_paths:
        m = min(chunk, n_paths - done)
        b = sampler.draw(rng, m)
        xi = np.empty((m, n))
        xi[:, 0] = 0.0
        np.cumsum(mu * dt + sig * sqrt_dt * rng.standard_normal((m, n - 1)),
                  axis=1, out=xi[:, 1:])
        xi -= xi[:, i0:i0 + 1]
        s = np.empty((m, n))
        s[:, 0] = 0.0
        np.cumsum(np.exp(xi[:, :-1]) * np.diff(b, axis=1), axis=1, out=s[:, 1:])
        if stationary:
            y = np.exp(-xi) * s
        else:
            y0 = np.array([_draw_initial(spec.initial, rng) for _ in range(m)])
            y = np.exp(-xi) * (y0[:, None] + s)
        out[done:done + m] = y[:, i0:]
        done += m
    return full[i0:].copy(), out


def stationary_truncation_error(
    theta: ThetaConstants, h: HurstIndex, t_trunc: float
) -> float:
    """Upper bound on the L2 tail neglected by truncating at -t_trunc.

    The second moment of the integral over (-infty, -t_trunc] is bounded by
    2 c_H int int_{v < u <= -t_trunc} e^{-theta2 |u| - theta1 (u - v)}
    (u - v)^{2H-2} dv du.  The inner integral in x = u - v does not depend
    on u, so the double quadrature factorizes into iterated 1D quadratures
    (inner split at x = 1 to give the algebraic endpoint singularity to a
    weighted rule).
    """
    if not theta.valid_for_stationary:
        raise ValueError(f"needs theta2 > 0, got {theta.theta2!r}")
    if not t_trunc > 0.0:
        raise ValueError(f"t_trunc must be positive, got {t_trunc!r}")
    p = 2.0 * h.h - 2.0
    th1, th2 = theta.theta1, theta.theta2
    head = quad(lambda x: math.exp(-th1 * x), 0.0, 1.0, weight="alg", wvar=(p, 0.0))[0]
    tail = quad(lambda x: math.exp(-th1 * x) * x ** p, 1.0, np.inf)[0]
    outer = quad(lambda w: math.exp(-th2 * (t_trunc + w)), 0.0, np.inf)[0]
    return 2.0 * h.c_h * (head + tail) * outer


# ---------------------------------------------------------------------------
# the single-noise process W
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WPair:
    """Closed-form and RS-sum realizations of one W path (shared noise)."""

    closed: SamplePath
    rs: SamplePath


def simulate_w(
    h: HurstIndex,
    x_law: InitialLaw,
    grid: Sequence[float],
    rng: np.random.Generator,
    drift_a: float = 0.0,
    noise: SamplePath | None = None,
) -> WPair:
    """W_t = e^{-g_t} (X + int_0^t e^{g_u} dg_u) with g = B^H + a t.

    The chain rule for Young integrals gives the closed form
    W_t = 1 + (X - 1) e^{-g_t}; both that path and the left-endpoint RS-sum
    path are returned so their gap can be tracked under mesh refinement.
    Requires H > 1/2 (the chain rule needs finite-p-variation pairing of
    g with itself, 2/p > 1).  A pre-drawn noise path living exactly on
    ``grid`` can be injected via ``noise``, so that mesh studies coarsen
    one fine path by stride instead of redrawing per level.
    """
    if h.h <= 0.5:
        raise ValueError(f"the chain-rule construction requires H > 1/2, got {h.h}")
    if drift_a < 0.0:
        raise ValueError(f"drift must be nonnegative, got {drift_a!r}")
    g = _require_grid_from_zero(grid)
    x = _draw_initial(x_law, rng)
    if noise is None:
        b = sample_fbm(h, g, rng)
    elif not np.array_equal(np.asarray(noise.times, dtype=float), g):
        raise ValueError("the injected noise path must live exactly on the grid")
    else:
        b = noise
    gval = b.values + drift_a * g
    closed = 1.0 + (x - 1.0) * np.exp(-gval)
    s = np.concatenate([[0.0], np.cumsum(np.exp(gval[:-1]) * np.diff(gval))])
    rs = np.exp(-gval) * (x + s)
    return WPair(SamplePath(g, closed), SamplePath(g, rs))


# ---------------------------------------------------------------------------
# the SDE bridge
# ---------------------------------------------------------------------------

def xi_from_u(u_path: SamplePath, gaussian_a: float) -> SamplePath:
    """Exponent of the Doléans-Dade exponential: E(U) = e^{-xi}.

    xi_t = -U_t + (a/2) t - sum_{s <= t} (log(1 + dU_s) - dU_s), with a the
    Gaussian variance rate of U.  Consequently e^{-dxi} = 1 + dU at every
    jump; all jumps must exceed -1.
    """
    if not gaussian_a >= 0.0:
        raise ValueError(f"gaussian_a must be >= 0, got {gaussian_a!r}")
    if np.any(u_path.jump_sizes <= -1.0):
        raise ValueError(
            "the Doléans-Dade conversion needs all jumps > -1, got "
            f"{u_path.jump_sizes.min()!r}"
        )
    values = -u_path.values + 0.5 * gaussian_a * u_path.times
    if u_path.jump_times.size:
        steps = np.zeros(u_path.times.size)
        idx = np.searchsorted(u_path.times, u_path.jump_times)
        steps[idx] = np.log1p(u_path.jump_sizes) - u_path.jump_sizes
        values = values - np.cumsum(steps)
        return SamplePath(
            u_path.times, values, u_path.jump_times, -np.log1p(u_path.jump_sizes)
        )
    return SamplePath(u_path.times, values)


def euler_sde_from_paths(
    u_path: SamplePath, b_path: SamplePath, y0: float
) -> SamplePath:
    """Left-point Euler recursion Y_{k+1} = Y_k (1 + dU_k) + dB_k.

    Noise paths must share one grid (jump times of U already inserted);
    keeping them explicit is what makes shared-noise mesh-refinement
    comparisons against the closed construction possible.
    """
    if not np.array_equal(u_path.times, b_path.times):
        raise ValueError("driver and noise paths must share one grid")
    if np.any(u_path.jump_sizes <= -1.0):
        raise ValueError("Euler scheme needs all driver jumps > -1")
    du = np.diff(u_path.values)
    db = np.diff(b_path.values)
    y = np.empty(u_path.times.size)
    y[0] = y0
    cur = float(y0)
    for k in range(du.size):
        cur = cur * (1.0 + du[k]) + db[k]
        if not -_EULER_OVERFLOW < cur < _EULER_OVERFLOW:
            raise OverflowError(
                f"Euler recursion exceeded {_EULER_OVERFLOW:g} at "
                f"t = {u_path.times[k + 1]:g}"
            )
        y[k + 1] = cur
    return SamplePath(u_path.times, y)


def euler_sde(spec: SdeSpec, rng: np.random.Generator) -> SamplePath:
    """Draw U and B^H, then run the left-point Euler scheme for dY = Y_- dU + dB^H."""
    u = sample_levy(spec.u_model, spec.grid, rng)
    b = sample_fbm(spec.hurst, u.times, rng)
    return euler_sde_from_paths(u, b, _draw_initial(spec.y0, rng))


# ---------------------------------------------------------------------------
# jump-measure transform U -> xi
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TailFunctions:
    """Tails of the exponent's jump measure: positive(x) = nu_xi((x, inf)),
    negative(x) = nu_xi((-inf, -x)), both for x > 0."""

    positive: Callable[[float], float]
    negative: Callable[[float], float]


def _prob_below(law: JumpLaw, y: float) -> float:
    """P(J < y), strict at atoms."""
    if law.kind == "constant":
        return 1.0 if law.params[0] < y else 0.0
    return law.cdf(y)


def _prob_above(law: JumpLaw, y: float) -> float:
    """P(J > y), strict at atoms."""
    if law.kind == "constant":
        return 1.0 if law.params[0] > y else 0.0
    return 1.0 - law.cdf(y)


def levy_measure_xi_from_u(u_model: LevyModel) -> TailFunctions:
    """Tail functions of nu_xi from nu_U under the Doléans-Dade map.

    A driver jump dU lands the exponent at dxi = -log(1 + dU), so
    nu_xi((x, inf)) = nu_U((-inf, e^{-x} - 1)) and
    nu_xi((-inf, -x)) = nu_U((e^x - 1, inf)) for x > 0.
    """
    jumps = u_model.jumps
    if jumps is None:
        raise ValueError("the model has no explicit jump component")

    def _check(x: float) -> None:
        if not x > 0.0:
            raise ValueError(f"tails are defined for x > 0, got {x!r}")

    if isinstance(jumps, CompoundPoissonJumps):
        rate, law = jumps.rate, jumps.law

        def positive(x: float) -> float:
            _check(x)
            return rate * _prob_below(law, math.expm1(-x))

        def negative(x: float) -> float:
            _check(x)
            return rate * _prob_above(law, math.expm1(x))

    else:
        alpha, c1, c2 = jumps.alpha, jumps.c1, jumps.c2

        def positive(x: float) -> float:
            _check(x)
            return c2 * (-math.expm1(-x)) ** -alpha / alpha

        def negative(x: float) -> float:
            _check(x)
            return c1 * math.expm1(x) ** -alpha / alpha

    return TailFunctions(positive, negative)


@dataclass(frozen=True)
class SmallJumpEquivalence:
    """Finiteness verdicts for int_{|x|<1} |x|^delta nu(dx), driver vs exponent."""

    u_integral_finite: bool
    xi_integral_finite: bool

    @property
    def consistent(self) -> bool:
        return self.u_integral_finite == self.xi_integral_finite


def small_jump_equivalence(u_model: LevyModel, delta: float) -> SmallJumpEquivalence:
    """Do driver and exponent agree on small-jump delta-moment finiteness?

    The driver verdict is analytic per family (compound Poisson: always
    finite; stable: finite iff delta > alpha).  The exponent verdict is
    computed independently from the transformed tail functions: their
    small-x log-log slope estimates the local singularity exponent, and the
    integral is finite iff delta exceeds it.  The two verdicts are expected
    to agree because dxi ~ -dU for small jumps.
    """
    if not (0.0 < delta < 2.0):
        raise ValueError(f"delta must lie in (0, 2), got {delta!r}")
    jumps = u_model.jumps
    if jumps is None:
        raise ValueError("the model has no explicit jump component")
    if isinstance(jumps, CompoundPoissonJumps):
        u_finite = True
    else:
        u_finite = delta > jumps.alpha

    tails = levy_measure_xi_from_u(u_model)
    x_big, x_small = 1e-3, 1e-5
    exponent = 0.0
    for f in (tails.positive, tails.negative):
        v_big, v_small = f(x_big), f(x_small)
        if v_big <= 0.0 or v_small <= 0.0:
            continue  # no small-jump mass on this side
        slope = (math.log(v_small) - math.log(v_big)) / (
            math.log(x_big) - math.log(x_small)
        )
        exponent = max(exponent, slope)
    return SmallJumpEquivalence(u_finite, delta > exponent)
