"""Lévy process models: exact samplers, moments, and p-variation structure.

A model is a generating triplet in parametric form: Gaussian variance rate
``gaussian_a``, deterministic drift ``drift_gamma``, and at most one jump
component (compound Poisson with an explicit jump law, or alpha-stable with
Lévy density c1 x^{-1-a} on (0, inf) and c2 |x|^{-1-a} on (-inf, 0)).
Everything downstream needs three things from a model:

* exact path samples on a grid (compound-Poisson jump times placed exactly
  and recorded, stable increments by the Chambers-Mallows-Stuck method),
* the exponential-moment constants theta_k = -log E[e^{-k xi_1}] that govern
  the stationary second-order theory, and
* the almost-sure p-variation verdict, which gates pathwise Young
  integration against FBM via 1/p + H > 1.

The two-sided extension glues an independent copy to negative times through
xi_t = -xi'_{(-t)-}, preserving stationary independent increments across 0.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .fbm import GridSizeError, HurstIndex, SamplePath

__all__ = [
    "GateError",
    "GateResult",
    "JumpLaw",
    "CompoundPoissonJumps",
    "StableJumps",
    "LevyModel",
    "ThetaConstants",
    "PVariation",
    "DriftToInfinity",
    "brownian_motion_with_drift",
    "pure_drift",
    "compound_poisson",
    "alpha_stable",
    "stable_sigma_beta",
    "draw_jumps",
    "sample_levy",
    "sample_levy_on_grid",
    "extend_two_sided",
    "theta_constants",
    "classify_p_variation",
    "blumenthal_getoor_index",
    "check_drift_to_infinity",
    "gfou_existence_gate",
]

_PATH_GRID_CAP = 2 ** 20


class GateError(ValueError):
    """An existence or stationarity gate rejected the requested simulation."""


# ---------------------------------------------------------------------------
# jump laws for compound-Poisson components
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class JumpLaw:
    """A one-dimensional jump-size law with explicit transform data.

    ``mgf_neg(theta)`` is E[e^{-theta J}] (needed for the Laplace exponent)
    and ``cdf`` the distribution function (needed for Lévy-measure tails).
    Use the factory classmethods rather than the constructor.
    """

    kind: str
    params: tuple[float, ...]

    @classmethod
    def constant(cls, size: float) -> "JumpLaw":
        if size == 0.0:
            raise ValueError("a jump of size 0 is not a jump")
        return cls("constant", (float(size),))

    @classmethod
    def uniform(cls, low: float, high: float) -> "JumpLaw":
        if not low < high:
            raise ValueError(f"need low < high, got ({low!r}, {high!r})")
        return cls("uniform", (float(low), float(high)))

    @classmethod
    def normal(cls, mean: float, std: float) -> "JumpLaw":
        if not std > 0.0:
            raise ValueError(f"std must be positive, got {std!r}")
        return cls("normal", (float(mean), float(std)))

    @classmethod
    def exponential(cls, mean: float) -> "JumpLaw":
        if not mean > 0.0:
            raise ValueError(f"mean must be positive, got {mean!r}")
        return cls("exponential", (float(mean),))

    @property
    def support_min(self) -> float:
        if self.kind == "constant":
            return self.params[0]
        if self.kind == "uniform":
            return self.params[0]
        if self.kind == "exponential":
            return 0.0
        return -math.inf  # normal

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        if self.kind == "constant":
            return np.full(n, self.params[0])
        if self.kind == "uniform":
            return rng.uniform(self.params[0], self.params[1], n)
        if self.kind == "normal":
            return rng.normal(self.params[0], self.params[1], n)
        return rng.exponential(self.params[0], n)

    def mgf_neg(self, theta: float) -> float:
        """E[e^{-theta J}]; raises if the expectation diverges."""
        if self.kind == "constant":
            return math.exp(-theta * self.params[0])
        if self.kind == "uniform":
            lo, hi = self.params
            if theta == 0.0:
                return 1.0
            return (math.exp(-theta * lo) - math.exp(-theta * hi)) / (theta * (hi - lo))
        if self.kind == "normal":
            m, s = self.params
            return math.exp(-theta * m + 0.5 * theta * theta * s * s)
        m, = self.params
        if 1.0 + theta * m <= 0.0:
            raise ValueError(
                f"E[e^(-theta J)] diverges for exponential jumps at theta={theta}"
            )
        return 1.0 / (1.0 + theta * m)

    def cdf(self, x: float) -> float:
        """P(J <= x)."""
        if self.kind == "constant":
            return 1.0 if x >= self.params[0] else 0.0
        if self.kind == "uniform":
            lo, hi = self.params
            return min(1.0, max(0.0, (x - lo) / (hi - lo)))
        if self.kind == "normal":
            m, s = self.params
            return 0.5 * (1.0 + math.erf((x - m) / (s * math.sqrt(2.0))))
        m, = self.params
        return 0.0 if x < 0.0 else 1.0 - math.exp(-x / m)


@dataclass(frozen=True)
class CompoundPoissonJumps:
    """Finitely many jumps per unit time: rate > 0, sizes iid from ``law``."""

    rate: float
    law: JumpLaw

    def __post_init__(self) -> None:
        if not self.rate > 0.0:
            raise ValueError(f"compound-Poisson rate must be positive, got {self.rate!r}")


@dataclass(frozen=True)
class StableJumps:
    """Alpha-stable jump component with Lévy density c1, c2 on the two tails.

    alpha = 1 is restricted to the symmetric case c1 = c2 (the strictly
    stable normalization used throughout); alpha < 1 components carry no
    extra drift by construction.
    """

    alpha: float
    c1: float
    c2: float

    def __post_init__(self) -> None:
        if not (0.0 < self.alpha < 2.0):
            raise ValueError(f"stable index must lie in (0, 2), got {self.alpha!r}")
        if self.c1 < 0.0 or self.c2 < 0.0 or self.c1 + self.c2 <= 0.0:
            raise ValueError(
                f"tail coefficients must be nonnegative with c1 + c2 > 0, "
                f"got ({self.c1!r}, {self.c2!r})"
            )
        if self.alpha == 1.0 and self.c1 != self.c2:
            raise ValueError("alpha = 1 is supported only in the symmetric case c1 = c2")


def stable_sigma_beta(alpha: float, c1: float, c2: float) -> tuple[float, float]:
    """Map Lévy-density coefficients to the stable scale/skewness (sigma, beta).

    From the Lévy-Khintchine reduction,
    sigma^alpha = (c1 + c2) Gamma(2 - alpha) cos(pi alpha / 2) / (alpha (1 - alpha))
    for alpha != 1 (positive on both sides of 1), beta = (c1 - c2)/(c1 + c2);
    for alpha = 1 (symmetric only), sigma = (c1 + c2) pi / 2.
    """
    beta = (c1 - c2) / (c1 + c2)
    if alpha == 1.0:
        return (c1 + c2) * math.pi / 2.0, beta
    sig_a = ((c1 + c2) * math.gamma(2.0 - alpha) * math.cos(math.pi * alpha / 2.0)
             / (alpha * (1.0 - alpha)))
    return sig_a ** (1.0 / alpha), beta


def _cms_standard(alpha: float, beta: float, rng: np.random.Generator, n: int) -> np.ndarray:
    """Chambers-Mallows-Stuck draws from the unit-scale stable law S_a(1, beta, 0)."""
    v = rng.uniform(-math.pi / 2.0, math.pi / 2.0, n)
    w = rng.exponential(1.0, n)
    if alpha == 1.0:
        # symmetric 1-stable: standard Cauchy
        return np.tan(v)
    t = math.tan(math.pi * alpha / 2.0)
    b = math.atan(beta * t) / alpha
    s = (1.0 + beta * beta * t * t) ** (1.0 / (2.0 * alpha))
    return (
        s * np.sin(alpha * (v + b)) / np.cos(v) ** (1.0 / alpha)
        * (np.cos(v - alpha * (v + b)) / w) ** ((1.0 - alpha) / alpha)
    )


# ---------------------------------------------------------------------------
# the model
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LevyModel:
    """Parametric Lévy process: Gaussian rate, drift, and one jump component."""

    gaussian_a: float = 0.0
    drift_gamma: float = 0.0
    jumps: CompoundPoissonJumps | StableJumps | None = None

    def __post_init__(self) -> None:
        if not (self.gaussian_a >= 0.0 and math.isfinite(self.gaussian_a)):
            raise ValueError(f"gaussian_a must be >= 0, got {self.gaussian_a!r}")
        if not math.isfinite(self.drift_gamma):
            raise ValueError(f"drift_gamma must be finite, got {self.drift_gamma!r}")

    @property
    def has_laplace(self) -> bool:
        """Whether -log E[e^{-theta xi_1}] is analytically available."""
        return not isinstance(self.jumps, StableJumps)

    def laplace_psi(self, theta: float) -> float:
        """psi(theta) = log E[e^{-theta xi_1}] when analytically known.

        Gaussian + drift contribute theta^2 a/2 - theta gamma; a
        compound-Poisson part adds rate (E[e^{-theta J}] - 1).  Stable jump
        components have no finite exponential moment in the generality
        supported here, so they raise.
        """
        if isinstance(self.jumps, StableJumps):
            raise ValueError(
                "no finite exponential moment: stable jump components do not "
                "admit an analytic Laplace exponent here (use the Monte Carlo "
                "fallback of theta_constants if one exists for your skewness)"
            )
        psi = 0.5 * theta * theta * self.gaussian_a - theta * self.drift_gamma
        if isinstance(self.jumps, CompoundPoissonJumps):
            psi += self.jumps.rate * (self.jumps.law.mgf_neg(theta) - 1.0)
        return psi


def brownian_motion_with_drift(mu: float, sigma: float) -> LevyModel:
    """xi_t = mu t + sigma B_t; theta_1 = mu - sigma^2/2, theta_2 = 2mu - 2sigma^2."""
    if not sigma > 0.0:
        raise ValueError(f"sigma must be positive, got {sigma!r}")
    return LevyModel(gaussian_a=sigma * sigma, drift_gamma=mu)


def pure_drift(mu: float) -> LevyModel:
    """Deterministic xi_t = mu t."""
    return LevyModel(drift_gamma=mu)


def compound_poisson(
    rate: float, law: JumpLaw, drift: float = 0.0, gaussian_a: float = 0.0
) -> LevyModel:
    """Compound-Poisson jumps plus optional drift and Gaussian part."""
    return LevyModel(
        gaussian_a=gaussian_a, drift_gamma=drift, jumps=CompoundPoissonJumps(rate, law)
    )


def alpha_stable(alpha: float, c1: float, c2: float) -> LevyModel:
    """Pure alpha-stable process with tail coefficients (c1, c2), no drift."""
    return LevyModel(jumps=StableJumps(alpha, c1, c2))


# ---------------------------------------------------------------------------
# exponential-moment constants
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ThetaConstants:
    """theta_k = -log E[e^{-k xi_1}] for k = 1, 2.

    Stationary second-order theory needs theta2 > 0, which by convexity of
    the Laplace exponent (psi(0) = 0) forces theta1 >= theta2 / 2 > 0; the
    constructor rejects inputs violating that implication.
    """

    theta1: float
    theta2: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.theta1) and math.isfinite(self.theta2)):
            raise ValueError(f"theta constants must be finite, got {self}")
        if self.theta2 > 0.0 and self.theta1 <= 0.0:
            raise ValueError(
                f"inconsistent constants: theta2 = {self.theta2} > 0 forces "
                f"theta1 > 0 by convexity, got theta1 = {self.theta1}"
            )

    @property
    def valid_for_stationary(self) -> bool:
        return self.theta2 > 0.0


def theta_constants(
    model: LevyModel,
    mc_fallback: int | None = None,
    rng: np.random.Generator | None = None,
) -> ThetaConstants:
    """theta_1 = -psi(1), theta_2 = -psi(2) from the Laplace exponent.

    When the model has no analytic exponent, ``mc_fallback`` draws of xi_1
    estimate psi(theta) = log mean(e^{-theta xi_1}) instead (requires ``rng``).
    """
    if model.has_laplace:
        return ThetaConstants(-model.laplace_psi(1.0), -model.laplace_psi(2.0))
    if mc_fallback is None:
        model.laplace_psi(1.0)  # raises with the explanatory message
    if rng is None:
        raise ValueError("the Monte Carlo fallback needs an explicit rng")
    path_values = np.array(
        [sample_levy(model, [0.0, 1.0], rng).values[-1] for _ in range(mc_fallback)]
    )
    est = []
    for theta in (1.0, 2.0):
        m = float(np.mean(np.exp(-theta * path_values)))
        if not math.isfinite(m):
            raise ValueError(
                f"no finite exponential moment: e^(-{theta} xi_1) overflowed "
                "in the Monte Carlo fallback"
            )
        est.append(-math.log(m))
    return ThetaConstants(est[0], est[1])


# ---------------------------------------------------------------------------
# samplers
# ---------------------------------------------------------------------------

def draw_jumps(
    model: LevyModel, horizon: float, rng: np.random.Generator, avoid: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Compound-Poisson jump times and sizes on (0, horizon].

    Times are uniform given the Poisson count, redrawn in the (measure-zero)
    event of a collision with ``avoid`` or among themselves so every jump
    owns a distinct grid point.  Models without a compound-Poisson part
    return empty arrays.
    """
    if not isinstance(model.jumps, CompoundPoissonJumps):
        return np.empty(0), np.empty(0)
    n_jumps = rng.poisson(model.jumps.rate * horizon)
    while True:
        jump_times = np.sort(rng.uniform(0.0, horizon, n_jumps))
        clash = np.isin(jump_times, avoid) | (np.diff(jump_times, prepend=-1.0) == 0.0)
        if not clash.any():
            break
    return jump_times, model.jumps.law.sample(rng, n_jumps)


def sample_levy_on_grid(
    model: LevyModel,
    times: np.ndarray,
    rng: np.random.Generator,
    jump_times: np.ndarray,
    jump_sizes: np.ndarray,
) -> SamplePath:
    """Exact increments on a fixed grid, with pre-drawn jumps inserted.

    The grid must already contain every jump time; each jump is added to
    the increment of the cell it terminates, so grid values are cadlag.
    """
    dt = np.diff(times)
    incr = model.drift_gamma * dt
    if model.gaussian_a > 0.0:
        incr = incr + math.sqrt(model.gaussian_a) * np.sqrt(dt) * rng.standard_normal(dt.size)
    if isinstance(model.jumps, StableJumps):
        sj = model.jumps
        sigma, beta = stable_sigma_beta(sj.alpha, sj.c1, sj.c2)
        incr = incr + sigma * dt ** (1.0 / sj.alpha) * _cms_standard(sj.alpha, beta, rng, dt.size)
    if jump_times.size:
        idx = np.searchsorted(times, jump_times) - 1
        np.add.at(incr, idx, jump_sizes)
    values = np.concatenate([[0.0], np.cumsum(incr)])
    return SamplePath(times, values, jump_times, jump_sizes)


def sample_levy(
    model: LevyModel, times: Sequence[float], rng: np.random.Generator
) -> SamplePath:
    """Exact draw of the Lévy path on a grid starting at time 0.

    Brownian and stable increments are drawn per grid cell (stable via
    Chambers-Mallows-Stuck with the (sigma, beta) induced by (c1, c2));
    compound-Poisson jump times are drawn exactly, inserted into the grid,
    and recorded in the path's jump bookkeeping.
    """
    t = np.asarray(times, dtype=float)
    if t.ndim != 1 or t.size < 2 or not np.all(np.diff(t) > 0.0):
        raise ValueError("grid must be strictly increasing with >= 2 points")
    if t[0] != 0.0:
        raise ValueError(f"grid must start at 0, got {t[0]!r}")
    if t.size > _PATH_GRID_CAP:
        raise GridSizeError(f"path grids capped at {_PATH_GRID_CAP} points, got {t.size}")
    jump_times, jump_sizes = draw_jumps(model, float(t[-1]), rng, t)
    if jump_times.size:
        t = np.union1d(t, jump_times)
        if t.size > _PATH_GRID_CAP:
            raise GridSizeError(
                f"path grids capped at {_PATH_GRID_CAP} points, got {t.size} after "
                "jump insertion"
            )
    return sample_levy_on_grid(model, t, rng, jump_times, jump_sizes)


def extend_two_sided(
    model: LevyModel, pos_path: SamplePath, neg_path: SamplePath
) -> SamplePath:
    """Glue two independent one-sided draws into a path on [-T', T].

    For t < 0 the value is the negated left limit of the second copy at -t,
    so the result is 0 at time 0, has stationary independent increments over
    the whole line, and keeps jump sizes (a jump of the second copy at s
    becomes an equal jump of the extension at -s).
    """
    for p in (pos_path, neg_path):
        if p.times[0] != 0.0 or p.values[0] != 0.0:
            raise ValueError("both one-sided paths must start at (t=0, value=0)")
    left = neg_path.values.copy()
    for jt, js in zip(neg_path.jump_times, neg_path.jump_sizes):
        left[neg_path.index_of(jt)] -= js
    neg_times = -neg_path.times[:0:-1]
    neg_values = -left[:0:-1]
    times = np.concatenate([neg_times, pos_path.times])
    values = np.concatenate([neg_values, pos_path.values])
    jt = np.concatenate([-neg_path.jump_times, pos_path.jump_times])
    js = np.concatenate([neg_path.jump_sizes, pos_path.jump_sizes])
    keep = jt != 0.0
    order = np.argsort(jt[keep])
    return SamplePath(times, values, jt[keep][order], js[keep][order])


# ---------------------------------------------------------------------------
# p-variation classification
# ---------------------------------------------------------------------------

class PVariation(enum.Enum):
    """Almost-sure verdict on sup_partitions sum |increment|^p."""

    FINITE = "finite"
    INFINITE = "infinite"
    UNKNOWN = "unknown"

    def __str__(self) -> str:  # pragma: no cover - cosmetic
        return self.value


def blumenthal_getoor_index(model: LevyModel) -> float:
    """inf { a : int_{|x|<1} |x|^a nu(dx) < inf }, analytic per family."""
    if isinstance(model.jumps, StableJumps):
        return model.jumps.alpha
    return 0.0


def classify_p_variation(model: LevyModel, p: float) -> PVariation:
    """Almost-sure finiteness of the p-variation of the model's paths.

    Componentwise rules (independent components cannot cancel):
    a Gaussian part forces the Brownian verdict (finite iff p >= 2); a
    nonzero drift alone needs p >= 1; compound-Poisson paths have finite
    p-variation for every p (finitely many jumps); a stable component is
    finite iff p > alpha (at p = alpha the small-jump integral
    int (1 ^ |x|^p) nu(dx) diverges).  UNKNOWN is reserved for jump measures
    decidable only through the Blumenthal-Getoor index exactly at its
    boundary, which no supported family hits.
    """
    if not (p > 0.0 and math.isfinite(p)):
        raise ValueError(f"variation order must be positive, got {p!r}")
    if model.gaussian_a > 0.0:
        return PVariation.FINITE if p >= 2.0 else PVariation.INFINITE
    verdicts = []
    if model.drift_gamma != 0.0:
        verdicts.append(PVariation.FINITE if p >= 1.0 else PVariation.INFINITE)
    if isinstance(model.jumps, CompoundPoissonJumps):
        verdicts.append(PVariation.FINITE)
    elif isinstance(model.jumps, StableJumps):
        verdicts.append(
            PVariation.FINITE if p > model.jumps.alpha else PVariation.INFINITE
        )
    if PVariation.INFINITE in verdicts:
        return PVariation.INFINITE
    return PVariation.FINITE


# ---------------------------------------------------------------------------
# diagnostics and gates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DriftToInfinity:
    """Result of the linear lower-bound scan xi_t > delta t."""

    holds: bool
    t0: float | None


def check_drift_to_infinity(path: SamplePath, delta: float) -> DriftToInfinity:
    """Smallest grid time t0 with xi_t > delta t for all grid t in [t0, T].

    A path-level diagnostic for drift to +infinity; the authoritative
    stationarity gate is theta2 > 0.
    """
    if not delta > 0.0:
        raise ValueError(f"delta must be positive, got {delta!r}")
    pos = path.times > 0.0
    if not pos.any():
        raise ValueError("path has no positive-time grid points")
    t = path.times[pos]
    ok = path.values[pos] > delta * t
    if not ok[-1]:
        return DriftToInfinity(False, None)
    bad = np.nonzero(~ok)[0]
    first = 0 if bad.size == 0 else bad[-1] + 1
    return DriftToInfinity(True, float(t[first]))


@dataclass(frozen=True)
class GateResult:
    """Outcome of the pathwise-existence gate with its witnessing order."""

    ok: bool
    reason: str
    witness_p: float | None


def gfou_existence_gate(model: LevyModel, h: HurstIndex) -> GateResult:
    """Does some p < 1/(1-H) give the exponent path finite p-variation?

    Pathwise Young integration of e^{xi} against the H-noise needs
    complementary variation orders, 1/p + H > 1.  The smallest admissible p
    is located by bisection against :func:`classify_p_variation` (which is
    monotone in p); the witness reported is that order, nudged inside the
    open boundary when the infimum itself is not attained.
    """
    bound = 1.0 / (1.0 - h.h)
    probe = bound * (1.0 - 1e-9)
    if classify_p_variation(model, probe) is not PVariation.FINITE:
        return GateResult(
            False,
            f"pathwise Young integration against H={h.h} noise needs a "
            f"variation order p < 1/(1-H) = {bound:.6g}, but the exponent "
            f"path has infinite p-variation for every such p "
            f"(smallest finite order is "
            f"{_smallest_finite_p_description(model)})",
            None,
        )
    lo, hi = 1e-9, probe
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if classify_p_variation(model, mid) is PVariation.FINITE:
            hi = mid
        else:
            lo = mid
    witness = hi
    if classify_p_variation(model, lo) is PVariation.FINITE:
        witness = lo
    return GateResult(
        True,
        f"pathwise Riemann-Stieltjes integral exists: order p = {witness:.9g} "
        f"has finite p-variation and 1/p + H = {1.0 / witness + h.h:.6g} > 1",
        float(witness),
    )


def _smallest_finite_p_description(model: LevyModel) -> str:
    if model.gaussian_a > 0.0:
        return "p = 2 (Gaussian part)"
    if isinstance(model.jumps, StableJumps):
        return f"any p > alpha = {model.jumps.alpha} (stable part)"
    if model.drift_gamma != 0.0:
        return "p = 1 (drift part)"
    return "p arbitrarily small"
