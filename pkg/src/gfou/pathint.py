"""Pathwise integration: p-variation sums, Riemann-Stieltjes sums, Young bound.

The central objects are tagged partitions and the Riemann-Stieltjes sum
S(f, g) = sum_i f(u_i) [g(s_i) - g(s_{i-1})].  Tags default to LEFT
endpoints everywhere because the integrands of interest are left limits of
cadlag exponent paths; mid and right tags exist for convergence diagnostics
only.  Integrals are estimated by halving the partition until successive
sums agree to a tolerance, along a single realization of the integrator
(conditional midpoint refinement for FBM, or restriction of a pre-drawn
fine path).

p-variation suprema are never claimed exact: the estimate is the max over
the dyadic coarsening family of the path grid plus a greedy local-extrema
partition, and downstream code treats it as a lower bound.  The pairing
rule for existence is Young's: S(f, g) converges when f has finite
p-variation, g finite q-variation, and 1/p + 1/q > 1, with constant
C_{p,q} = zeta(1/p + 1/q).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.special import zeta as _zeta

from .fbm import HurstIndex, SamplePath, refine_fbm_midpoints, sample_fbm

__all__ = [
    "Partition",
    "IntegralEstimate",
    "p_variation_sum",
    "p_variation_estimate",
    "rs_integral",
    "rs_integral_refined",
    "young_constant",
    "sampler_from_path",
    "sampler_from_fbm",
]


@dataclass(frozen=True)
class Partition:
    """Strictly increasing points s_0 < ... < s_n with optional in-cell tags.

    ``intermediates`` holds one evaluation tag u_i per cell with
    s_{i-1} <= u_i <= s_i; ``None`` means left endpoints.
    """

    points: np.ndarray
    intermediates: np.ndarray | None = None

    def __post_init__(self) -> None:
        pts = np.asarray(self.points, dtype=float)
        object.__setattr__(self, "points", pts)
        if pts.ndim != 1 or pts.size < 2:
            raise ValueError("a partition needs at least one cell")
        if not (np.all(np.isfinite(pts)) and np.all(np.diff(pts) > 0.0)):
            raise ValueError("partition points must be finite and strictly increasing")
        if self.intermediates is not None:
            tags = np.asarray(self.intermediates, dtype=float)
            object.__setattr__(self, "intermediates", tags)
            if tags.shape != (pts.size - 1,):
                raise ValueError(
                    f"need one tag per cell ({pts.size - 1}), got shape {tags.shape}"
                )
            if not (np.all(pts[:-1] <= tags) and np.all(tags <= pts[1:])):
                raise ValueError("tags must lie inside their cells")

    @classmethod
    def uniform(cls, a: float, b: float, n_cells: int, rule: str = "left") -> "Partition":
        """Uniform partition of [a, b] with tags by rule left|mid|right."""
        if n_cells < 1:
            raise ValueError(f"n_cells must be >= 1, got {n_cells!r}")
        return cls.from_points(np.linspace(a, b, n_cells + 1), rule)

    @classmethod
    def from_points(cls, points: Sequence[float], rule: str = "left") -> "Partition":
        pts = np.asarray(points, dtype=float)
        if rule == "left":
            return cls(pts)
        if rule == "mid":
            return cls(pts, 0.5 * (pts[:-1] + pts[1:]))
        if rule == "right":
            return cls(pts, pts[1:].copy())
        raise ValueError(f"unknown tag rule {rule!r}")

    @property
    def tags(self) -> np.ndarray:
        return self.points[:-1] if self.intermediates is None else self.intermediates

    @property
    def n_cells(self) -> int:
        return self.points.size - 1

    @property
    def mesh(self) -> float:
        return float(np.max(np.diff(self.points)))


@dataclass(frozen=True)
class IntegralEstimate:
    """A refined Riemann-Stieltjes value with its convergence history.

    ``refinement_trace`` lists (mesh, value) per level, meshes strictly
    decreasing; ``converged`` is False when the resolution cap was reached
    before two successive values agreed to tolerance (the value is then the
    best available estimate, not a converged one).
    """

    value: float
    mesh: float
    refinement_trace: tuple[tuple[float, float], ...]
    converged: bool = True

    def __post_init__(self) -> None:
        meshes = [m for m, _ in self.refinement_trace]
        if any(m2 >= m1 for m1, m2 in zip(meshes, meshes[1:])):
            raise ValueError("trace meshes must be strictly decreasing")

    def __float__(self) -> float:
        return self.value


def _indices_on_grid(grid: np.ndarray, points: np.ndarray, what: str) -> np.ndarray:
    idx = np.searchsorted(grid, points)
    ok = (idx < grid.size) & (grid[np.minimum(idx, grid.size - 1)] == points)
    if not ok.all():
        bad = points[~ok][0]
        raise ValueError(f"{what} {bad!r} is not on the path grid")
    return idx


# ---------------------------------------------------------------------------
# p-variation
# ---------------------------------------------------------------------------

def p_variation_sum(path: SamplePath, p: float, partition: Partition) -> float:
    """sum_i |X_{s_i} - X_{s_{i-1}}|^p for one explicit partition.

    A single term of the supremum defining the p-variation; the partition
    points must lie on the path grid.
    """
    if not (p > 0.0 and math.isfinite(p)):
        raise ValueError(f"variation order must be positive, got {p!r}")
    idx = _indices_on_grid(path.times, partition.points, "partition point")
    return float(np.sum(np.abs(np.diff(path.values[idx])) ** p))


def _turning_point_values(values: np.ndarray) -> np.ndarray:
    """Endpoint + local-extrema subsequence of a discrete path."""
    d = np.diff(values)
    nz = np.nonzero(d)[0]
    if nz.size == 0:
        return values[[0, -1]]
    sgn = np.sign(d[nz])
    turn = nz[1:][sgn[1:] != sgn[:-1]]
    keep = np.concatenate([[0], turn, [values.size - 1]])
    return values[keep]


def p_variation_estimate(path: SamplePath, p: float) -> float:
    """Lower-bound estimate of the p-variation supremum over partitions.

    Maximum of the sums over the dyadic coarsening family of the path grid
    and over the greedy local-extrema partition.  For p >= 1 the extrema
    partition is optimal among subsets of the grid (merging a monotone run
    never decreases the sum); for p < 1 the full grid is (splitting never
    decreases it), so within the grid the estimate is in fact sharp, but it
    remains a lower bound for the true supremum over all partitions.
    """
    if not (p > 0.0 and math.isfinite(p)):
        raise ValueError(f"variation order must be positive, got {p!r}")
    v = path.values
    if v.size < 2:
        raise ValueError("path needs at least 2 points")
    best = float(np.sum(np.abs(np.diff(v)) ** p))
    stride = 2
    while stride < v.size:
        idx = np.arange(0, v.size, stride)
        if idx[-1] != v.size - 1:
            idx = np.append(idx, v.size - 1)
        best = max(best, float(np.sum(np.abs(np.diff(v[idx])) ** p)))
        stride *= 2
    tp = _turning_point_values(v)
    return max(best, float(np.sum(np.abs(np.diff(tp)) ** p)))


# ---------------------------------------------------------------------------
# Riemann-Stieltjes sums
# ---------------------------------------------------------------------------

def rs_integral(f: SamplePath, g: SamplePath, partition: Partition) -> float:
    """S(f, g) = sum_i f(u_i) [g(s_i) - g(s_{i-1})] for the given partition.

    Partition points must be on both path grids and tags on the integrand's
    grid; tags default to left endpoints, realizing the left limit of the
    integrand in the mesh-zero limit.
    """
    gi = _indices_on_grid(g.times, partition.points, "partition point")
    _indices_on_grid(f.times, partition.points, "partition point")
    fi = _indices_on_grid(f.times, partition.tags, "tag")
    return float(f.values[fi] @ np.diff(g.values[gi]))


def rs_integral_refined(
    f_eval: Callable[[SamplePath], SamplePath],
    g_sampler: Callable[[np.ndarray], SamplePath],
    interval: tuple[float, float],
    tol: float,
    start_cells: int = 8,
    max_points: int = 2 ** 16,
) -> IntegralEstimate:
    """Refine left-tagged RS sums along one realization until they stabilize.

    The cell count doubles per level; ``g_sampler`` must return the SAME
    realization consistently refined on each requested grid (see
    :func:`sampler_from_fbm` and :func:`sampler_from_path`), and ``f_eval``
    maps that draw to the integrand on the same grid (a closure over an
    exogenous path when the integrand does not depend on g).  Stops when
    two successive values differ by less than ``tol``; if the point cap is
    hit first, the last value is returned with ``converged=False``.
    """
    a, b = float(interval[0]), float(interval[1])
    if not b > a:
        raise ValueError(f"need an interval with positive length, got ({a}, {b})")
    if not tol > 0.0:
        raise ValueError(f"tol must be positive, got {tol!r}")
    if start_cells < 1 or max_points < start_cells + 1:
        raise ValueError("need start_cells >= 1 and max_points > start_cells")
    n_finest = start_cells
    while 2 * n_finest + 1 <= max_points:
        n_finest *= 2
    master = np.linspace(a, b, n_finest + 1)
    trace: list[tuple[float, float]] = []
    prev = math.nan
    n = start_cells
    while True:
        grid = master[:: n_finest // n]
        g = g_sampler(grid)
        f = f_eval(g)
        value = rs_integral(f, g, Partition(grid))
        trace.append((float(np.max(np.diff(grid))), value))
        if abs(value - prev) < tol:
            return IntegralEstimate(value, trace[-1][0], tuple(trace), True)
        if n == n_finest:
            return IntegralEstimate(value, trace[-1][0], tuple(trace), False)
        prev = value
        n *= 2


def young_constant(p: float, q: float) -> float:
    """C_{p,q} = zeta(1/p + 1/q), the constant in the Young-Loeve bound.

    Accurate to well under 1e-8.  Requires the complementarity condition
    1/p + 1/q > 1 under which S(f, g) converges for f of finite
    p-variation against g of finite q-variation.
    """
    if not (p > 0.0 and q > 0.0):
        raise ValueError(f"variation orders must be positive, got ({p!r}, {q!r})")
    s = 1.0 / p + 1.0 / q
    if s <= 1.0:
        raise ValueError(
            f"Young pairing needs 1/p + 1/q > 1, got 1/{p} + 1/{q} = {s}"
        )
    return float(_zeta(s))


# ---------------------------------------------------------------------------
# consistent-refinement samplers for rs_integral_refined
# ---------------------------------------------------------------------------

def _match_times(path: SamplePath, grid: np.ndarray) -> np.ndarray:
    """Nearest-index match of a requested grid within a path, ulp-tolerant."""
    tol = 1e-9 * max(1.0, abs(grid[0]), abs(grid[-1]))
    idx = np.clip(np.searchsorted(path.times, grid), 1, path.times.size - 1)
    idx = idx - (grid - path.times[idx - 1] < path.times[idx] - grid)
    if np.max(np.abs(path.times[idx] - grid)) > tol:
        return np.empty(0, dtype=int)
    return idx


def sampler_from_path(path: SamplePath) -> Callable[[np.ndarray], SamplePath]:
    """Refinement by restriction of one pre-drawn fine path.

    The scalable backbone for refined RS sums: draw the integrator once at
    the finest resolution (e.g. the FFT-based FBM sampler) and serve every
    coarser level as a restriction of that single realization.
    """

    def sampler(grid: np.ndarray) -> SamplePath:
        grid = np.asarray(grid, dtype=float)
        idx = _match_times(path, grid)
        if idx.size == 0:
            raise ValueError("requested grid is not contained in the pre-drawn path")
        return SamplePath(grid, path.values[idx])

    return sampler


def sampler_from_fbm(
    h: HurstIndex, rng: np.random.Generator
) -> Callable[[np.ndarray], SamplePath]:
    """Refinement by exact conditional midpoint insertion of one FBM draw.

    The first requested grid fixes the realization; each finer request must
    be the midpoint refinement of the previous one and is served from the
    conditional Gaussian law given the values already drawn.  Dense linear
    algebra caps the resolution; past that cap, pre-draw with the FFT
    sampler and use :func:`sampler_from_path`.
    """
    state: dict[str, SamplePath | None] = {"path": None}

    def sampler(grid: np.ndarray) -> SamplePath:
        grid = np.asarray(grid, dtype=float)
        cur = state["path"]
        if cur is None:
            cur = sample_fbm(h, grid, rng)
        while cur.times.size < grid.size:
            cur = refine_fbm_midpoints(h, cur, rng)
        idx = _match_times(cur, grid)
        if idx.size != grid.size or cur.times.size != grid.size:
            raise ValueError(
                "grids must be successive midpoint refinements of the first "
                "requested grid"
            )
        cur = SamplePath(grid, cur.values[idx])
        state["path"] = cur
        return cur

    return sampler
