"""Fractional Brownian motion: exact covariance and exact-in-law sampling.

Fractional Brownian motion (FBM) with Hurst index H in (0, 1) is the centered
Gaussian process with

    Cov(B_t, B_s) = (|t|^{2H} + |s|^{2H} - |t - s|^{2H}) / 2,

self-similar with index H and with stationary increments.  This module holds
the covariance and its increment-autocovariance forms (exact and the
large-lag series), plus two exact samplers:

* a dense Cholesky sampler for arbitrary strictly increasing grids, including
  two-sided grids with negative times (B_0 = 0 pinned exactly), and
* a circulant-embedding FFT sampler for uniform grids, distributionally
  identical and much faster for long paths.

Conditional Gaussian midpoint insertion refines an existing draw without
re-drawing it, which is what pathwise mesh-refinement studies need.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import IO, Iterable, Sequence

import numpy as np

__all__ = [
    "GridSizeError",
    "HurstIndex",
    "SamplePath",
    "fbm_cov",
    "fbm_gram",
    "increment_autocov",
    "increment_autocov_series",
    "FbmGridSampler",
    "sample_fbm",
    "sample_fbm_many",
    "sample_fbm_uniform",
    "refine_fbm_midpoints",
]

_DENSE_GRID_CAP = 2 ** 14
_FFT_GRID_CAP = 2 ** 20
_JITTER = 1e-12


class GridSizeError(ValueError):
    """A grid exceeds the resource cap of the requested sampler."""


# ---------------------------------------------------------------------------
# domain types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HurstIndex:
    """Validated Hurst index H in (0, 1).

    The constant ``c_h = H(2H - 1)`` scales every second-order formula of the
    long-memory regime and is only defined for H > 1/2.
    """

    h: float

    def __post_init__(self) -> None:
        if not (0.0 < self.h < 1.0):
            raise ValueError(f"Hurst index must lie in (0, 1), got {self.h!r}")

    @property
    def c_h(self) -> float:
        if self.h <= 0.5:
            raise ValueError(
                f"c_h = H(2H-1) is only defined for H > 1/2, got H={self.h}"
            )
        return self.h * (2.0 * self.h - 1.0)


@dataclass(frozen=True)
class SamplePath:
    """A cadlag path on a finite grid.

    ``values[i]`` is the right limit at ``times[i]``; at a recorded jump time
    the left limit is ``value - jump``.  Jump bookkeeping is populated by the
    samplers that place jumps exactly (compound-Poisson components): every
    ``jump_times`` entry is also a grid point.
    """

    times: np.ndarray
    values: np.ndarray
    jump_times: np.ndarray = field(default_factory=lambda: np.empty(0))
    jump_sizes: np.ndarray = field(default_factory=lambda: np.empty(0))

    def __post_init__(self) -> None:
        t = np.asarray(self.times, dtype=float)
        v = np.asarray(self.values, dtype=float)
        jt = np.asarray(self.jump_times, dtype=float)
        js = np.asarray(self.jump_sizes, dtype=float)
        if t.ndim != 1 or v.ndim != 1 or t.shape != v.shape:
            raise ValueError("times and values must be 1-d arrays of equal length")
        if t.size < 1:
            raise ValueError("a path needs at least one grid point")
        if not np.all(np.diff(t) > 0.0):
            raise ValueError("times must be strictly increasing")
        if not np.all(np.isfinite(v)):
            raise ValueError("path values must be finite")
        if jt.shape != js.shape:
            raise ValueError("jump_times and jump_sizes must have equal length")
        if jt.size and not np.all(np.isin(jt, t)):
            raise ValueError("every jump time must be a grid point")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "jump_times", jt)
        object.__setattr__(self, "jump_sizes", js)

    def __len__(self) -> int:
        return self.times.size

    def index_of(self, t: float) -> int:
        """Index of an exact grid time (raises if t is off-grid)."""
        i = int(np.searchsorted(self.times, t))
        if i == self.times.size or self.times[i] != t:
            raise ValueError(f"time {t!r} is not a grid point")
        return i

    def value_at(self, t: float) -> float:
        return float(self.values[self.index_of(t)])

    def left_limit_at(self, t: float) -> float:
        """Left limit at a grid time: the value minus any recorded jump there."""
        v = self.value_at(t)
        hit = np.nonzero(self.jump_times == t)[0]
        if hit.size:
            v -= float(self.jump_sizes[hit].sum())
        return v

    def to_csv(self, out: IO[str], header_lines: Iterable[str] = ()) -> None:
        """Write (time, value) rows with 17-significant-digit formatting."""
        for line in header_lines:
            out.write(f"# {line}\n")
        out.write("time,value\n")
        for t, v in zip(self.times, self.values):
            out.write(f"{t:.17g},{v:.17g}\n")


# ---------------------------------------------------------------------------
# covariance formulas
# ---------------------------------------------------------------------------

def fbm_cov(h: HurstIndex, t: float, s: float) -> float:
    """Cov(B_t, B_s) = (|t|^{2H} + |s|^{2H} - |t-s|^{2H}) / 2 (two-sided)."""
    p = 2.0 * h.h
    return 0.5 * (abs(t) ** p + abs(s) ** p - abs(t - s) ** p)


def fbm_gram(h: HurstIndex, times: Sequence[float]) -> np.ndarray:
    """Gram (covariance) matrix of FBM on a grid; valid for two-sided grids."""
    t = np.asarray(times, dtype=float)
    p = 2.0 * h.h
    at = np.abs(t) ** p
    return 0.5 * (at[:, None] + at[None, :] - np.abs(t[:, None] - t[None, :]) ** p)


def increment_autocov(h: HurstIndex, lag_s: float, width_h: float) -> float:
    """Cov(B_{t+w} - B_t, B_{t+s+w} - B_{t+s}) for lag s > width w > 0.

    Expanding the covariance gives the exact form
    ((s+w)^{2H} + (s-w)^{2H} - 2 s^{2H}) / 2: positive for H > 1/2, negative
    for H < 1/2, zero for Brownian motion.
    """
    if not (0.0 < width_h < lag_s):
        raise ValueError(
            f"need 0 < width < lag, got width={width_h!r}, lag={lag_s!r}"
        )
    p = 2.0 * h.h
    return 0.5 * ((lag_s + width_h) ** p + (lag_s - width_h) ** p - 2.0 * lag_s ** p)


def increment_autocov_series(
    h: HurstIndex, lag_s: float, width_h: float, n_terms: int
) -> float:
    """Large-lag expansion of :func:`increment_autocov` truncated at N terms.

    sum_{n=1}^{N} w^{2n}/(2n)! * prod_{k=0}^{2n-1} (2H - k) * s^{2H-2n},
    with residual O(s^{2H-2N-2}) as s grows.
    """
    if not (0.0 < width_h < lag_s):
        raise ValueError(
            f"need 0 < width < lag, got width={width_h!r}, lag={lag_s!r}"
        )
    if n_terms < 1:
        raise ValueError(f"n_terms must be >= 1, got {n_terms!r}")
    p = 2.0 * h.h
    total = 0.0
    prod = 1.0
    w_pow = 1.0
    fact = 1.0
    k = 0
    for n in range(1, n_terms + 1):
        prod *= (p - k) * (p - k - 1)
        k += 2
        w_pow *= width_h * width_h
        fact *= (2 * n - 1) * (2 * n)
        total += w_pow / fact * prod * lag_s ** (p - 2 * n)
    return total


# ---------------------------------------------------------------------------
# dense Cholesky sampler (arbitrary grids, two-sided)
# ---------------------------------------------------------------------------

class FbmGridSampler:
    """Exact FBM sampler on a fixed strictly increasing grid.

    Factorizes the Gram matrix once (with a single jitter retry of
    1e-12 * max diagonal on failure) and then draws batches cheaply.  Grids
    may include negative times and 0; the value at 0 is exactly 0.
    """

    def __init__(self, h: HurstIndex, times: Sequence[float]):
        t = np.asarray(times, dtype=float)
        if t.ndim != 1 or t.size < 1:
            raise ValueError("grid must be a nonempty 1-d array")
        if not np.all(np.diff(t) > 0.0):
            raise ValueError("grid must be strictly increasing (no duplicates)")
        if t.size > _DENSE_GRID_CAP:
            raise GridSizeError(
                f"dense factorization capped at {_DENSE_GRID_CAP} points, "
                f"got {t.size}"
            )
        self.h = h
        self.times = t
        self._nonzero = np.nonzero(t != 0.0)[0]
        gram = fbm_gram(h, t[self._nonzero])
        try:
            self._chol = np.linalg.cholesky(gram)
        except np.linalg.LinAlgError:
            gram[np.diag_indices_from(gram)] += _JITTER * gram.diagonal().max()
            self._chol = np.linalg.cholesky(gram)  # second failure propagates

    def draw(self, rng: np.random.Generator, n_paths: int = 1) -> np.ndarray:
        """Draw ``n_paths`` paths; returns array of shape (n_paths, n_times)."""
        z = rng.standard_normal((self._nonzero.size, n_paths))
        out = np.zeros((n_paths, self.times.size))
        out[:, self._nonzero] = (self._chol @ z).T
        return out


def sample_fbm(
    h: HurstIndex, times: Sequence[float], rng: np.random.Generator
) -> SamplePath:
    """One exact FBM draw on an arbitrary grid (see :class:`FbmGridSampler`).

    If 0 is absent from the grid it is still honored implicitly: B_0 = 0 has
    zero variance and zero covariance with every other point, so conditioning
    on it changes nothing.
    """
    sampler = FbmGridSampler(h, times)
    return SamplePath(sampler.times, sampler.draw(rng, 1)[0])


def sample_fbm_many(
    h: HurstIndex, times: Sequence[float], rng: np.random.Generator, n_paths: int
) -> np.ndarray:
    """Batch of exact FBM draws on a shared grid; shape (n_paths, n_times)."""
    return FbmGridSampler(h, times).draw(rng, n_paths)


# ---------------------------------------------------------------------------
# circulant-embedding sampler (uniform grids)
# ---------------------------------------------------------------------------

def _fgn_spectrum(h: HurstIndex, n: int) -> np.ndarray:
    """Circulant eigenvalues embedding the unit-step fGn autocovariance."""
    k = np.arange(n + 1, dtype=float)
    p = 2.0 * h.h
    r = 0.5 * ((k + 1.0) ** p + np.abs(k - 1.0) ** p - 2.0 * k ** p)
    c = np.concatenate([r, r[-2:0:-1]])
    eig = np.fft.rfft(c).real
    floor = -1e-9 * eig.max()
    if eig.min() < floor:
        raise np.linalg.LinAlgError(
            f"circulant embedding lost positive-definiteness (min eig {eig.min():g})"
        )
    return np.clip(eig, 0.0, None)


def sample_fbm_uniform(
    h: HurstIndex,
    n_steps: int,
    dt: float,
    rng: np.random.Generator,
    n_paths: int = 1,
) -> np.ndarray:
    """Exact FBM on the uniform grid 0, dt, ..., n_steps*dt via FFT embedding.

    Distributionally identical to the Cholesky sampler but O(n log n): the
    stationary increment sequence (fGn) is drawn through a circulant
    embedding, scaled by dt^H (self-similarity), and cumulated.  Returns an
    array of shape (n_paths, n_steps + 1) whose first column is 0.
    """
    if n_steps < 1:
        raise ValueError(f"n_steps must be >= 1, got {n_steps!r}")
    if n_steps > _FFT_GRID_CAP:
        raise GridSizeError(f"FFT sampler capped at {_FFT_GRID_CAP} steps, got {n_steps}")
    if not (dt > 0.0):
        raise ValueError(f"dt must be positive, got {dt!r}")
    n = int(n_steps)
    m = 2 * n
    eig = _fgn_spectrum(h, n)
    half = np.sqrt(eig / (2.0 * m))
    re = rng.standard_normal((n_paths, n + 1))
    im = rng.standard_normal((n_paths, n + 1))
    spec = (re + 1j * im) * half
    # endpoints carry real weight only: variance lambda/m, no imaginary part
    spec[:, 0] = re[:, 0] * np.sqrt(eig[0] / m)
    spec[:, n] = re[:, n] * np.sqrt(eig[n] / m)
    fgn = np.fft.irfft(spec, n=m)[:, :n] * m * dt ** h.h
    out = np.empty((n_paths, n + 1))
    out[:, 0] = 0.0
    np.cumsum(fgn, axis=1, out=out[:, 1:])
    return out


# ---------------------------------------------------------------------------
# conditional midpoint refinement
# ---------------------------------------------------------------------------

def refine_fbm_midpoints(
    h: HurstIndex, path: SamplePath, rng: np.random.Generator
) -> SamplePath:
    """Insert cell midpoints into an FBM draw, exactly in conditional law.

    Given values y on the existing grid, the midpoints are jointly Gaussian
    with mean C_no C_oo^{-1} y and covariance C_nn - C_no C_oo^{-1} C_on;
    drawing from that law refines the same realization, which is what a
    pathwise mesh-refinement limit requires.  The enlarged grid must stay
    under the dense-factorization cap.
    """
    told = path.times
    mids = 0.5 * (told[:-1] + told[1:])
    total = told.size + mids.size
    if total > _DENSE_GRID_CAP:
        raise GridSizeError(
            f"refined grid would have {total} points (cap {_DENSE_GRID_CAP})"
        )
    # B at t=0 is identically 0 and uncorrelated with everything: drop it from
    # the linear algebra and restore it afterwards.
    obs = told[told != 0.0]
    yobs = path.values[told != 0.0]
    c_oo = fbm_gram(h, obs)
    c_nn = fbm_gram(h, mids)
    p = 2.0 * h.h
    c_no = 0.5 * (
        np.abs(mids)[:, None] ** p
        + np.abs(obs)[None, :] ** p
        - np.abs(mids[:, None] - obs[None, :]) ** p
    )
    c_oo[np.diag_indices_from(c_oo)] += _JITTER * c_oo.diagonal().max()
    solve = np.linalg.solve
    mean = c_no @ solve(c_oo, yobs)
    cond = c_nn - c_no @ solve(c_oo, c_no.T)
    cond = 0.5 * (cond + cond.T)
    try:
        chol = np.linalg.cholesky(cond)
    except np.linalg.LinAlgError:
        cond[np.diag_indices_from(cond)] += _JITTER * max(cond.diagonal().max(), 1e-300)
        chol = np.linalg.cholesky(cond)
    ynew = mean + chol @ rng.standard_normal(mids.size)
    t_all = np.concatenate([told, mids])
    v_all = np.concatenate([path.values, ynew])
    order = np.argsort(t_all)
    return SamplePath(t_all[order], v_all[order])
