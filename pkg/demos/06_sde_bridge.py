"""
From geometric SDE to discounted representation
===============================================

Solutions of dY = Y_- dU + dB^H are the discounted integrals
Y = e^{-xi}(Y_0 + int e^{xi_{s-}} dB^H_s) with e^{-xi} the stochastic
exponential of U.  This script shows the exponent conversion and its
jump identity, then lets a left-point Euler scheme for the SDE converge
to the closed construction along shared noise, for a continuous driver
and for one with jumps.
"""

import numpy as np

from gfou import (
    FbmGridSampler,
    HurstIndex,
    JumpLaw,
    SamplePath,
    brownian_motion_with_drift,
    compound_poisson,
    euler_sde_from_paths,
    gfou_closed_from_paths,
    sample_levy,
    xi_from_u,
)
from gfou.levy import draw_jumps, sample_levy_on_grid

h = HurstIndex(0.7)
rng = np.random.default_rng(61)

# --- the exponent conversion and its jump identity -------------------------
cp = compound_poisson(2.0, JumpLaw.uniform(-0.5, 1.0), drift=0.2)
u = sample_levy(cp, np.linspace(0.0, 2.0, 9), rng)
xi = xi_from_u(u, gaussian_a=0.0)
print("driver jumps vs exponent jumps (e^{-dxi} = 1 + dU):")
for t, du, dxi in zip(u.jump_times, u.jump_sizes, xi.jump_sizes):
    print(f"  t = {t:.3f}: dU = {du:+.4f}, e^(-dxi) - 1 = "
          f"{np.expm1(-dxi):+.4f}")

# --- Euler -> closed construction, shared noise ----------------------------
levels = [2 ** k for k in range(6, 13)]
n_fine = levels[-1]
fine = np.linspace(0.0, 1.0, n_fine + 1)
bm = brownian_motion_with_drift(1.5, 1.0)

for kind in ("Brownian driver with drift", "compound-Poisson driver"):
    rng = np.random.default_rng(61)
    rows = FbmGridSampler(h, fine).draw(rng, 20)
    errs = []
    for row in rows:
        if kind.startswith("Brownian"):
            u = sample_levy(bm, fine, rng)
            xi = xi_from_u(u, gaussian_a=1.0)
        else:
            jt, js = draw_jumps(cp, 1.0, rng, fine)
            snapped = fine[np.searchsorted(fine, jt)]  # jumps live on cells
            u = sample_levy_on_grid(cp, fine, rng, snapped, js)
            xi = xi_from_u(u, gaussian_a=0.0)
        ref = gfou_closed_from_paths(xi, SamplePath(fine, row), 1.0).values[-1]
        errs.append([
            abs(euler_sde_from_paths(
                SamplePath(fine[::n_fine // n], u.values[::n_fine // n]),
                SamplePath(fine[::n_fine // n], row[::n_fine // n]),
                1.0,
            ).values[-1] - ref)
            for n in levels
        ])
    med = np.median(np.asarray(errs), axis=0)
    rate = -np.polyfit(np.log(levels), np.log(med), 1)[0]
    print(f"\n{kind}: median |Euler - closed| at t = 1")
    for n, e in zip(levels, med):
        print(f"  mesh 2^-{int(np.log2(n)):<2}: {e:.5f}")
    print(f"  fitted self-convergence rate {rate:.3f}")
