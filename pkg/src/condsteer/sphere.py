"""Global maximisation of smooth functions on the unit 2-sphere.

A deterministic Fibonacci lattice locates candidate maxima; the best
lattice points then seed Nelder-Mead runs in spherical coordinates. The
simplex updates of all seeds are vectorised together.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

LATTICE_SIZE = 10_000
N_SEEDS = 20
NM_FATOL = 1e-10
NM_XATOL = 1e-8
NM_MAX_ITER = 500

SphereFunction = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class SphereMax:
    value: float
    direction: np.ndarray
    iterations: int


@lru_cache(maxsize=4)
def fibonacci_sphere(n: int = LATTICE_SIZE) -> np.ndarray:
    i = np.arange(n) + 0.5
    z = 1.0 - 2.0 * i / n
    phi = np.pi * (1.0 + np.sqrt(5.0)) * i
    rad = np.sqrt(1.0 - z * z)
    pts = np.stack([rad * np.cos(phi), rad * np.sin(phi), z], axis=1)
    pts.flags.writeable = False
    return pts


def to_cartesian(angles: np.ndarray) -> np.ndarray:
    theta, phi = angles[..., 0], angles[..., 1]
    st = np.sin(theta)
    out = np.empty(angles.shape[:-1] + (3,))
    out[..., 0] = st * np.cos(phi)
    out[..., 1] = st * np.sin(phi)
    out[..., 2] = np.cos(theta)
    return out


def to_angles(x: np.ndarray) -> np.ndarray:
    return np.stack([np.arccos(np.clip(x[..., 2], -1.0, 1.0)), np.arctan2(x[..., 1], x[..., 0])], axis=-1)


def _nelder_mead(f, x0: np.ndarray, step: float, max_iter: int):
    """Minimise ``f`` from every row of ``x0`` at once (2-d search space)."""
    k = x0.shape[0]
    simplex = np.stack([x0, x0 + [step, 0.0], x0 + [0.0, step]], axis=1)
    fs = f(simplex.reshape(-1, 2)).reshape(k, 3)
    rows = np.arange(k)[:, None]
    it = 0
    for it in range(1, max_iter + 1):
        order = np.argsort(fs, axis=1)
        simplex = simplex[rows, order]
        fs = fs[rows, order]
        spread = fs[:, 2] - fs[:, 0]
        size = np.abs(simplex[:, 1:] - simplex[:, :1]).max(axis=(1, 2))
        active = (spread > NM_FATOL) | (size > NM_XATOL)
        if not active.any():
            break
        worst = simplex[:, 2]
        centroid = 0.5 * (simplex[:, 0] + simplex[:, 1])
        xr = 2.0 * centroid - worst
        xe = 3.0 * centroid - 2.0 * worst
        xo = 0.5 * (centroid + xr)
        xi = 0.5 * (centroid + worst)
        fr, fe, fo, fi = f(np.concatenate([xr, xe, xo, xi])).reshape(4, k)

        new_x = worst.copy()
        new_f = fs[:, 2].copy()
        expand = fr < fs[:, 0]
        use_e = expand & (fe < fr)
        reflect = (~expand & (fr < fs[:, 1])) | (expand & ~use_e)
        outside = ~expand & ~reflect & (fr < fs[:, 2]) & (fo <= fr)
        inside = ~expand & ~reflect & (fr >= fs[:, 2]) & (fi < fs[:, 2])
        shrink = ~(expand | reflect | outside | inside)
        for mask, xs, fv in ((use_e, xe, fe), (reflect, xr, fr), (outside, xo, fo), (inside, xi, fi)):
            new_x[mask] = xs[mask]
            new_f[mask] = fv[mask]

        upd = active & ~shrink
        simplex[upd, 2] = new_x[upd]
        fs[upd, 2] = new_f[upd]
        sh = active & shrink
        if sh.any():
            best = simplex[sh, :1]
            simplex[sh, 1:] = best + 0.5 * (simplex[sh, 1:] - best)
            fs[sh, 1:] = f(simplex[sh, 1:].reshape(-1, 2)).reshape(-1, 2)
    best_idx = np.argmin(fs, axis=1)
    pts = simplex[np.arange(k), best_idx]
    return pts, fs[np.arange(k), best_idx], it


def maximize_on_sphere(
    fun: SphereFunction,
    *,
    lattice: int = LATTICE_SIZE,
    seeds: int = N_SEEDS,
    max_iter: int = NM_MAX_ITER,
) -> SphereMax:
    """Maximise ``fun`` over unit vectors; ``fun`` maps an (m, 3) array to (m,) values."""
    pts = fibonacci_sphere(lattice)
    vals = fun(pts)
    top = np.argsort(vals)[::-1][:seeds]
    start = to_angles(pts[top])
    step = 0.5 * np.sqrt(4.0 * np.pi / lattice)

    def neg(angles):
        return -fun(to_cartesian(angles))

    ends, fvals, iters = _nelder_mead(neg, start, step, max_iter)
    j = int(np.argmin(fvals))
    best_val, best_x = -float(fvals[j]), to_cartesian(ends[j])
    if vals[top[0]] > best_val:
        best_val, best_x = float(vals[top[0]]), pts[top[0]].copy()
    return SphereMax(value=best_val, direction=best_x, iterations=iters)
