"""Deterministic random instances for property verification."""

from __future__ import annotations

import numpy as np

from ..errors import NotPositive
from ..states import PSD_TOL, DensityMatrix, random_state, weyl_state

DEFAULT_SEED = 0xC0FFEE
# eigenvalues of the Weyl state are (1 - s.t)/4 for these sign rows
WEYL_SIGNS = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], dtype=np.float64)


def make_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(int(seed)))


def random_weyl(rng: np.random.Generator) -> tuple[np.ndarray, DensityMatrix]:
    """Uniform over the Weyl tetrahedron by rejection from [-1, 1]^3."""
    while True:
        t = rng.uniform(-1.0, 1.0, 3)
        # closed-form spectrum; the constructor repeats the check numerically
        if (WEYL_SIGNS @ t).max() > 1.0 + PSD_TOL:
            continue
        try:
            return t, weyl_state(*t)
        except NotPositive:
            continue


def random_two_qubit(rng: np.random.Generator) -> DensityMatrix:
    return random_state((2, 2), rng)


def random_low_purity(rng: np.random.Generator, max_purity: float = 0.5) -> DensityMatrix:
    """Random two-qubit state mixed with I/4 down to a purity drawn uniformly in [1/4, max]."""
    rho = random_two_qubit(rng)
    p0 = rho.purity
    target = rng.uniform(0.25, min(max_purity, p0))
    # purity(lam rho + (1-lam) I/4) = 1/4 + lam^2 (p0 - 1/4)
    lam = np.sqrt((target - 0.25) / (p0 - 0.25))
    return DensityMatrix(lam * rho.mat + (1 - lam) * np.eye(4) / 4, (2, 2))
