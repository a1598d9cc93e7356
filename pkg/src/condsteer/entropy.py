"""Von Neumann, Renyi and Tsallis entropies and their conditional versions.

All logarithms are base 2. Conditional quantities follow
``S(A|B) = S(rho) - S(rho_B)``; the conditional Tsallis entropy uses
``(Tr rho_B^a - Tr rho^a) / ((a - 1) Tr rho_B^a)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import OutOfRange
from .states import DensityMatrix, _as_state

CLIP_TOL = 1e-9


@dataclass(frozen=True)
class Alpha:
    """Entropy order: strictly positive and bounded away from 1."""

    value: float

    def __post_init__(self):
        v = float(self.value)
        if not v > 0 or abs(v - 1.0) < 1e-9 or not math.isfinite(v):
            raise OutOfRange(f"alpha must be > 0 and != 1, got {self.value}")
        object.__setattr__(self, "value", v)

    @classmethod
    def coerce(cls, alpha: "float | Alpha") -> "Alpha":
        return alpha if isinstance(alpha, cls) else cls(alpha)


def _eigenvalues(rho: DensityMatrix) -> np.ndarray:
    lam = np.array(_as_state(rho).spectrum)
    lam[(lam < 0) & (lam >= -CLIP_TOL)] = 0.0
    return lam


def trace_power(rho: DensityMatrix, alpha: float | Alpha) -> float:
    """Tr(rho^alpha) from the clipped spectrum."""
    a = Alpha.coerce(alpha).value
    lam = _eigenvalues(rho)
    lam = lam[lam > 0]
    return float(np.sum(lam**a))


def von_neumann(rho: DensityMatrix) -> float:
    lam = _eigenvalues(rho)
    lam = lam[lam > 0]
    return float(max(0.0, -np.sum(lam * np.log2(lam))))


def renyi(rho: DensityMatrix, alpha: float | Alpha) -> float:
    a = Alpha.coerce(alpha).value
    return math.log2(trace_power(rho, a)) / (1.0 - a)


def tsallis(rho: DensityMatrix, alpha: float | Alpha) -> float:
    a = Alpha.coerce(alpha).value
    return (trace_power(rho, a) - 1.0) / (1.0 - a)


def _marginal_b(rho: DensityMatrix) -> DensityMatrix:
    return _as_state(rho).marginal("B")


def cond_von_neumann(rho: DensityMatrix) -> float:
    return von_neumann(rho) - von_neumann(_marginal_b(rho))


def cond_renyi(rho: DensityMatrix, alpha: float | Alpha) -> float:
    a = Alpha.coerce(alpha)
    return renyi(rho, a) - renyi(_marginal_b(rho), a)


def cond_tsallis(rho: DensityMatrix, alpha: float | Alpha) -> float:
    a = Alpha.coerce(alpha).value
    tb = trace_power(_marginal_b(rho), a)
    return (tb - trace_power(rho, a)) / ((a - 1.0) * tb)
