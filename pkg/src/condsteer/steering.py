"""Steerability, nonlocality and entanglement criteria.

Each criterion returns a :class:`CriterionReport`. Verdict semantics:
``Violated`` means the classical bound of the criterion is broken
(steerable, CHSH-violating, entangled, outside AF3); ``Satisfied`` means it
holds; ``Inconclusive`` is used by one-sided criteria that cannot certify
the opposite conclusion.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from . import numkit
from .errors import DimensionMismatch, OutOfRange
from .sphere import maximize_on_sphere
from .states import DensityMatrix, SIGMA_X, SIGMA_Y, SIGMA_Z, _as_state, decompose

F3_TOL = 1e-12
BOWLES_TOL = 1e-9
AF3_TOL = 1e-12
PPT_TOL = 1e-10
SHAPE_TOL = 1e-10
UNIT_TOL = 1e-10


class Verdict(str, enum.Enum):
    VIOLATED = "Violated"
    SATISFIED = "Satisfied"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class CriterionReport:
    criterion: str
    value: float
    threshold: float
    verdict: Verdict
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "criterion": self.criterion,
            "value": self.value,
            "threshold": self.threshold,
            "verdict": self.verdict.value,
            **({"details": self.details} if self.details else {}),
        }


@dataclass(frozen=True)
class MeasurementDirections:
    """Unit vectors ``u`` for Alice and orthonormal vectors ``v`` for Bob."""

    u: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        u = np.atleast_2d(np.asarray(self.u, dtype=np.float64))
        v = np.atleast_2d(np.asarray(self.v, dtype=np.float64))
        if u.shape != v.shape or u.shape[1] != 3:
            raise DimensionMismatch(f"u and v must both be (n, 3); got {u.shape} and {v.shape}")
        if u.shape[0] > 3:
            raise DimensionMismatch("at most three orthonormal settings exist in R^3")
        if np.abs(np.linalg.norm(u, axis=1) - 1.0).max() > UNIT_TOL:
            raise OutOfRange("every u_l must be a unit vector")
        if np.abs(v @ v.T - np.eye(v.shape[0])).max() > UNIT_TOL:
            raise OutOfRange("v_l must be orthonormal")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)

    @property
    def n(self) -> int:
        return self.u.shape[0]

    @classmethod
    def axis_aligned(cls, n: int = 3) -> "MeasurementDirections":
        e = np.eye(3)[:n]
        return cls(e, e)


def _qubits(rho) -> DensityMatrix:
    rho = _as_state(rho)
    if rho.dims != (2, 2):
        raise DimensionMismatch(f"criterion needs a two-qubit state, got dims {rho.dims}")
    return rho


def cjwr_value(rho: DensityMatrix, dirs: MeasurementDirections) -> float:
    """(1/sqrt n) |sum_l <u_l.sigma (x) v_l.sigma>|."""
    rho = _qubits(rho)
    total = 0.0
    for u, v in zip(dirs.u, dirs.v):
        a_op = u[0] * SIGMA_X + u[1] * SIGMA_Y + u[2] * SIGMA_Z
        b_op = v[0] * SIGMA_X + v[1] * SIGMA_Y + v[2] * SIGMA_Z
        total += np.trace(rho.mat @ np.kron(a_op, b_op)).real
    return abs(total) / math.sqrt(dirs.n)


def f3_max(rho: DensityMatrix) -> CriterionReport:
    """Optimal three-setting CJWR value sqrt(Tr T^T T)."""
    t = decompose(_qubits(rho)).T
    value = float(np.linalg.norm(t))
    verdict = Verdict.VIOLATED if value > 1.0 + F3_TOL else Verdict.SATISFIED
    return CriterionReport("f3", value, 1.0, verdict)


def chsh_horodecki(rho: DensityMatrix) -> CriterionReport:
    t = decompose(_qubits(rho)).T
    lam = numkit.symmetric_spectrum(t.T @ t)
    value = float(lam[0] + lam[1])
    verdict = Verdict.VIOLATED if value > 1.0 else Verdict.SATISFIED
    return CriterionReport("chsh", value, 1.0, verdict)


def _filter_bob(rho: DensityMatrix, b: np.ndarray) -> DensityMatrix | None:
    """Local filter on Bob making his marginal I/2; None when rho_B is singular.

    An invertible operation on the steered party leaves A->B steerability
    unchanged, so the criterion may be applied to the filtered state.
    """
    nb = float(np.linalg.norm(b))
    if nb >= 1.0 - SHAPE_TOL:
        return None
    bhat = b / nb
    lp, lm = (1.0 + nb) ** -0.5, (1.0 - nb) ** -0.5
    # (I + b.sigma)^(-1/2) has eigenvalues (1 +- |b|)^(-1/2) along +-bhat
    f = 0.5 * (lp + lm) * np.eye(2) + 0.5 * (lp - lm) * (
        bhat[0] * SIGMA_X + bhat[1] * SIGMA_Y + bhat[2] * SIGMA_Z
    )
    k = np.kron(np.eye(2), f)
    out = k @ rho.mat @ k.conj().T
    return DensityMatrix(out / np.trace(out).real, (2, 2))


def bowles_unsteerable(rho: DensityMatrix) -> CriterionReport:
    """Sufficient A->B unsteerability test max_x [(a.x)^2 + 2 ||T^T x||] <= 1.

    States with a nonzero Bob Bloch vector are first filtered on Bob's side.
    ``Satisfied`` certifies unsteerability; otherwise the result is
    ``Inconclusive``.
    """
    rho = _qubits(rho)
    bf = decompose(rho)
    filtered = False
    if np.linalg.norm(bf.b) > SHAPE_TOL:
        canon = _filter_bob(rho, bf.b)
        if canon is None:
            return CriterionReport(
                "bowles", math.nan, 1.0, Verdict.INCONCLUSIVE, {"reason": "Bob marginal is pure"}
            )
        bf = decompose(canon)
        filtered = True
        if np.linalg.norm(bf.b) > SHAPE_TOL:
            return CriterionReport(
                "bowles", math.nan, 1.0, Verdict.INCONCLUSIVE, {"reason": "filtering failed"}
            )
    a, t = bf.a, bf.T

    def objective(x):
        y = x @ t
        return (x @ a) ** 2 + 2.0 * np.sqrt(np.einsum("ij,ij->i", y, y))

    best = maximize_on_sphere(objective)
    verdict = Verdict.SATISFIED if best.value <= 1.0 + BOWLES_TOL else Verdict.INCONCLUSIVE
    return CriterionReport(
        "bowles",
        best.value,
        1.0,
        verdict,
        {"filtered": filtered, "argmax": best.direction.tolist()},
    )


def af3_member(rho: DensityMatrix) -> CriterionReport:
    """Purity <= 1/2: F3-unsteerable under every global unitary."""
    value = _qubits(rho).purity
    verdict = Verdict.SATISFIED if value <= 0.5 + AF3_TOL else Verdict.VIOLATED
    return CriterionReport("af3", value, 0.5, verdict)


def harmonic_number(d: int) -> float:
    return math.fsum(1.0 / k for k in range(1, d + 1))


def isotropic_lhs_threshold(d: int, mode: str = "exact-harmonic") -> float:
    """Largest eta for which the d x d isotropic state has a projective LHS model.

    ``exact-harmonic`` gives (H_d - 1)/(d - 1); ``paper-log-form`` gives the
    logarithmic approximation (ln(1 + 2d) - 1)/(d - 1).
    """
    if int(d) != d or d < 2:
        raise OutOfRange(f"d must be an integer >= 2, got {d}")
    d = int(d)
    if mode == "exact-harmonic":
        return (harmonic_number(d) - 1.0) / (d - 1)
    if mode == "paper-log-form":
        return (math.log(1 + 2 * d) - 1.0) / (d - 1)
    raise OutOfRange(f"unknown mode {mode!r}")


def werner_lhs_threshold(d: int) -> float:
    if int(d) != d or d < 2:
        raise OutOfRange(f"d must be an integer >= 2, got {d}")
    return 1.0 - 1.0 / int(d)


def ppt_entangled(rho: DensityMatrix) -> CriterionReport:
    """Minimum eigenvalue of the partial transpose on B.

    Negative certifies entanglement. For two qubits a non-negative value
    certifies separability; in higher dimension it is inconclusive.
    """
    rho = _as_state(rho)
    pt = numkit.partial_transpose(rho.mat, "B", rho.dims)
    value = float(numkit.hermitian_spectrum(pt)[-1])
    if value < -PPT_TOL:
        verdict = Verdict.VIOLATED
    elif rho.dims == (2, 2):
        verdict = Verdict.SATISFIED
    else:
        verdict = Verdict.INCONCLUSIVE
    return CriterionReport("ppt", value, 0.0, verdict)
