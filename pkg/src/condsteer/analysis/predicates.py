"""Boolean predicates over density matrices, each backed by one library call."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .. import entropy, steering
from ..errors import OutOfRange
from ..states import DensityMatrix, decompose
from ..steering import Verdict

PREDICATE_IDS = (
    "cvne-negative",
    "crae-negative",
    "ctae-negative",
    "f3-steerable",
    "chsh-violated",
    "bowles-unsteerable",
    "af3-member",
    "ppt-entangled",
    "cr2e-below-thm2-bound",
)
ALPHA_PREDICATES = ("crae-negative", "ctae-negative")


def thm2_bound(rho: DensityMatrix) -> float:
    """log2[(1 + |b|^2) / (1 + (|a|^2 + |b|^2)/2)]."""
    bf = decompose(rho)
    a2, b2 = bf.norm_a**2, bf.norm_b**2
    return math.log2((1 + b2) / (1 + 0.5 * (a2 + b2)))


@dataclass(frozen=True)
class Predicate:
    id: str
    alpha: float | None = None

    def __post_init__(self):
        if self.id not in PREDICATE_IDS:
            raise OutOfRange(f"unknown predicate {self.id!r}; expected one of {PREDICATE_IDS}")
        if self.id in ALPHA_PREDICATES:
            if self.alpha is None:
                raise OutOfRange(f"predicate {self.id!r} needs alpha")
            object.__setattr__(self, "alpha", entropy.Alpha(self.alpha).value)
        elif self.alpha is not None:
            raise OutOfRange(f"predicate {self.id!r} takes no alpha")

    @property
    def label(self) -> str:
        if self.alpha is None:
            return self.id
        return f"{self.id}({format(self.alpha, 'g')})"

    def with_alpha(self, alpha: float) -> "Predicate":
        return Predicate(self.id, alpha)

    def __call__(self, rho: DensityMatrix) -> bool:
        pid = self.id
        if pid == "cvne-negative":
            return entropy.cond_von_neumann(rho) < 0
        if pid == "crae-negative":
            return entropy.cond_renyi(rho, self.alpha) < 0
        if pid == "ctae-negative":
            return entropy.cond_tsallis(rho, self.alpha) < 0
        if pid == "f3-steerable":
            return steering.f3_max(rho).verdict is Verdict.VIOLATED
        if pid == "chsh-violated":
            return steering.chsh_horodecki(rho).verdict is Verdict.VIOLATED
        if pid == "bowles-unsteerable":
            return steering.bowles_unsteerable(rho).verdict is Verdict.SATISFIED
        if pid == "af3-member":
            return steering.af3_member(rho).verdict is Verdict.SATISFIED
        if pid == "ppt-entangled":
            return steering.ppt_entangled(rho).verdict is Verdict.VIOLATED
        return entropy.cond_renyi(rho, 2) < thm2_bound(rho)

    @classmethod
    def parse(cls, text: str, alpha: float | None = None) -> "Predicate":
        """Accept ``crae-negative`` (with ``alpha``) or ``crae-negative(3)``."""
        text = text.strip()
        if text.endswith(")") and "(" in text:
            name, arg = text[:-1].split("(", 1)
            return cls(name, float(arg))
        if text in ALPHA_PREDICATES:
            return cls(text, alpha)
        return cls(text)


def bitmask(flags: list[bool] | np.ndarray) -> int:
    return int(sum(1 << i for i, f in enumerate(flags) if f))
