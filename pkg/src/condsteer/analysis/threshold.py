"""Bisection for the parameter value where a predicate changes truth value."""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import NoBracket, SpecSyntaxError
from ..familyspec import FamilySpec
from .predicates import Predicate

BISECT_TOL = 1e-10
BISECT_MAX_ITER = 200


@dataclass(frozen=True)
class ThresholdResult:
    family: str
    parameter: str
    predicate: str
    search_range: tuple[float, float]
    bracket: tuple[float, float]
    root: float
    tolerance: float
    iterations: int
    truth_below: bool

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "parameter": self.parameter,
            "predicate": self.predicate,
            "search_range": list(self.search_range),
            "bracket": list(self.bracket),
            "root": self.root,
            "tolerance": self.tolerance,
            "iterations": self.iterations,
            "truth_below": self.truth_below,
        }


def find_threshold(
    template: FamilySpec | str,
    param: str,
    search_range: tuple[float, float],
    predicate: Predicate,
    *,
    tol: float = BISECT_TOL,
    max_iter: int = BISECT_MAX_ITER,
) -> ThresholdResult:
    """Bisect ``param`` of ``template`` over ``search_range`` for a sign change of ``predicate``."""
    if isinstance(template, str):
        template = FamilySpec.parse(template)
    key = param.replace("__", ".")
    if key not in template.missing():
        raise SpecSyntaxError(f"{param!r} is not a free parameter of {template}")

    def truth(value: float) -> bool:
        return bool(predicate(template.with_params(**{key: value}).build()))

    lo, hi = float(search_range[0]), float(search_range[1])
    t_lo, t_hi = truth(lo), truth(hi)
    if t_lo == t_hi:
        raise NoBracket(f"{predicate.label} is {t_lo} at both {lo} and {hi}")
    it = 0
    while hi - lo > tol and it < max_iter:
        mid = 0.5 * (lo + hi)
        if truth(mid) == t_lo:
            lo = mid
        else:
            hi = mid
        it += 1
    return ThresholdResult(
        family=str(template),
        parameter=key,
        predicate=predicate.label,
        search_range=(float(search_range[0]), float(search_range[1])),
        bracket=(lo, hi),
        root=0.5 * (lo + hi),
        tolerance=tol,
        iterations=it,
        truth_below=t_lo,
    )
