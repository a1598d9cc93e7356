"""Compare printed closed forms against direct density-matrix computation."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..entropy import cond_renyi
from ..errors import OutOfRange
from ..states import decompose, isotropic, noisy_mix, nonweyl_bowles, theta_state, werner_qudit
from ..steering import f3_max

FAMILIES = ("wernerd", "isotropic", "theta", "nonweyl-noisy")


@dataclass
class CrosscheckReport:
    family: str
    points: int = 0
    max_abs_deviation: float = 0.0
    sign_disagreements: int = 0
    details: dict = field(default_factory=dict)

    def deviation(self, a: float, b: float) -> None:
        self.max_abs_deviation = max(self.max_abs_deviation, abs(a - b))

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "points": self.points,
            "max_abs_deviation": self.max_abs_deviation,
            "sign_disagreements": self.sign_disagreements,
            "details": self.details,
        }


def qudit_cr2e(d: int, norm_a2: float, norm_b2: float, norm_t2: float) -> float:
    """log2[(d + 2|b|^2) / (1 + 2(|a|^2 + |b|^2)/d + 4||T||^2/d^2)] for a d x d state."""
    return math.log2((d + 2 * norm_b2) / (1 + 2 * (norm_a2 + norm_b2) / d + 4 * norm_t2 / d**2))


def werner_norm_t2(d: int, eta: float) -> float:
    return 0.25 * eta**2 * d**2 * (d + 1) / (d - 1)


def _wernerd(rep: CrosscheckReport, d_values, etas) -> None:
    cr_dev = 0.0
    for d in d_values:
        for eta in etas:
            bf = decompose(werner_qudit(d, eta))
            rep.deviation(bf.norm_T**2, werner_norm_t2(d, eta))
            direct = cond_renyi(werner_qudit(d, eta), 2)
            closed = math.log2(d**3 / (d**2 + 4 * werner_norm_t2(d, eta)))
            cr_dev = max(cr_dev, abs(direct - closed))
            rep.points += 1
    rep.details["max_cr2e_deviation"] = cr_dev


def _isotropic(rep: CrosscheckReport, d_values, etas) -> None:
    for d in d_values:
        for eta in etas:
            rho = isotropic(d, eta)
            bf = decompose(rho)
            direct = cond_renyi(rho, 2)
            rep.deviation(direct, qudit_cr2e(d, bf.norm_a**2, bf.norm_b**2, bf.norm_T**2))
            if abs(direct) > 1e-9 and (direct < 0) != (eta > 1 / math.sqrt(d + 1)):
                rep.sign_disagreements += 1
            rep.points += 1


def _theta(rep: CrosscheckReport, thetas, betas) -> None:
    steer_mismatch = 0
    for th in thetas:
        c4 = math.cos(4 * th)
        for beta in betas:
            rho = theta_state(th, beta)
            closed = c4 < (2 * beta**2 - 1) / beta**2
            margin = beta**2 * (2 - c4) - 1
            rep.points += 1
            if abs(margin) < 1e-9:
                continue
            if closed != (cond_renyi(rho, 2) < 0):
                rep.sign_disagreements += 1
            if closed != (f3_max(rho).value > 1):
                steer_mismatch += 1
    rep.details["f3_disagreements"] = steer_mismatch


def _nonweyl_noisy(rep: CrosscheckReport, xs, ps, rs) -> None:
    by_sign = {"positive": {"points": 0, "disagreements": 0}, "negative": {"points": 0, "disagreements": 0}}
    flipped_ok = 0
    vanishing = 0
    for x in xs:
        c4 = math.cos(4 * x)
        for p in ps:
            base = nonweyl_bowles(x, p)
            for r in rs:
                den = 2 * p * p - r * r - p * p * (1 - 2 * r * r)
                rep.points += 1
                if abs(den) < 1e-12:
                    vanishing += 1
                    continue
                rhs = (r * r + 4 * r * r * p * p - p * p - 2) / den
                if abs(c4 - rhs) < 1e-9:
                    continue
                cr = cond_renyi(noisy_mix(base, r), 2)
                if abs(cr) < 1e-9:
                    continue
                printed = c4 >= rhs
                direct = cr >= 0
                key = "positive" if den > 0 else "negative"
                by_sign[key]["points"] += 1
                if printed != direct:
                    rep.sign_disagreements += 1
                    by_sign[key]["disagreements"] += 1
                    if den < 0 and (c4 <= rhs) == direct:
                        flipped_ok += 1
    rep.details.update(
        by_denominator_sign=by_sign,
        negative_denominator_disagreements_fixed_by_flipping=flipped_ok,
        vanishing_denominator=vanishing,
        caveat="inequality is stated without the sign of 2p^2 - r^2 - p^2(1 - 2r^2)",
    )


def closed_form_crosscheck(family: str, grid: dict | None = None) -> CrosscheckReport:
    """Run one closed-form comparison; ``grid`` overrides the default parameter grids."""
    if family not in FAMILIES:
        raise OutOfRange(f"unknown family {family!r}; expected one of {FAMILIES}")
    g = dict(grid or {})
    rep = CrosscheckReport(family)
    if family == "wernerd":
        _wernerd(rep, g.get("d", (2, 3, 4)), g.get("eta", np.linspace(0, 1, 11)))
    elif family == "isotropic":
        _isotropic(rep, g.get("d", (2, 3, 4)), g.get("eta", np.linspace(0, 1, 21)))
    elif family == "theta":
        steps = g.get("steps", 60)
        thetas = np.linspace(0, math.pi / 2, steps + 2)[1:-1]
        betas = np.linspace(0, 1, steps + 1)[1:]
        _theta(rep, g.get("theta", thetas), g.get("beta", betas))
    else:
        _nonweyl_noisy(
            rep,
            g.get("x", np.linspace(math.pi / 40, math.pi / 4, 10)),
            g.get("p", np.linspace(0.05, 1, 12)),
            g.get("r", np.linspace(0.05, 1, 12)),
        )
    return rep
