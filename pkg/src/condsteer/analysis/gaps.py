"""Closed-form gap functions comparing LHS thresholds with CR2E boundaries.

Each is a difference "CR2E-side bound minus LHS-side bound"; non-negative
values mean the LHS region sits inside the region of non-negative CR2E.
"""

from __future__ import annotations

import math

from ..errors import DivisionByZero, OutOfRange

DENOM_TOL = 1e-14


def h_gap(r: float, p: float) -> float:
    """Closed-form noisy non-Weyl CR2E bound minus the unsteerability bound."""
    if not (0.0 <= r <= 1.0 and 0.0 <= p <= 1.0):
        raise OutOfRange(f"h needs r, p in [0, 1], got r={r}, p={p}")
    den1 = 2 * p * p - r * r - p * p * (1 - 2 * r * r)
    den2 = (2 - p) * p**3
    if abs(den1) < DENOM_TOL:
        raise DivisionByZero(f"h(r={r}, p={p}): denominator 2p^2 - r^2 - p^2(1 - 2r^2) vanishes")
    if abs(den2) < DENOM_TOL:
        raise DivisionByZero(f"h(r={r}, p={p}): denominator (2 - p) p^3 vanishes")
    first = (r * r + 4 * r * r * p * p - p * p - 2) / den1
    second = (2 * (2 * p - 1) - (2 - p) * p**3) / den2
    return first - second


def f_gap(x: float) -> float:
    """1/sqrt(x+1) - (ln(1+2x) - 1)/(x - 1), the isotropic log-form gap."""
    if x < 2:
        raise OutOfRange(f"f needs x >= 2, got {x}")
    return 1.0 / math.sqrt(x + 1) - (math.log(1 + 2 * x) - 1) / (x - 1)


def g_gap(d: float) -> float:
    """d sqrt(d-1)/2 - sqrt(d^2-1)/2 for the d x d Werner state."""
    if d < 2:
        raise OutOfRange(f"g needs d >= 2, got {d}")
    return 0.5 * d * math.sqrt(d - 1) - 0.5 * math.sqrt(d * d - 1)


def F_gap(r: float, d: float) -> float:
    """(d-1)/(r sqrt(d+1)) - (1 - 1/d) for the noisy d x d Werner state."""
    if d < 2 or not 0.0 <= r <= 1.0:
        raise OutOfRange(f"F needs 0 < r <= 1 and d >= 2, got r={r}, d={d}")
    if r == 0.0:
        raise DivisionByZero("F(r, d) is undefined at r = 0")
    return (d - 1) / (r * math.sqrt(d + 1)) - (1 - 1 / d)


GAPS = {"h": h_gap, "f": f_gap, "g": g_gap, "F": F_gap}


def gap_value(name: str, *args: float) -> float:
    try:
        fn = GAPS[name]
    except KeyError:
        raise OutOfRange(f"unknown gap function {name!r}; expected one of {sorted(GAPS)}") from None
    return fn(*args)
