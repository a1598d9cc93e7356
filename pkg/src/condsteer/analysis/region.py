"""Two-parameter region maps with per-cell predicate bitmasks."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..familyspec import FamilySpec
from .predicates import ALPHA_PREDICATES, Predicate, bitmask

DEFAULT_STEPS = 200


@dataclass(frozen=True)
class Axis:
    """Grid over one parameter. Open endpoints are moved inward by one step.

    The name ``alpha`` is special: it sets the order of every alpha-dependent
    predicate instead of a family parameter.
    """

    name: str
    lo: float
    hi: float
    steps: int = DEFAULT_STEPS
    open_lo: bool = False
    open_hi: bool = False

    def values(self) -> np.ndarray:
        if self.steps == 1:
            return np.array([0.5 * (self.lo + self.hi)])
        extra = int(self.open_lo) + int(self.open_hi)
        pts = np.linspace(self.lo, self.hi, self.steps + extra)
        if self.open_lo:
            pts = pts[1:]
        if self.open_hi:
            pts = pts[:-1]
        return pts

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "lo": self.lo,
            "hi": self.hi,
            "steps": self.steps,
            "open_lo": self.open_lo,
            "open_hi": self.open_hi,
        }


@dataclass(frozen=True)
class RegionMap:
    family: str
    axes: tuple[Axis, Axis]
    predicates: tuple[str, ...]
    cells: np.ndarray  # uint64 bitmask per cell, row-major (axis1 outer)
    counts: dict

    def flags(self, index: int | str) -> np.ndarray:
        """Boolean (steps1, steps2) map for one predicate."""
        if isinstance(index, str):
            index = self.predicates.index(index)
        s1, s2 = self.axes[0].steps, self.axes[1].steps
        return ((self.cells >> np.uint64(index)) & np.uint64(1)).astype(bool).reshape(s1, s2)

    def rows(self):
        v1, v2 = self.axes[0].values(), self.axes[1].values()
        for idx, cell in enumerate(self.cells):
            i, j = divmod(idx, len(v2))
            yield float(v1[i]), float(v2[j]), [int((int(cell) >> k) & 1) for k in range(len(self.predicates))]

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "axes": [a.to_dict() for a in self.axes],
            "predicates": list(self.predicates),
            "counts": dict(self.counts),
            "cells": [int(c) for c in self.cells],
        }


def scan_region(
    template: FamilySpec | str,
    axis1: Axis,
    axis2: Axis,
    predicates: list[Predicate],
) -> RegionMap:
    if isinstance(template, str):
        template = FamilySpec.parse(template)
    v1, v2 = axis1.values(), axis2.values()
    alpha_axis = "alpha" in (axis1.name, axis2.name)
    labels = tuple(p.id if alpha_axis and p.id in ALPHA_PREDICATES else p.label for p in predicates)
    cells = np.zeros(len(v1) * len(v2), dtype=np.uint64)
    idx = 0
    for x in v1:
        for y in v2:
            params = {}
            preds = list(predicates)
            for ax, val in ((axis1, x), (axis2, y)):
                if ax.name == "alpha":
                    preds = [p.with_alpha(float(val)) if p.id in ALPHA_PREDICATES else p for p in preds]
                else:
                    params[ax.name] = float(val)
            rho = template.with_params(**params).build()
            cells[idx] = bitmask([p(rho) for p in preds])
            idx += 1
    counts = {
        lab: int(((cells >> np.uint64(k)) & np.uint64(1)).sum()) for k, lab in enumerate(labels)
    }
    return RegionMap(str(template), (axis1, axis2), labels, cells, counts)
