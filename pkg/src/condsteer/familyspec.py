"""Textual state-family specifications.

Grammar::

    spec   := kind [":" param ("," param)*]
    param  := key "=" value ("," number)*      # trailing numbers extend a vector
    value  := number | "(" spec ")"

Examples: ``werner2:p=0.6``, ``weyl2:t=0.3,-0.2,0.5``,
``isotropic:d=3,eta=0.4``, ``noisy:r=0.7,inner=(wernerd:d=3,eta=0.5)``.
A spec with missing parameters is a template; fill it with
:meth:`FamilySpec.with_params` before calling :meth:`FamilySpec.build`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Mapping

from . import states
from .errors import SpecSyntaxError
from .states import DensityMatrix

# kind -> {param: length} ; length 0 = scalar, -1 = integer scalar, "spec" = nested
FAMILIES: dict[str, dict[str, Any]] = {
    "werner2": {"p": 0},
    "weyl2": {"t": 3},
    "general2": {"a": 3, "b": 3, "T": 9},
    "theta": {"theta": 0, "beta": 0},
    "nonweyl": {"x": 0, "p": 0},
    "isotropic": {"d": -1, "eta": 0},
    "wernerd": {"d": -1, "eta": 0},
    "noisy": {"r": 0, "inner": "spec"},
}


def _fmt(v) -> str:
    if isinstance(v, FamilySpec):
        return f"({v})"
    if isinstance(v, tuple):
        return ",".join(_fmt(x) for x in v)
    if isinstance(v, int):
        return str(v)
    return format(float(v), ".12g")


@dataclass(frozen=True)
class FamilySpec:
    kind: str
    params: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in FAMILIES:
            raise SpecSyntaxError(f"unknown family {self.kind!r}; expected one of {sorted(FAMILIES)}")
        schema = FAMILIES[self.kind]
        clean = {}
        for key, val in dict(self.params).items():
            if key not in schema:
                raise SpecSyntaxError(f"family {self.kind!r} has no parameter {key!r}")
            clean[key] = _coerce(self.kind, key, schema[key], val)
        object.__setattr__(self, "params", clean)

    def __str__(self) -> str:
        order = [k for k in FAMILIES[self.kind] if k in self.params]
        if not order:
            return self.kind
        return self.kind + ":" + ",".join(f"{k}={_fmt(self.params[k])}" for k in order)

    @classmethod
    def parse(cls, text: str) -> "FamilySpec":
        spec, rest = _parse_spec(text.strip(), 0)
        if rest != len(text.strip()):
            raise SpecSyntaxError(f"trailing characters in {text!r}")
        return spec

    def missing(self) -> list[str]:
        out = [k for k in FAMILIES[self.kind] if k not in self.params]
        inner = self.params.get("inner")
        if isinstance(inner, FamilySpec):
            out += [f"inner.{k}" for k in inner.missing()]
        return out

    def with_params(self, **values) -> "FamilySpec":
        """Copy with parameters set; ``inner__eta`` or ``{"inner.eta": v}`` reach the nested spec."""
        params = dict(self.params)
        nested: dict[str, Any] = {}
        for key, val in values.items():
            key = key.replace("__", ".")
            if key.startswith("inner."):
                nested[key[len("inner."):]] = val
            else:
                params[key] = val
        if nested:
            inner = params.get("inner")
            if not isinstance(inner, FamilySpec):
                raise SpecSyntaxError(f"{self.kind!r} has no nested family")
            params["inner"] = inner.with_params(**nested)
        return FamilySpec(self.kind, params)

    def build(self) -> DensityMatrix:
        miss = self.missing()
        if miss:
            raise SpecSyntaxError(f"{self} is a template; missing {', '.join(miss)}")
        p = self.params
        k = self.kind
        if k == "werner2":
            return states.werner_qubit(p["p"])
        if k == "weyl2":
            return states.weyl_state(*p["t"])
        if k == "general2":
            return states.general2(p["a"], p["b"], p["T"])
        if k == "theta":
            return states.theta_state(p["theta"], p["beta"])
        if k == "nonweyl":
            return states.nonweyl_bowles(p["x"], p["p"])
        if k == "isotropic":
            return states.isotropic(p["d"], p["eta"])
        if k == "wernerd":
            return states.werner_qudit(p["d"], p["eta"])
        return states.noisy_mix(p["inner"].build(), p["r"])


def _coerce(kind, key, length, val):
    if length == "spec":
        if isinstance(val, str):
            val = FamilySpec.parse(val)
        if not isinstance(val, FamilySpec):
            raise SpecSyntaxError(f"{kind}.{key} must be a family spec")
        return val
    if isinstance(val, FamilySpec):
        raise SpecSyntaxError(f"{kind}.{key} must be numeric")
    try:
        if length == -1:
            f = float(val)
            if f != int(f):
                raise SpecSyntaxError(f"{kind}.{key} must be an integer, got {val}")
            return int(f)
        if length == 0:
            return float(val)
        vec = tuple(float(x) for x in val)
    except (TypeError, ValueError) as exc:
        raise SpecSyntaxError(f"bad value for {kind}.{key}: {val!r}") from exc
    if len(vec) != length:
        raise SpecSyntaxError(f"{kind}.{key} needs {length} values, got {len(vec)}")
    return vec


def _parse_spec(s: str, i: int) -> tuple[FamilySpec, int]:
    j = i
    while j < len(s) and (s[j].isalnum() or s[j] == "_"):
        j += 1
    kind = s[i:j]
    if not kind:
        raise SpecSyntaxError(f"expected a family name at position {i} of {s!r}")
    if kind not in FAMILIES:
        raise SpecSyntaxError(f"unknown family {kind!r}; expected one of {sorted(FAMILIES)}")
    raw: dict[str, list] = {}
    if j < len(s) and s[j] == ":":
        j += 1
        key = None
        while True:
            tok_start = j
            eq = None
            while j < len(s) and s[j] not in ",()":
                if s[j] == "=" and eq is None:
                    eq = j
                j += 1
            if eq is not None:
                key = s[tok_start:eq].strip()
                val_text = s[eq + 1 : j].strip()
                if key in raw:
                    raise SpecSyntaxError(f"duplicate parameter {key!r} in {s!r}")
                raw[key] = []
                if not val_text and j < len(s) and s[j] == "(":
                    inner, j = _parse_spec(s, j + 1)
                    if j >= len(s) or s[j] != ")":
                        raise SpecSyntaxError(f"unbalanced parentheses in {s!r}")
                    j += 1
                    raw[key].append(inner)
                else:
                    raw[key].append(val_text)
            else:
                text = s[tok_start:j].strip()
                if key is None or not text:
                    raise SpecSyntaxError(f"expected key=value at position {tok_start} of {s!r}")
                raw[key].append(text)
            if j < len(s) and s[j] == ",":
                j += 1
                continue
            break
    params = {}
    for key, vals in raw.items():
        length = FAMILIES[kind].get(key)
        if length is None:
            raise SpecSyntaxError(f"family {kind!r} has no parameter {key!r}")
        params[key] = vals[0] if length in (0, -1, "spec") and len(vals) == 1 else vals
    return FamilySpec(kind, params), j
