"""Command-line front end.

    condsteer analyze   --family werner2:p=0.8
    condsteer entropy   --family weyl2:t=0,0,0 --alpha 2 --conditional
    condsteer steer     --family werner2:p=0.8 --criteria f3,chsh,bowles
    condsteer threshold --family werner2 --param p --predicate crae-negative --alpha 2
    condsteer scan      --family theta --axis theta --grid "(0:1.5707963268):50" \\
                        --axis beta --grid "(0:1]:50" --predicates crae-negative,f3-steerable
    condsteer verify    --theorem thm1 --samples 10000

Every command prints one JSON object (or CSV with ``--format csv``).
Exit status: 0 success, 1 computation error, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import re
import sys
import tempfile
from enum import Enum
from typing import Any, Sequence

import numpy as np

from . import __version__, entropy, numkit, states, steering
from .analysis import (
    CLAIMS,
    DEFAULT_SEED,
    Axis,
    Predicate,
    RegionMap,
    closed_form_crosscheck,
    find_threshold,
    scan_region,
    verify_theorem,
)
from .analysis import crosscheck as _crosscheck
from .analysis import threshold as _threshold
from .analysis import verify as _verify
from .errors import CondSteerError, DimensionMismatch
from .familyspec import FamilySpec

SCHEMA_VERSION = 1
SIG_DIGITS = 12
DEFAULT_ALPHAS = (2.0, 3.0, 4.0, 5.0)
CRITERIA = ("f3", "chsh", "bowles", "af3", "ppt", "cjwr")
TWO_QUBIT_CRITERIA = ("f3", "chsh", "bowles", "af3", "cjwr")

TOLERANCES = {
    "hermitian": numkit.HERMITIAN_TOL,
    "jacobi": numkit.JACOBI_TOL,
    "trace": states.TRACE_TOL,
    "psd": states.PSD_TOL,
    "spectrum_clip": entropy.CLIP_TOL,
    "bowles": steering.BOWLES_TOL,
    "ppt": steering.PPT_TOL,
    "bisection": _threshold.BISECT_TOL,
    "boundary_band": _verify.BOUNDARY_BAND,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# --- serialization ----------------------------------------------------------


def _round(x: float) -> float | None:
    if not math.isfinite(x):
        return None
    return float(format(x, f".{SIG_DIGITS}g"))


def _plain(obj: Any) -> Any:
    """Convert a report tree to JSON-native types with rounded floats."""
    if hasattr(obj, "to_dict"):
        return _plain(obj.to_dict())
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _round(float(obj))
    if isinstance(obj, complex):
        return [_round(obj.real), _round(obj.imag)]
    if obj is None or isinstance(obj, str):
        return obj
    return str(obj)


def _fmt_cell(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format(v, f".{SIG_DIGITS}g")
    return str(v)


def _flatten(obj: Any, prefix: str = "") -> list[tuple[str, Any]]:
    if isinstance(obj, dict):
        out = []
        for k, v in obj.items():
            out += _flatten(v, f"{prefix}.{k}" if prefix else str(k))
        return out
    if isinstance(obj, list) and any(isinstance(v, (dict, list)) for v in obj):
        out = []
        for i, v in enumerate(obj):
            out += _flatten(v, f"{prefix}[{i}]")
        return out
    if isinstance(obj, list):
        return [(prefix, " ".join(_fmt_cell(v) for v in obj))]
    return [(prefix, obj)]


def _region_csv(region: RegionMap) -> list[list[str]]:
    rows = [[region.axes[0].name, region.axes[1].name, *region.predicates]]
    for x, y, flags in region.rows():
        rows.append([_fmt_cell(_round(x)), _fmt_cell(_round(y)), *map(str, flags)])
    return rows


def serialize(report: dict, fmt: str = "json") -> bytes:
    """Render an envelope ``{command, inputs, results, seed}`` as JSON or CSV bytes.

    ``results`` may hold library objects; anything with ``to_dict`` is expanded.
    CSV output for a :class:`RegionMap` is one row per cell with 0/1 flags;
    threshold lists become one row per threshold; anything else is flattened
    into ``key,value`` pairs.
    """
    results = report.get("results")
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if isinstance(results, RegionMap):
            w.writerows(_region_csv(results))
        elif report.get("command") == "threshold":
            cols = ["family", "parameter", "predicate", "root", "bracket_lo", "bracket_hi", "iterations"]
            w.writerow(cols)
            for t in _plain(results)["thresholds"]:
                w.writerow(
                    [t["family"], t["parameter"], t["predicate"], _fmt_cell(t["root"]),
                     _fmt_cell(t["bracket"][0]), _fmt_cell(t["bracket"][1]), t["iterations"]]
                )
        else:
            w.writerow(["key", "value"])
            for k, v in _flatten(_plain(results)):
                w.writerow([k, _fmt_cell(v)])
        return buf.getvalue().encode()
    if fmt != "json":
        raise ValueError(f"unknown format {fmt!r}")
    doc = {
        "schema_version": SCHEMA_VERSION,
        "command": report.get("command"),
        "inputs": _plain(report.get("inputs", {})),
        "results": _plain(results),
        "provenance": {
            "package_version": __version__,
            "seed": report.get("seed"),
            "tolerances": _plain(TOLERANCES),
        },
    }
    return (json.dumps(doc, indent=2, sort_keys=True, allow_nan=False) + "\n").encode()


# --- argument helpers -------------------------------------------------------


def _family(text: str) -> FamilySpec:
    try:
        return FamilySpec.parse(text)
    except CondSteerError as exc:
        raise UsageError(str(exc)) from exc


def _alphas(raw: list[str] | None) -> tuple[list[float], bool]:
    """Expand repeated/comma-separated ``--alpha``; returns (orders, von Neumann requested)."""
    if not raw:
        return list(DEFAULT_ALPHAS), False
    out, vn = [], False
    for chunk in raw:
        for tok in chunk.split(","):
            tok = tok.strip()
            if not tok:
                continue
            try:
                a = float(tok)
            except ValueError as exc:
                raise UsageError(f"--alpha: not a number: {tok!r}") from exc
            if a == 1.0:
                vn = True
                continue
            try:
                entropy.Alpha(a)
            except CondSteerError as exc:
                raise UsageError(f"--alpha: {exc}") from exc
            if a not in out:
                out.append(a)
    if vn:
        print("notice: alpha=1 is the von Neumann limit; reporting von_neumann instead", file=sys.stderr)
    return out, vn


def _predicates(raw: list[str], alphas: list[float]) -> list[Predicate]:
    out = []
    for chunk in raw:
        for tok in chunk.split(","):
            tok = tok.strip()
            if not tok:
                continue
            try:
                if "(" in tok:
                    out.append(Predicate.parse(tok))
                elif tok in ("crae-negative", "ctae-negative"):
                    out += [Predicate(tok, a) for a in alphas]
                else:
                    out.append(Predicate(tok))
            except CondSteerError as exc:
                raise UsageError(str(exc)) from exc
    if not out:
        raise UsageError("no predicates given")
    return out


def _range(text: str) -> tuple[float, float]:
    parts = text.split(":")
    try:
        lo, hi = (float(p) for p in parts)
    except ValueError as exc:
        raise UsageError(f"--range must be lo:hi, got {text!r}") from exc
    if not lo < hi:
        raise UsageError(f"--range needs lo < hi, got {text!r}")
    return lo, hi


_GRID_RE = re.compile(r"^\s*([\[(]?)\s*([^:\[\]()]+):([^:\[\]()]+?)\s*([\])]?)\s*:\s*(\d+)\s*$")


def _axis(name: str, grid: str) -> Axis:
    """``lo:hi:steps``; wrap as ``(lo:hi]:steps`` etc. to mark open ends."""
    m = _GRID_RE.match(grid)
    if not m:
        raise UsageError(f"--grid must be lo:hi:steps, got {grid!r}")
    left, lo, hi, right, steps = m.groups()
    try:
        lo_f, hi_f = float(lo), float(hi)
    except ValueError as exc:
        raise UsageError(f"--grid bounds must be numbers, got {grid!r}") from exc
    n = int(steps)
    if n < 1 or not lo_f <= hi_f:
        raise UsageError(f"--grid needs lo <= hi and steps >= 1, got {grid!r}")
    return Axis(name, lo_f, hi_f, n, open_lo=left == "(", open_hi=right == ")")


def _seed(text: str) -> int:
    try:
        v = int(text, 0)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from exc
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return v


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from exc
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _ints(text: str) -> list[int]:
    """``2,3,4`` or ``2:10`` (inclusive)."""
    try:
        if ":" in text:
            lo, hi = (int(p) for p in text.split(":"))
            return list(range(lo, hi + 1))
        return [int(p) for p in text.split(",") if p.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad integer list {text!r}") from exc


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", metavar="PATH", help="write the report here instead of stdout")
    common.add_argument("--seed", type=_seed, default=DEFAULT_SEED, help="RNG seed (default 0xC0FFEE)")

    ap = _Parser(prog="condsteer", description="Conditional entropies and steering criteria of bipartite states.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def family_cmd(name, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("--family", required=True, metavar="SPEC")
        return p

    p = family_cmd("analyze", "state summary: Bloch data, entropies and every applicable criterion")
    p.add_argument("--alpha", action="append", metavar="A[,A...]")

    p = family_cmd("entropy", "von Neumann, Renyi and Tsallis entropies")
    p.add_argument("--alpha", action="append", metavar="A[,A...]")
    p.add_argument("--conditional", action="store_true", help="report S(A|B) instead of S(AB)")

    p = family_cmd("steer", "steering, nonlocality and entanglement criteria")
    p.add_argument("--criteria", default=",".join(CRITERIA), metavar="C[,C...]")

    p = family_cmd("threshold", "bisect one family parameter for a predicate sign change")
    p.add_argument("--param", required=True)
    p.add_argument("--range", default="0:1", metavar="LO:HI")
    p.add_argument("--predicate", required=True)
    p.add_argument("--alpha", action="append", metavar="A[,A...]")
    p.add_argument("--tol", type=float, default=_threshold.BISECT_TOL)

    p = family_cmd("scan", "two-parameter region map of predicate outcomes")
    p.add_argument("--axis", action="append", required=True, metavar="NAME")
    p.add_argument("--grid", action="append", required=True, metavar="LO:HI:STEPS")
    p.add_argument("--predicates", "--predicate", action="append", required=True, dest="predicates")
    p.add_argument("--alpha", action="append", metavar="A[,A...]")

    p = sub.add_parser("verify", parents=[common], help="randomized or grid verification of a claim")
    what = p.add_mutually_exclusive_group(required=True)
    what.add_argument("--theorem", choices=sorted(CLAIMS))
    what.add_argument("--crosscheck", choices=_crosscheck.FAMILIES)
    p.add_argument("--samples", type=_positive_int)
    p.add_argument("--d-values", type=_ints, metavar="D[,D...]|LO:HI")
    p.add_argument(
        "--mode", choices=("exact-harmonic", "paper-log-form"), default="exact-harmonic",
        help="isotropic LHS threshold form",
    )
    return ap


# --- commands ---------------------------------------------------------------


def _akey(a: float) -> str:
    return format(a, "g")


def _entropies(rho, alphas, vn: bool, conditional: bool) -> dict:
    if conditional:
        out = {
            "von_neumann": entropy.cond_von_neumann(rho),
            "renyi": {_akey(a): entropy.cond_renyi(rho, a) for a in alphas},
            "tsallis": {_akey(a): entropy.cond_tsallis(rho, a) for a in alphas},
        }
    else:
        out = {
            "von_neumann": entropy.von_neumann(rho),
            "renyi": {_akey(a): entropy.renyi(rho, a) for a in alphas},
            "tsallis": {_akey(a): entropy.tsallis(rho, a) for a in alphas},
        }
    if not alphas:
        del out["renyi"], out["tsallis"]
    return out


def _criteria(rho, names) -> dict:
    out = {}
    for name in names:
        if name == "f3":
            out[name] = steering.f3_max(rho)
        elif name == "chsh":
            out[name] = steering.chsh_horodecki(rho)
        elif name == "bowles":
            out[name] = steering.bowles_unsteerable(rho)
        elif name == "af3":
            out[name] = steering.af3_member(rho)
        elif name == "ppt":
            out[name] = steering.ppt_entangled(rho)
        else:
            dirs = steering.MeasurementDirections.axis_aligned(3)
            out[name] = {"value": steering.cjwr_value(rho, dirs), "directions": "axis-aligned, n=3"}
    return out


def _cmd_analyze(args) -> dict:
    spec = _family(args.family)
    alphas, _ = _alphas(args.alpha)
    rho = spec.build()
    bf = states.decompose(rho)
    names = list(CRITERIA) if rho.dims == (2, 2) else ["ppt"]
    res = {
        "dims": list(rho.dims),
        "purity": rho.purity,
        "spectrum": rho.spectrum,
        "bloch": {"norm_a": bf.norm_a, "norm_b": bf.norm_b, "norm_T": bf.norm_T},
        "entropy": _entropies(rho, alphas, False, False),
        "conditional_entropy": _entropies(rho, alphas, False, True),
        "criteria": _criteria(rho, names),
    }
    if rho.dims == (2, 2):
        res["bloch"].update(a=bf.a, b=bf.b, T=bf.T)
    return {"inputs": {"family": str(spec), "alpha": alphas}, "results": res}


def _cmd_entropy(args) -> dict:
    spec = _family(args.family)
    alphas, vn = _alphas(args.alpha)
    rho = spec.build()
    return {
        "inputs": {"family": str(spec), "alpha": alphas, "conditional": args.conditional},
        "results": _entropies(rho, alphas, vn, args.conditional),
    }


def _cmd_steer(args) -> dict:
    spec = _family(args.family)
    names = [c.strip() for c in args.criteria.split(",") if c.strip()]
    bad = [c for c in names if c not in CRITERIA]
    if bad or not names:
        raise UsageError(f"--criteria: unknown {bad or 'empty list'}; choose from {','.join(CRITERIA)}")
    rho = spec.build()
    if rho.dims != (2, 2) and any(c in TWO_QUBIT_CRITERIA for c in names):
        raise DimensionMismatch(f"criteria {', '.join(c for c in names if c in TWO_QUBIT_CRITERIA)} require a two-qubit state")
    return {"inputs": {"family": str(spec), "criteria": names}, "results": _criteria(rho, names)}


def _cmd_threshold(args) -> dict:
    spec = _family(args.family)
    lo, hi = _range(args.range)
    alphas, _ = _alphas(args.alpha)
    preds = _predicates([args.predicate], alphas)
    key = args.param.replace("__", ".")
    if key not in spec.missing():
        raise UsageError(f"--param {args.param!r} is not a free parameter of {spec} (free: {spec.missing()})")
    found = [find_threshold(spec, key, (lo, hi), p, tol=args.tol) for p in preds]
    return {
        "inputs": {"family": str(spec), "param": key, "range": [lo, hi], "predicates": [p.label for p in preds]},
        "results": {"thresholds": found},
    }


def _cmd_scan(args) -> dict:
    spec = _family(args.family)
    if len(args.axis) != 2 or len(args.grid) != 2:
        raise UsageError("scan needs exactly two --axis NAME --grid LO:HI:STEPS pairs")
    axes = [_axis(n, g) for n, g in zip(args.axis, args.grid)]
    alphas, _ = _alphas(args.alpha)
    alpha_axis = any(a.name == "alpha" for a in axes)
    preds = _predicates(args.predicates, [alphas[0]] if alpha_axis else alphas)
    free = spec.missing()
    for a in axes:
        if a.name != "alpha" and a.name.replace("__", ".") not in free:
            raise UsageError(f"--axis {a.name!r} is not a free parameter of {spec} (free: {free})")
    region = scan_region(spec, axes[0], axes[1], preds)
    return {
        "inputs": {"family": str(spec), "axes": axes, "predicates": list(region.predicates)},
        "results": region,
    }


def _cmd_verify(args) -> dict:
    if args.crosscheck:
        rep = closed_form_crosscheck(args.crosscheck)
        return {"inputs": {"crosscheck": args.crosscheck}, "results": rep, "seed": None}
    rep = verify_theorem(args.theorem, args.samples, args.seed, d_values=args.d_values, mode=args.mode)
    inputs = {"theorem": args.theorem, "samples": rep.samples, "mode": args.mode}
    if args.d_values:
        inputs["d_values"] = args.d_values
    return {"inputs": inputs, "results": rep, "seed": rep.seed}


COMMANDS = {
    "analyze": _cmd_analyze,
    "entropy": _cmd_entropy,
    "steer": _cmd_steer,
    "threshold": _cmd_threshold,
    "scan": _cmd_scan,
    "verify": _cmd_verify,
}


def _emit(data: bytes, path: str | None) -> None:
    if path is None:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
        return
    # write-then-rename so a failure never leaves a partial file behind
    target = os.path.abspath(path)
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(target), prefix=".condsteer-")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    try:
        report = COMMANDS[args.verb](args)
        report.setdefault("seed", args.seed)
        report["command"] = args.verb
        data = serialize(report, args.format)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except CondSteerError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    try:
        _emit(data, args.out)
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
