"""Threshold search, region maps, gap functions and claim verification."""

from .crosscheck import CrosscheckReport, closed_form_crosscheck
from .gaps import F_gap, f_gap, g_gap, gap_value, h_gap
from .predicates import PREDICATE_IDS, Predicate, thm2_bound
from .region import Axis, RegionMap, scan_region
from .sampling import DEFAULT_SEED
from .threshold import ThresholdResult, find_threshold
from .verify import CLAIMS, TheoremReport, flip_algebra_cr2e, verify_theorem

__all__ = [
    "Axis",
    "CLAIMS",
    "CrosscheckReport",
    "DEFAULT_SEED",
    "F_gap",
    "PREDICATE_IDS",
    "Predicate",
    "RegionMap",
    "TheoremReport",
    "ThresholdResult",
    "closed_form_crosscheck",
    "f_gap",
    "find_threshold",
    "flip_algebra_cr2e",
    "g_gap",
    "gap_value",
    "h_gap",
    "scan_region",
    "thm2_bound",
    "verify_theorem",
]
