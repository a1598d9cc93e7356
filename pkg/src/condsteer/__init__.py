"""Conditional entropies and steerability of bipartite quantum states."""

from .entropy import (
    Alpha,
    cond_renyi,
    cond_tsallis,
    cond_von_neumann,
    renyi,
    tsallis,
    von_neumann,
)
from .familyspec import FamilySpec
from .states import (
    BlochFano,
    DensityMatrix,
    decompose,
    isotropic,
    noisy_mix,
    nonweyl_bowles,
    reconstruct,
    theta_state,
    werner_qubit,
    werner_qudit,
    weyl_state,
)
from .steering import (
    CriterionReport,
    MeasurementDirections,
    Verdict,
    af3_member,
    bowles_unsteerable,
    chsh_horodecki,
    cjwr_value,
    f3_max,
    isotropic_lhs_threshold,
    ppt_entangled,
    werner_lhs_threshold,
)

__version__ = "0.1.0"
