from beamlu.diagnostics.checks import BoundCheck
from beamlu.diagnostics.dominance import (
    BlockDominance,
    DominanceReport,
    ModificationFreeBound,
    PointwiseDominance,
    block_dominance,
    dominance,
    is_spd,
    modification_free_bound,
    pointwise_dominance,
    scaled_modification_free_bound,
)
from beamlu.diagnostics.factors import check_backward_error, check_factor_bounds, factored_growth
from beamlu.diagnostics.growth import check_growth_bounds, check_interlacing, growth_check_norms
from beamlu.diagnostics.modifications import PsiReport, determinant_bounds, psi_and_capacitance
from beamlu.diagnostics.norm_properties import (
    column_additivity_checks,
    partition_checks,
    submultiplicativity_check,
    zero_padding_checks,
)
from beamlu.diagnostics.zielke import zielke_growth_check

__all__ = [
    "BlockDominance",
    "BoundCheck",
    "DominanceReport",
    "ModificationFreeBound",
    "PointwiseDominance",
    "PsiReport",
    "block_dominance",
    "check_backward_error",
    "check_factor_bounds",
    "check_growth_bounds",
    "check_interlacing",
    "column_additivity_checks",
    "determinant_bounds",
    "dominance",
    "factored_growth",
    "growth_check_norms",
    "is_spd",
    "modification_free_bound",
    "partition_checks",
    "pointwise_dominance",
    "psi_and_capacitance",
    "scaled_modification_free_bound",
    "submultiplicativity_check",
    "zielke_growth_check",
    "zero_padding_checks",
]
