from beamlu.factorization.beam import (
    BeamFactorization,
    Capacitance,
    ModificationRecord,
    RefinementOptions,
    SolveReport,
    beam_factor,
    beam_solve,
    build_capacitance,
    modified_matrix,
)
from beamlu.factorization.block_lu import (
    BlockLUFactors,
    DiagFactorizer,
    GrowthRecord,
    GrowthTrace,
    factor_block_lu,
    growth_factor,
    is_block_strongly_nonsingular,
)
from beamlu.factorization.substitution import block_back_sub, block_forward_sub

__all__ = [
    "BeamFactorization",
    "BlockLUFactors",
    "Capacitance",
    "DiagFactorizer",
    "GrowthRecord",
    "GrowthTrace",
    "ModificationRecord",
    "RefinementOptions",
    "SolveReport",
    "beam_factor",
    "beam_solve",
    "build_capacitance",
    "block_back_sub",
    "block_forward_sub",
    "factor_block_lu",
    "growth_factor",
    "is_block_strongly_nonsingular",
    "modified_matrix",
]
