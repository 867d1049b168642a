from beamlu.linalg.blocking import BlockingScheme, block_view
from beamlu.linalg.dense import (
    UNIT_ROUNDOFF,
    as_matrix,
    matmul,
    matsub,
    solve_dense_lu,
    transpose,
)
from beamlu.linalg.norms import FRO, INF, MAX, ONE, SPECTRAL, SUM, NormKind, NormTag, block_max, block_sum, norm
from beamlu.linalg.svd import SvdResult, cond2, sigma_max, sigma_min, singular_values, svd_small

__all__ = [
    "BlockingScheme",
    "FRO",
    "INF",
    "MAX",
    "NormKind",
    "NormTag",
    "ONE",
    "SPECTRAL",
    "SUM",
    "SvdResult",
    "UNIT_ROUNDOFF",
    "as_matrix",
    "block_max",
    "block_sum",
    "block_view",
    "cond2",
    "matmul",
    "matsub",
    "norm",
    "sigma_max",
    "sigma_min",
    "singular_values",
    "solve_dense_lu",
    "svd_small",
    "transpose",
]
