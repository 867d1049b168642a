"""Structural properties of the norm toolkit, phrased as BoundChecks.

Rectangular matrices carry separate row and column partitions; m_t and n_t
below are their block counts.
"""

from __future__ import annotations

import math

import numpy as np

from beamlu.diagnostics.checks import BoundCheck
from beamlu.linalg.blocking import BlockingScheme
from beamlu.linalg.dense import UNIT_ROUNDOFF
from beamlu.linalg.norms import FRO, INF, MAX, ONE, POINTWISE_NORMS, SPECTRAL, NormKind, block_max, block_sum, norm

SANDWICH_NORMS = (MAX, ONE, INF, FRO, SPECTRAL)


def _ctx(rows: BlockingScheme, cols: BlockingScheme, kind: NormKind) -> dict[str, str]:
    return {"rows": rows.label, "cols": cols.label, "norm": kind.label}


def _rel_diff(x: float, y: float) -> float:
    scale = max(abs(x), abs(y))
    return 0.0 if scale == 0.0 else abs(x - y) / scale


def partition_checks(b: np.ndarray, rows: BlockingScheme, cols: BlockingScheme) -> list[BoundCheck]:
    """max‖B_ij‖ ≤ ‖B‖ ≤ Σ‖B_ij‖, the block-norm sandwich and the tightened equivalences."""
    mt, nt = rows.n_blocks, cols.n_blocks
    checks: list[BoundCheck] = []
    for kind in POINTWISE_NORMS:
        ctx = _ctx(rows, cols, kind)
        whole = norm(b, kind)
        bmax = norm(b, block_max(kind, rows, cols))
        bsum = norm(b, block_sum(kind, rows, cols))
        checks.append(BoundCheck.compare("block_max_below_norm", bmax, whole, ctx))
        checks.append(BoundCheck.compare("norm_below_block_sum", whole, bsum, ctx))
        if kind in SANDWICH_NORMS:
            checks.append(BoundCheck.compare("block_sum_over_count_below_block_max", bsum / (mt * nt), bmax, ctx))
            checks.append(BoundCheck.compare("block_sum_below_count_block_max", bsum, mt * nt * bmax, ctx))

    checks.append(BoundCheck.compare("one_below_mt_block_max_one", norm(b, ONE), mt * norm(b, block_max(ONE, rows, cols)), _ctx(rows, cols, ONE)))
    checks.append(BoundCheck.compare("inf_below_nt_block_max_inf", norm(b, INF), nt * norm(b, block_max(INF, rows, cols)), _ctx(rows, cols, INF)))
    root = math.sqrt(mt * nt)
    fro = norm(b, FRO)
    ctx = _ctx(rows, cols, FRO)
    checks.append(BoundCheck.compare("block_sum_fro_over_root_below_fro", norm(b, block_sum(FRO, rows, cols)) / root, fro, ctx))
    checks.append(BoundCheck.compare("fro_below_root_block_max_fro", fro, root * norm(b, block_max(FRO, rows, cols)), ctx))
    return checks


def zero_padding_checks(b: np.ndarray, extra_rows: int, extra_cols: int) -> list[BoundCheck]:
    padded = np.zeros((b.shape[0] + extra_rows, b.shape[1] + extra_cols))
    padded[: b.shape[0], : b.shape[1]] = b
    checks = []
    for kind in POINTWISE_NORMS:
        # LAPACK may order the work differently on the padded shape
        tol = 1e-12 if kind == SPECTRAL else 8 * UNIT_ROUNDOFF
        diff = _rel_diff(norm(b, kind), norm(padded, kind))
        checks.append(BoundCheck.compare("zero_padding_invariance", diff, tol, {"norm": kind.label, "pad": [extra_rows, extra_cols]}))
    return checks


def column_additivity_checks(
    b1: np.ndarray,
    b2: np.ndarray,
    rows: BlockingScheme,
    cols1: BlockingScheme,
    cols2: BlockingScheme,
) -> list[BoundCheck]:
    """‖[B₁, B₂]‖_Σ = ‖B₁‖_Σ + ‖B₂‖_Σ and ‖[B₁, B₂]‖_max = max of the two."""
    joined = np.hstack([b1, b2])
    cols = BlockingScheme(cols1.starts[:-1] + tuple(s + cols1.n for s in cols2.starts))
    checks = []
    for kind in SANDWICH_NORMS:
        ctx = _ctx(rows, cols, kind)
        whole_sum = norm(joined, block_sum(kind, rows, cols))
        parts_sum = norm(b1, block_sum(kind, rows, cols1)) + norm(b2, block_sum(kind, rows, cols2))
        tol = 4 * UNIT_ROUNDOFF * rows.n_blocks * cols.n_blocks
        checks.append(BoundCheck.compare("block_sum_column_additivity", _rel_diff(whole_sum, parts_sum), tol, ctx))
        whole_max = norm(joined, block_max(kind, rows, cols))
        parts_max = max(norm(b1, block_max(kind, rows, cols1)), norm(b2, block_max(kind, rows, cols2)))
        checks.append(BoundCheck.compare("block_max_column_additivity", _rel_diff(whole_max, parts_max), 4 * UNIT_ROUNDOFF, ctx))
    return checks


def submultiplicativity_check(
    a: np.ndarray,
    b: np.ndarray,
    rows: BlockingScheme,
    inner: BlockingScheme,
    cols: BlockingScheme,
) -> BoundCheck:
    """‖AB‖_{ΣF} ≤ ‖A‖_{ΣF}‖B‖_{ΣF} for conformally partitioned A and B."""
    left = norm(a @ b, block_sum(FRO, rows, cols))
    right = norm(a, block_sum(FRO, rows, inner)) * norm(b, block_sum(FRO, inner, cols))
    return BoundCheck.compare("block_sum_fro_submultiplicative", left, right, {"rows": rows.label, "inner": inner.label, "cols": cols.label})
