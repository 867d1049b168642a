"""Diagonal dominance margins and the modification-free thresholds they imply.

Pointwise margins follow the usual definitions, δ_c = min_i |a_ii| − Σ_{j≠i}|a_ji|
and δ_r likewise over rows. Block margins use ‖A_jj⁻¹‖⁻¹ in place of |a_jj|, with
the 1-norm for columns and the ∞-norm for rows unless another inner norm is given.
A matrix counts as dominant only for a strictly positive margin.

From Varah's bound ‖A⁻¹‖₁ ≤ 1/δ_c (and its row and block analogues), applied to
every leading principal submatrix, σ_min(A_kk^(k)) ≥ σ_min(A_{1:k,1:k}) ≥ δ_c/√n.
Any τ at or below that value leaves BEAM without modifications.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla

from beamlu.core.errors import InvalidArgumentError, NumericalFailureError
from beamlu.linalg.blocking import BlockingScheme
from beamlu.linalg.dense import as_square, offdiag_abs_sums, solve_dense_lu
from beamlu.linalg.norms import INF, ONE, NormKind, norm
from beamlu.linalg.svd import singular_values


@dataclass(frozen=True)
class PointwiseDominance:
    by_rows: bool
    by_cols: bool
    delta_r: float
    delta_c: float


@dataclass(frozen=True)
class BlockDominance:
    by_rows: bool
    by_cols: bool
    delta_r: float
    delta_c: float
    inner_rows: NormKind
    inner_cols: NormKind
    blocking: BlockingScheme


@dataclass(frozen=True)
class DominanceReport:
    pointwise: PointwiseDominance
    blockwise: BlockDominance | None = None


@dataclass(frozen=True)
class ModificationFreeBound:
    tau_max_cols: float | None = None
    tau_max_rows: float | None = None
    tau_max_both: float | None = None
    tau_max_block_cols: float | None = None
    tau_max_block_rows: float | None = None
    tau_max_block_both: float | None = None
    tau_max_spd: float | None = None

    @property
    def best(self) -> float | None:
        values = [v for v in vars(self).values() if v is not None]
        return max(values) if values else None


def pointwise_dominance(a: np.ndarray) -> PointwiseDominance:
    a = as_square(a)
    d = np.abs(np.diag(a))
    delta_c = float(np.min(d - offdiag_abs_sums(a, axis=0)))
    delta_r = float(np.min(d - offdiag_abs_sums(a, axis=1)))
    return PointwiseDominance(by_rows=delta_r > 0, by_cols=delta_c > 0, delta_r=delta_r, delta_c=delta_c)


def _inverse_norm_reciprocal(block: np.ndarray, inner: NormKind) -> float:
    try:
        inv = solve_dense_lu(block, np.eye(block.shape[0]))
    except NumericalFailureError:
        return 0.0
    return 1.0 / norm(inv, inner)


def block_dominance(
    a: np.ndarray,
    blocking: BlockingScheme,
    *,
    inner_cols: NormKind = ONE,
    inner_rows: NormKind = INF,
) -> BlockDominance:
    a = as_square(a)
    blocking.check_dim(a.shape[0])
    ranges = blocking.ranges()
    nt = len(ranges)

    def margins(inner: NormKind) -> tuple[np.ndarray, np.ndarray]:
        blocks = np.empty((nt, nt))
        diag = np.empty(nt)
        for i, (r0, r1) in enumerate(ranges):
            for j, (c0, c1) in enumerate(ranges):
                if i == j:
                    blocks[i, j] = 0.0
                    diag[i] = _inverse_norm_reciprocal(a[r0:r1, c0:c1], inner)
                else:
                    blocks[i, j] = norm(a[r0:r1, c0:c1], inner)
        return diag, blocks

    diag_c, blocks_c = margins(inner_cols)
    delta_c = float(np.min(diag_c - blocks_c.sum(axis=0)))
    if inner_rows == inner_cols:
        diag_r, blocks_r = diag_c, blocks_c
    else:
        diag_r, blocks_r = margins(inner_rows)
    delta_r = float(np.min(diag_r - blocks_r.sum(axis=1)))
    return BlockDominance(
        by_rows=delta_r > 0,
        by_cols=delta_c > 0,
        delta_r=delta_r,
        delta_c=delta_c,
        inner_rows=inner_rows,
        inner_cols=inner_cols,
        blocking=blocking,
    )


def dominance(a: np.ndarray, blocking: BlockingScheme | None = None, inner_norm: NormKind | None = None) -> DominanceReport:
    blockwise = None
    if blocking is not None:
        if inner_norm is None:
            blockwise = block_dominance(a, blocking)
        else:
            blockwise = block_dominance(a, blocking, inner_cols=inner_norm, inner_rows=inner_norm)
    return DominanceReport(pointwise=pointwise_dominance(a), blockwise=blockwise)


def is_spd(a: np.ndarray) -> bool:
    a = as_square(a)
    if not np.array_equal(a, a.T):
        return False
    try:
        sla.cholesky(a, lower=True, check_finite=False)
    except sla.LinAlgError:
        return False
    return True


def _thresholds(delta_c: float | None, delta_r: float | None, n: int) -> tuple[float | None, float | None, float | None]:
    root_n = math.sqrt(n)
    cols = delta_c / root_n if delta_c is not None and delta_c > 0 else None
    rows = delta_r / root_n if delta_r is not None and delta_r > 0 else None
    both = math.sqrt(delta_c * delta_r) if cols is not None and rows is not None else None
    return cols, rows, both


def modification_free_bound(report: DominanceReport, a: np.ndarray) -> ModificationFreeBound:
    a = as_square(a)
    n = a.shape[0]
    p = report.pointwise
    cols, rows, both = _thresholds(p.delta_c, p.delta_r, n)
    b_cols = b_rows = b_both = None
    if report.blockwise is not None:
        b = report.blockwise
        b_cols, b_rows, b_both = _thresholds(b.delta_c, b.delta_r, n)
    spd = float(singular_values(a)[-1]) if is_spd(a) else None
    return ModificationFreeBound(
        tau_max_cols=cols,
        tau_max_rows=rows,
        tau_max_both=both,
        tau_max_block_cols=b_cols,
        tau_max_block_rows=b_rows,
        tau_max_block_both=b_both,
        tau_max_spd=spd,
    )


def scaled_modification_free_bound(a: np.ndarray, d1: np.ndarray, d2: np.ndarray) -> ModificationFreeBound:
    """H-matrix criterion for caller-supplied positive diagonal scalings.

    D₁A column dominant gives ‖A⁻¹‖₁ ≤ max(D₁)/δ_c^D; AD₂ row dominant gives
    ‖A⁻¹‖_∞ ≤ max(D₂)/δ_r^D. With D₁ = D₂ = I this is the unscaled criterion.
    """
    a = as_square(a)
    n = a.shape[0]
    d1 = np.asarray(d1, dtype=np.float64)
    d2 = np.asarray(d2, dtype=np.float64)
    if d1.shape != (n,) or d2.shape != (n,) or np.any(d1 <= 0) or np.any(d2 <= 0):
        raise InvalidArgumentError("scalings must be positive vectors of length n")
    dc = pointwise_dominance(d1[:, None] * a).delta_c
    dr = pointwise_dominance(a * d2[None, :]).delta_r
    s1, s2 = float(d1.max()), float(d2.max())
    root_n = math.sqrt(n)
    cols = dc / (s1 * root_n) if dc > 0 else None
    rows = dr / (s2 * root_n) if dr > 0 else None
    both = math.sqrt(dc * dr / (s1 * s2)) if cols is not None and rows is not None else None
    return ModificationFreeBound(tau_max_cols=cols, tau_max_rows=rows, tau_max_both=both)
