"""Block LU factorization with a pluggable diagonal-block factorizer.

Elimination proceeds strictly block by block; the full trailing Schur
complement is updated once per step and its norms are recorded before the
diagonal block is factored, so every growth factor can be read off the trace.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable, Mapping

import numpy as np
import scipy.linalg as sla

from beamlu.core.config import JacobiOptions
from beamlu.core.errors import BlockSingularError, InvalidArgumentError, NumericalFailureError
from beamlu.core.logging import get_logger
from beamlu.linalg.blocking import BlockingScheme
from beamlu.linalg.dense import UNIT_ROUNDOFF, as_square, solve_dense_lu
from beamlu.linalg.norms import NormKind, default_trace_norms, norm
from beamlu.linalg.svd import singular_values, svd_small

logger = get_logger(__name__)


class DiagFactorizer(str, Enum):
    IDENTITY = "identity"
    POINTWISE_LU = "pointwise_lu"
    UNITARY = "unitary"


@dataclass(frozen=True)
class GrowthRecord:
    k: int
    norms: Mapping[NormKind, float]
    sigma_min: float
    subdiag_norm: float


@dataclass(frozen=True)
class GrowthTrace:
    """Per-step norms of the trailing Schur complement.

    When a Schur complement overflows, elimination stops: the step gets an
    all-inf record and `overflow_step` names it. L and R are then incomplete.
    """

    records: tuple[GrowthRecord, ...]
    norm_kinds: frozenset[NormKind]
    overflow_step: int | None = None

    def __len__(self) -> int:
        return len(self.records)

    @property
    def overflowed(self) -> bool:
        return self.overflow_step is not None

    def series(self, kind: NormKind) -> np.ndarray:
        if kind not in self.norm_kinds:
            raise InvalidArgumentError(f"norm {kind.label} was not traced")
        return np.array([rec.norms[kind] for rec in self.records])

    @property
    def max_subdiag_norm(self) -> float:
        return max(rec.subdiag_norm for rec in self.records)


@dataclass(frozen=True)
class BlockLUFactors:
    l: np.ndarray
    r: np.ndarray
    blocking: BlockingScheme
    trace: GrowthTrace
    diag: DiagFactorizer

    def product(self) -> np.ndarray:
        return self.l @ self.r


@dataclass(frozen=True)
class Modification:
    """One raised singular value of diagonal block k (local singular vectors)."""

    block: int
    delta: float
    u: np.ndarray
    v: np.ndarray


@dataclass
class _DiagonalBlock:
    """Factored A_kk = L_kk R_kk together with the solves elimination needs."""

    l: np.ndarray
    r: np.ndarray
    sigma_min: float
    r_right_solve: Callable[[np.ndarray], np.ndarray]
    l_left_solve: Callable[[np.ndarray], np.ndarray]
    l_right_solve: Callable[[np.ndarray], np.ndarray]
    modifications: list[Modification] = field(default_factory=list)


def _identity_block(akk: np.ndarray, k: int) -> _DiagonalBlock:
    def r_right_solve(x: np.ndarray) -> np.ndarray:
        try:
            return solve_dense_lu(akk.T, x.T).T
        except NumericalFailureError as exc:
            raise BlockSingularError(block=k) from exc

    return _DiagonalBlock(
        l=np.eye(akk.shape[0]),
        r=akk.copy(),
        sigma_min=float(singular_values(akk)[-1]),
        r_right_solve=r_right_solve,
        l_left_solve=lambda x: x.copy(),
        l_right_solve=lambda x: x.copy(),
    )


def pointwise_lu(akk: np.ndarray, k: int = 1) -> tuple[np.ndarray, np.ndarray]:
    """Non-pivoted scalar LU, outer-product form."""
    w = akk.copy()
    nb = w.shape[0]
    tiny = UNIT_ROUNDOFF * float(np.max(np.abs(akk)))
    for j in range(nb):
        piv = w[j, j]
        if abs(piv) <= tiny:
            logger.debug("pointwise_lu_zero_pivot", block=k, pivot=j + 1)
            raise BlockSingularError(block=k, message=f"zero pivot {j + 1} in diagonal block {k}")
        w[j + 1 :, j] /= piv
        w[j + 1 :, j + 1 :] -= np.outer(w[j + 1 :, j], w[j, j + 1 :])
    return np.tril(w, -1) + np.eye(nb), np.triu(w)


def _pointwise_block(akk: np.ndarray, k: int) -> _DiagonalBlock:
    l, r = pointwise_lu(akk, k)
    return _DiagonalBlock(
        l=l,
        r=r,
        sigma_min=float(singular_values(akk)[-1]),
        r_right_solve=lambda x: sla.solve_triangular(r, x.T, trans="T", lower=False).T,
        l_left_solve=lambda x: sla.solve_triangular(l, x, lower=True, unit_diagonal=True),
        l_right_solve=lambda x: sla.solve_triangular(l, x.T, trans="T", lower=True, unit_diagonal=True).T,
    )


def _unitary_block(akk: np.ndarray, k: int, options: JacobiOptions, threshold: float | None) -> _DiagonalBlock:
    svd = svd_small(akk, options)
    sigma = svd.sigma.copy()
    sigma_min = float(sigma[-1])
    mods: list[Modification] = []
    if threshold is not None:
        # σ ≤ τ is raised to exactly τ; the recorded delta is τ − σ as computed.
        # An exact tie leaves σ unchanged and records nothing.
        for i in np.flatnonzero(sigma <= threshold):
            delta = float(threshold - sigma[i])
            sigma[i] = threshold
            if delta > 0.0:
                mods.append(Modification(block=k, delta=delta, u=svd.u[:, i].copy(), v=svd.vt[i, :].copy()))

    u, vt = svd.u, svd.vt
    # With a threshold every σ is at least τ > 0.
    check_singular = threshold is None

    def r_right_solve(x: np.ndarray) -> np.ndarray:
        if check_singular and sigma[-1] <= akk.shape[0] * UNIT_ROUNDOFF * sigma[0]:
            raise BlockSingularError(block=k)
        return (x @ vt.T) / sigma

    return _DiagonalBlock(
        l=u.copy(),
        r=sigma[:, None] * vt,
        sigma_min=sigma_min,
        r_right_solve=r_right_solve,
        l_left_solve=lambda x: u.T @ x,
        l_right_solve=lambda x: x @ u.T,
        modifications=mods,
    )


def _check_trace_norms(kinds: Iterable[NormKind], blocking: BlockingScheme) -> frozenset[NormKind]:
    out = frozenset(kinds)
    for kind in out:
        if kind.is_block and (kind.blocking != blocking or kind.col_blocking not in (None, blocking)):
            raise InvalidArgumentError(f"traced block norm {kind.label} must use the factorization blocking")
    return out


def eliminate(
    a: np.ndarray,
    blocking: BlockingScheme,
    diag: DiagFactorizer,
    trace_norms: Iterable[NormKind] | None = None,
    *,
    jacobi: JacobiOptions | None = None,
    threshold: float | None = None,
) -> tuple[BlockLUFactors, list[Modification]]:
    """Shared elimination loop; `threshold` turns on diagonal modifications (Unitary only)."""
    a = as_square(a)
    n = a.shape[0]
    blocking.check_dim(n)
    kinds = _check_trace_norms(default_trace_norms() if trace_norms is None else trace_norms, blocking)
    if threshold is not None and diag is not DiagFactorizer.UNITARY:
        raise InvalidArgumentError("diagonal modifications need the unitary factorizer")
    jacobi = jacobi or JacobiOptions()

    s = a.copy()
    l = np.zeros_like(a)
    r = np.zeros_like(a)
    records: list[GrowthRecord] = []
    mods: list[Modification] = []
    overflow_step: int | None = None

    for k, (lo, hi) in enumerate(blocking.ranges(), start=1):
        schur = s[lo:, lo:]
        if not np.all(np.isfinite(schur)):
            overflow_step = k
            records.append(GrowthRecord(k=k, norms={kind: math.inf for kind in kinds}, sigma_min=math.nan, subdiag_norm=math.inf))
            logger.warning("schur_overflow", step=k, n_blocks=blocking.n_blocks)
            break
        norms = {kind: norm(schur, kind.for_trailing(k)) for kind in kinds}

        akk = s[lo:hi, lo:hi]
        if diag is DiagFactorizer.IDENTITY:
            block = _identity_block(akk, k)
        elif diag is DiagFactorizer.POINTWISE_LU:
            block = _pointwise_block(akk, k)
        else:
            block = _unitary_block(akk, k, jacobi, threshold)
        mods.extend(block.modifications)

        l[lo:hi, lo:hi] = block.l
        r[lo:hi, lo:hi] = block.r
        subdiag = 0.0
        if hi < n:
            # Overflow here surfaces as a non-finite Schur complement at step k + 1.
            with np.errstate(over="ignore", invalid="ignore"):
                l[hi:, lo:hi] = block.r_right_solve(s[hi:, lo:hi])
                r[lo:hi, hi:] = block.l_left_solve(s[lo:hi, hi:])
                s[hi:, hi:] -= l[hi:, lo:hi] @ r[lo:hi, hi:]
                scaled = block.l_right_solve(l[hi:, lo:hi])
            subdiag = float(singular_values(scaled)[0]) if np.all(np.isfinite(scaled)) else math.inf
        records.append(GrowthRecord(k=k, norms=norms, sigma_min=block.sigma_min, subdiag_norm=subdiag))

    trace = GrowthTrace(records=tuple(records), norm_kinds=kinds, overflow_step=overflow_step)
    return BlockLUFactors(l=l, r=r, blocking=blocking, trace=trace, diag=diag), mods


def factor_block_lu(
    a: np.ndarray,
    blocking: BlockingScheme,
    diag: DiagFactorizer = DiagFactorizer.UNITARY,
    trace_norms: Iterable[NormKind] | None = None,
    *,
    jacobi: JacobiOptions | None = None,
) -> BlockLUFactors:
    factors, _ = eliminate(a, blocking, diag, trace_norms, jacobi=jacobi)
    logger.debug("block_lu_done", n=blocking.n, n_blocks=blocking.n_blocks, diag=diag.value)
    return factors


def growth_factor(trace: GrowthTrace, kind: NormKind) -> float:
    values = trace.series(kind)
    if values[0] == 0.0:
        raise InvalidArgumentError("growth factor of a zero matrix is undefined")
    return float(values.max() / values[0])


def is_block_strongly_nonsingular(a: np.ndarray, blocking: BlockingScheme, tol: float) -> bool:
    if tol < 0:
        raise InvalidArgumentError(f"tol must be non-negative, got {tol}")
    a = as_square(a)
    blocking.check_dim(a.shape[0])
    scale = float(singular_values(a)[0])
    for _, hi in blocking.ranges():
        if singular_values(a[:hi, :hi])[-1] <= tol * scale:
            return False
    return True
