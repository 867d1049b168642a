from __future__ import annotations

import math
from typing import Any, Mapping

import numpy as np

from beamlu.core.errors import NumericalFailureError
from beamlu.diagnostics.checks import BoundCheck
from beamlu.diagnostics.dominance import block_dominance, is_spd, pointwise_dominance
from beamlu.factorization.beam import BeamFactorization, modified_matrix
from beamlu.factorization.block_lu import BlockLUFactors, DiagFactorizer, growth_factor
from beamlu.factorization.substitution import block_back_sub, block_forward_sub
from beamlu.linalg.dense import UNIT_ROUNDOFF, as_square, solve_dense_lu
from beamlu.linalg.norms import FRO, MAX, SPECTRAL, NormKind, block_max, norm
from beamlu.linalg.svd import cond2

_P_EXPONENT = {SPECTRAL: 2.0, FRO: 2.0}


def _unpack(f: BlockLUFactors | BeamFactorization, a: np.ndarray) -> tuple[BlockLUFactors, np.ndarray, bool]:
    """(factors, matrix actually factored, whether modifications were applied)."""
    if isinstance(f, BeamFactorization):
        modified = f.mods.count > 0
        return f.factors, modified_matrix(f, a), modified
    return f, as_square(a), False


def factored_growth(factors: BlockLUFactors, kind: NormKind) -> float:
    """Growth of L·R itself, using A^(k) = L_{k:,k:} R_{k:,k:}."""
    l, r = factors.l, factors.r
    base = norm(l @ r, kind)
    worst = 0.0
    for lo, _ in factors.blocking.ranges():
        worst = max(worst, norm(l[lo:, lo:] @ r[lo:, lo:], kind))
    return worst / base


def _growth(factors: BlockLUFactors, kind: NormKind, modified: bool) -> float:
    if not modified and kind in factors.trace.norm_kinds:
        return growth_factor(factors.trace, kind)
    return factored_growth(factors, kind)


def _cond(a: np.ndarray, kind: NormKind) -> float:
    if kind == SPECTRAL:
        return cond2(a)
    try:
        inv = solve_dense_lu(a, np.eye(a.shape[0]))
    except NumericalFailureError:
        return math.inf
    return norm(a, kind) * norm(inv, kind)


def check_factor_bounds(
    f: BlockLUFactors | BeamFactorization,
    a: np.ndarray,
    *,
    context: Mapping[str, Any] | None = None,
) -> list[BoundCheck]:
    factors, elim, modified = _unpack(f, a)
    ctx = dict(context or {})
    blocking = factors.blocking
    nt = blocking.n_blocks
    nb = blocking.max_block_size
    unitary = factors.diag is DiagFactorizer.UNITARY
    l, r = factors.l, factors.r
    checks: list[BoundCheck] = []

    for kind in (SPECTRAL, FRO):
        p = _growth(factors, kind, modified)
        norm_a = norm(elim, kind)
        if factors.diag is not DiagFactorizer.POINTWISE_LU:
            checks.append(BoundCheck.compare(f"r_norm_{kind.label}", norm(r, kind), nt * p * norm_a, ctx))
        if unitary:
            root = nb ** (1.0 / _P_EXPONENT[kind])
            bound = root * nt + nt * p * _cond(elim, kind)
            checks.append(BoundCheck.compare(f"l_norm_{kind.label}", norm(l, kind), bound, ctx))

    l2 = norm(l, SPECTRAL)
    if isinstance(f, BeamFactorization):
        if SPECTRAL in factors.trace.norm_kinds:
            p2 = growth_factor(factors.trace, SPECTRAL)
            bound = nt + nt * p2 / f.mods.tau_hat
            checks.append(BoundCheck.compare("l_norm_spectral_tau", l2, bound, {**ctx, "tau_hat": f.mods.tau_hat}))
        else:
            checks.append(BoundCheck.skipped("l_norm_spectral_tau", "spectral norm not traced", ctx))

    if unitary and not modified:
        if pointwise_dominance(elim).by_cols:
            checks.append(BoundCheck.compare("l_norm_col_dominant", l2, (nb**1.5 + 1.0) * nt, ctx))
        if is_spd(elim):
            checks.append(BoundCheck.compare("l_norm_spd", l2, (math.sqrt(cond2(elim)) + 1.0) * nt, ctx))

    if unitary:
        ranges = blocking.ranges()
        if factors.trace.max_subdiag_norm <= 1.0:
            checks.append(BoundCheck.compare("l_block_max_spectral", norm(l, block_max(SPECTRAL, blocking)), nb**0.5, ctx))
        # Spectral block column dominance survives elimination and keeps every
        # ‖A^(k)_ik (A^(k)_kk)⁻¹‖₂ below 1, so each block of L has ‖·‖_F ≤ √n_b.
        if len(ranges) == 1 or block_dominance(elim, blocking, inner_cols=SPECTRAL, inner_rows=SPECTRAL).by_cols:
            checks.append(BoundCheck.compare("l_block_max_fro", norm(l, block_max(FRO, blocking)), nb**0.5, ctx))
    return checks


def check_backward_error(
    f: BlockLUFactors | BeamFactorization,
    a: np.ndarray,
    b: np.ndarray | None = None,
    *,
    context: Mapping[str, Any] | None = None,
) -> list[BoundCheck]:
    """Factorization residual and composed block-substitution residual envelopes."""
    factors, elim, modified = _unpack(f, a)
    ctx = dict(context or {})
    n = elim.shape[0]
    u = UNIT_ROUNDOFF
    l, r = factors.l, factors.r

    p_max = _growth(factors, MAX, modified)
    residual = float(np.max(np.abs(elim - l @ r)))
    checks = [
        BoundCheck.compare("factor_residual_max", residual, 10 * n * u * p_max * norm(elim, MAX), {**ctx, "p_max": p_max})
    ]

    rhs = elim @ np.ones(n) if b is None else np.asarray(b, dtype=np.float64)
    x = block_back_sub(r, factors.blocking, block_forward_sub(l, factors.blocking, rhs))
    norm_a = norm(elim, SPECTRAL)
    rel = float(np.linalg.norm(rhs - elim @ x)) / (norm_a * float(np.linalg.norm(x)))
    bound = 100 * n * u * norm(l, SPECTRAL) * norm(r, SPECTRAL) / norm_a
    checks.append(BoundCheck.compare("solve_residual", rel, bound, ctx))
    return checks
