from __future__ import annotations

from typing import Any, Mapping

import numpy as np

from beamlu.core.errors import InvalidArgumentError, NumericalFailureError
from beamlu.diagnostics.checks import BoundCheck
from beamlu.diagnostics.dominance import block_dominance, pointwise_dominance
from beamlu.factorization.block_lu import GrowthTrace, growth_factor
from beamlu.linalg.blocking import BlockingScheme
from beamlu.linalg.dense import UNIT_ROUNDOFF, as_square, solve_dense_lu
from beamlu.linalg.norms import (
    FRO,
    INF,
    MAX,
    ONE,
    SPECTRAL,
    NormKind,
    block_max,
    block_sum,
    default_trace_norms,
    norm,
)
from beamlu.linalg.svd import singular_values


def growth_check_norms(blocking: BlockingScheme, *, spectral: bool = True) -> frozenset[NormKind]:
    """Every norm check_growth_bounds can use for a factorization on `blocking`."""
    return default_trace_norms(spectral=spectral) | {
        block_max(ONE, blocking),
        block_sum(ONE, blocking),
        block_max(INF, blocking),
        block_sum(INF, blocking),
    }


def _growth(trace: GrowthTrace, kind: NormKind) -> float | None:
    if kind not in trace.norm_kinds:
        return None
    return growth_factor(trace, kind)


def _emit(
    checks: list[BoundCheck],
    trace: GrowthTrace,
    name: str,
    kind: NormKind,
    bound: float,
    ctx: Mapping[str, Any],
) -> None:
    value = _growth(trace, kind)
    if value is None:
        checks.append(BoundCheck.skipped(name, f"norm {kind.label} not traced", ctx))
    else:
        checks.append(BoundCheck.compare(name, value, bound, ctx))


def _inverse(a: np.ndarray) -> np.ndarray | None:
    try:
        return solve_dense_lu(a, np.eye(a.shape[0]))
    except NumericalFailureError:
        return None


def check_growth_bounds(
    a: np.ndarray,
    blocking: BlockingScheme,
    trace: GrowthTrace,
    *,
    factored: np.ndarray | None = None,
    context: Mapping[str, Any] | None = None,
) -> list[BoundCheck]:
    """Growth bounds licensed by dominance, norm equivalence and leading inverses.

    `factored` is the matrix actually eliminated when it differs from `a`
    (BEAM with modifications); dominance-based bounds are then skipped and the
    Schur bound uses the leading inverses of the factored matrix.
    """
    a = as_square(a)
    n = a.shape[0]
    blocking.check_dim(n)
    if len(trace) != blocking.n_blocks:
        raise InvalidArgumentError("trace does not belong to this blocking")
    ctx = dict(context or {})
    checks: list[BoundCheck] = []
    modified = factored is not None and not np.array_equal(factored, a)
    elim = as_square(factored) if factored is not None else a

    if modified:
        checks.append(BoundCheck.skipped("dominance_growth", "factored matrix carries modifications", ctx))
    else:
        p = pointwise_dominance(a)
        if p.by_rows:
            _emit(checks, trace, "p_inf_row_dominant", INF, 1.0, ctx)
        if p.by_cols:
            _emit(checks, trace, "p_one_col_dominant", ONE, 1.0, ctx)
        if p.by_rows or p.by_cols:
            _emit(checks, trace, "p_max_dominant", MAX, 2.0, ctx)

        b = block_dominance(a, blocking)
        if b.by_cols:
            _emit(checks, trace, "p_block_max_one_block_col_dominant", block_max(ONE, blocking), 2.0, ctx)
            _emit(checks, trace, "p_block_sum_one_block_col_dominant", block_sum(ONE, blocking), 1.0, ctx)
            _emit(checks, trace, "p_one_block_col_dominant", ONE, 4.0, ctx)
        if b.by_rows:
            _emit(checks, trace, "p_block_max_inf_block_row_dominant", block_max(INF, blocking), 2.0, ctx)
            _emit(checks, trace, "p_block_sum_inf_block_row_dominant", block_sum(INF, blocking), 1.0, ctx)
            _emit(checks, trace, "p_inf_block_row_dominant", INF, 4.0, ctx)

        inv = _inverse(a)
        if inv is not None:
            bi = block_dominance(inv, blocking)
            if bi.by_rows:
                _emit(checks, trace, "p_block_max_inf_inverse_block_row_dominant", block_max(INF, blocking), 2.0, ctx)
            if bi.by_cols:
                _emit(checks, trace, "p_block_max_one_inverse_block_col_dominant", block_max(ONE, blocking), 2.0, ctx)

    p_max = _growth(trace, MAX)
    for kind in (ONE, SPECTRAL, INF, FRO):
        value = _growth(trace, kind)
        name = f"norm_transfer_{kind.label}"
        if p_max is None or value is None:
            checks.append(BoundCheck.skipped(name, f"needs traced max and {kind.label}", ctx))
            continue
        checks.append(BoundCheck.compare(f"{name}_upper", value, n * p_max, ctx))
        checks.append(BoundCheck.compare(f"{name}_lower", p_max, n * value, ctx))

    ranges = blocking.ranges()
    for kind in (SPECTRAL, FRO):
        value = _growth(trace, kind)
        name = f"schur_bound_{kind.label}"
        if value is None:
            checks.append(BoundCheck.skipped(name, f"norm {kind.label} not traced", ctx))
            continue
        worst = 0.0
        for _, hi in ranges[:-1]:
            lead_inv = _inverse(elim[:hi, :hi])
            worst = max(worst, float("inf") if lead_inv is None else norm(lead_inv, kind))
        base = norm(a, kind)
        scale = max(base, norm(elim, kind))
        checks.append(BoundCheck.compare(name, value, (scale + worst * scale * scale) / base, ctx))
    return checks


def check_interlacing(
    a: np.ndarray,
    blocking: BlockingScheme,
    trace: GrowthTrace,
    *,
    context: Mapping[str, Any] | None = None,
) -> list[BoundCheck]:
    """σ_min(A_{1:k,1:k}) ≤ σ_min(A_kk^(k)) for every step of an unmodified factorization."""
    a = as_square(a)
    blocking.check_dim(a.shape[0])
    ctx = dict(context or {})
    slack = 64 * a.shape[0] * UNIT_ROUNDOFF * float(singular_values(a)[0])
    checks = []
    for rec, (_, hi) in zip(trace.records, blocking.ranges()):
        lead = float(singular_values(a[:hi, :hi])[-1])
        checks.append(BoundCheck.compare("sigma_min_interlacing", lead, rec.sigma_min + slack, {**ctx, "k": rec.k}))
    return checks
