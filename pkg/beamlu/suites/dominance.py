from __future__ import annotations

import numpy as np

from beamlu.diagnostics.checks import BoundCheck
from beamlu.diagnostics.dominance import block_dominance
from beamlu.diagnostics.factors import check_factor_bounds
from beamlu.diagnostics.growth import check_growth_bounds, growth_check_norms
from beamlu.factorization.block_lu import DiagFactorizer, factor_block_lu
from beamlu.gallery.families import block_diag_dom_cols, inverse_block_diag_dom_rows, random_blocking
from beamlu.linalg.blocking import BlockingScheme
from beamlu.linalg.dense import solve_dense_lu
from beamlu.linalg.norms import INF, ONE, norm
from beamlu.suites.base import Suite

# Block column dominant under both inner norms; Varah's bound only holds for the 1-norm.
FOOTNOTE_MATRIX = np.array(
    [
        [1.0, 0.0, 0.0, 0.4],
        [0.0, 1.0, 0.0, 0.4],
        [0.4, 0.0, 1.0, 0.0],
        [0.4, 0.0, 0.0, 1.0],
    ]
)


def _inverse_one_norm(a: np.ndarray) -> float:
    return norm(solve_dense_lu(a, np.eye(a.shape[0])), ONE)


class DominanceSuite(Suite):
    def run(self) -> list[BoundCheck]:
        checks: list[BoundCheck] = []
        for seed in range(50):
            n = 8 + (5 * seed) % 33
            blocking = random_blocking(n, seed=20_000 + seed, max_size=6)
            a = block_diag_dom_cols(blocking, 0.5, seed)
            ctx = {"family": "block_diag_dom_cols", "n": n, "seed": seed, "blocking": blocking.label}
            factors = factor_block_lu(a, blocking, DiagFactorizer.UNITARY, growth_check_norms(blocking), jacobi=self.jacobi)
            checks += check_growth_bounds(a, blocking, factors.trace, context=ctx)
            checks += check_factor_bounds(factors, a, context=ctx)
            delta = block_dominance(a, blocking).delta_c
            checks.append(BoundCheck.compare("block_varah_one", _inverse_one_norm(a), 1.0 / delta, ctx))

        for seed in range(20):
            n = 8 + (3 * seed) % 17
            blocking = random_blocking(n, seed=30_000 + seed, max_size=5)
            a = inverse_block_diag_dom_rows(blocking, 0.5, seed)
            ctx = {"family": "inverse_block_diag_dom_rows", "n": n, "seed": seed, "blocking": blocking.label}
            factors = factor_block_lu(a, blocking, DiagFactorizer.UNITARY, growth_check_norms(blocking), jacobi=self.jacobi)
            checks += [c for c in check_growth_bounds(a, blocking, factors.trace, context=ctx) if "inverse" in c.name]
            checks += check_factor_bounds(factors, a, context=ctx)

        blocking = BlockingScheme.uniform(4, 2)
        ctx = {"family": "footnote", "blocking": blocking.label}
        inv_one = _inverse_one_norm(FOOTNOTE_MATRIX)
        by_one = block_dominance(FOOTNOTE_MATRIX, blocking, inner_cols=ONE)
        by_inf = block_dominance(FOOTNOTE_MATRIX, blocking, inner_cols=INF)
        checks.append(BoundCheck.compare("footnote_varah_one_inner", inv_one, 1.0 / by_one.delta_c, ctx))
        # the ∞-inner margin overstates dominance: its Varah bound is exceeded
        checks.append(BoundCheck.compare("footnote_varah_inf_inner_exceeded", 1.0 / by_inf.delta_c, inv_one, ctx))
        return checks


def create_suite(container: object) -> DominanceSuite:
    return DominanceSuite(
        name="dominance",
        description="block dominant growth bounds, inverses of block row dominant matrices, Varah bounds",
        jacobi=container.jacobi,  # type: ignore[attr-defined]
    )
