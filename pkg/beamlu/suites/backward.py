from __future__ import annotations

import numpy as np

from beamlu.core.errors import BlockSingularError
from beamlu.diagnostics.checks import BoundCheck
from beamlu.diagnostics.factors import check_backward_error
from beamlu.factorization.block_lu import DiagFactorizer, factor_block_lu
from beamlu.gallery.families import diag_dom, random_blocking, random_cond
from beamlu.linalg.blocking import BlockingScheme
from beamlu.linalg.dense import UNIT_ROUNDOFF
from beamlu.linalg.norms import MAX
from beamlu.suites.base import Suite

_METHODS = (DiagFactorizer.IDENTITY, DiagFactorizer.POINTWISE_LU, DiagFactorizer.UNITARY)


def doolittle(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Row-oriented Doolittle LU without pivoting, scalar loops only."""
    n = a.shape[0]
    l = np.eye(n)
    u = np.zeros((n, n))
    for i in range(n):
        for j in range(i, n):
            u[i, j] = a[i, j] - sum(l[i, k] * u[k, j] for k in range(i))
        for j in range(i + 1, n):
            l[j, i] = (a[j, i] - sum(l[j, k] * u[k, i] for k in range(i))) / u[i, i]
    return l, u


def oracle_gap(l: np.ndarray, r: np.ndarray, l_ref: np.ndarray, r_ref: np.ndarray) -> float:
    """Largest entrywise factor difference, each entry scaled by (|L_ref||R_ref|)_ij."""
    scale = np.abs(l_ref) @ np.abs(r_ref)
    gap = np.maximum(np.abs(l - l_ref) * np.abs(np.diag(r_ref))[None, :], np.abs(r - r_ref))
    return float(np.max(gap / scale))


class BackwardSuite(Suite):
    def run(self) -> list[BoundCheck]:
        checks: list[BoundCheck] = []
        for seed in range(200):
            diag = _METHODS[seed % 3]
            n = 8 + (13 * seed) % 89
            cond = 10.0 ** (1 + seed % 6)
            a = random_cond(n, cond, seed)
            blocking = random_blocking(n, seed=40_000 + seed, max_size=12)
            ctx = {"family": "random_cond", "n": n, "cond": cond, "seed": seed, "blocking": blocking.label, "diag": diag.value}
            try:
                factors = factor_block_lu(a, blocking, diag, {MAX}, jacobi=self.jacobi)
            except BlockSingularError as exc:
                checks.append(BoundCheck.skipped("factor_residual_max", f"diagonal block {exc.block} singular", ctx))
                continue
            checks += check_backward_error(factors, a, context=ctx)

        for seed in range(50):
            n = 8 + seed % 25
            a = diag_dom(n, 0.5, 50_000 + seed, rows=False, cols=True)
            blocking = BlockingScheme.uniform(n, 1)
            factors = factor_block_lu(a, blocking, DiagFactorizer.POINTWISE_LU, {MAX}, jacobi=self.jacobi)
            l_ref, r_ref = doolittle(a)
            ctx = {"family": "diag_dom_cols", "n": n, "seed": seed}
            checks.append(BoundCheck.compare("doolittle_oracle", oracle_gap(factors.l, factors.r, l_ref, r_ref), 4 * n * UNIT_ROUNDOFF, ctx))
        return checks


def create_suite(container: object) -> BackwardSuite:
    return BackwardSuite(
        name="backward",
        description="backward error envelopes for every method and the scalar LU oracle",
        jacobi=container.jacobi,  # type: ignore[attr-defined]
        slow=True,
    )
