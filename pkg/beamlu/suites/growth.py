from __future__ import annotations

from beamlu.diagnostics.checks import BoundCheck
from beamlu.diagnostics.factors import check_factor_bounds
from beamlu.diagnostics.growth import check_growth_bounds, check_interlacing, growth_check_norms
from beamlu.factorization.block_lu import DiagFactorizer, factor_block_lu, growth_factor
from beamlu.gallery.families import diag_dom, random_blocking, random_cond, spd
from beamlu.linalg.blocking import BlockingScheme
from beamlu.linalg.norms import INF, ONE
from beamlu.suites.base import Suite

INSTANCES = 50
EXACT_TOL = 1e-12

_DOMINANCE = (("rows", True, False), ("cols", False, True), ("both", True, True))


class GrowthSuite(Suite):
    def run(self) -> list[BoundCheck]:
        checks: list[BoundCheck] = []
        for label, rows, cols in _DOMINANCE:
            for seed in range(INSTANCES):
                n = 8 + (7 * seed) % 57
                a = diag_dom(n, 0.5, seed, rows=rows, cols=cols)
                blocking = random_blocking(n, seed=10_000 + seed, max_size=8)
                ctx = {"family": f"diag_dom_{label}", "n": n, "seed": seed, "blocking": blocking.label}
                factors = factor_block_lu(a, blocking, DiagFactorizer.UNITARY, growth_check_norms(blocking), jacobi=self.jacobi)
                trace = factors.trace
                checks += check_growth_bounds(a, blocking, trace, context=ctx)
                checks += check_factor_bounds(factors, a, context=ctx)
                if rows:
                    checks.append(BoundCheck.compare("p_inf_is_one", abs(growth_factor(trace, INF) - 1.0), EXACT_TOL, ctx))
                if cols:
                    checks.append(BoundCheck.compare("p_one_is_one", abs(growth_factor(trace, ONE) - 1.0), EXACT_TOL, ctx))

        blocking = BlockingScheme.uniform(12, 3)
        for seed in range(20):
            a = random_cond(12, 1e3, seed)
            ctx = {"family": "random_cond", "n": 12, "seed": seed, "blocking": blocking.label}
            factors = factor_block_lu(a, blocking, DiagFactorizer.UNITARY, growth_check_norms(blocking), jacobi=self.jacobi)
            checks += check_growth_bounds(a, blocking, factors.trace, context=ctx)
            checks += check_interlacing(a, blocking, factors.trace, context=ctx)
            checks += check_factor_bounds(factors, a, context=ctx)

        # ‖L‖₂ ≤ (√κ + 1)·n_t for symmetric positive definite input
        blocking = BlockingScheme.uniform(32, 4)
        for seed in range(10):
            a = spd(32, 1e4, seed)
            ctx = {"family": "spd", "n": 32, "cond": 1e4, "seed": seed, "blocking": blocking.label}
            factors = factor_block_lu(a, blocking, DiagFactorizer.UNITARY, growth_check_norms(blocking), jacobi=self.jacobi)
            checks += check_growth_bounds(a, blocking, factors.trace, context=ctx)
            checks += check_factor_bounds(factors, a, context=ctx)
        return checks


def create_suite(container: object) -> GrowthSuite:
    return GrowthSuite(
        name="growth",
        description="growth factors and factor norms of dominant, random and SPD matrices",
        jacobi=container.jacobi,  # type: ignore[attr-defined]
    )
