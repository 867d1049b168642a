from __future__ import annotations

import numpy as np

from beamlu.diagnostics.checks import BoundCheck
from beamlu.diagnostics.factors import check_factor_bounds
from beamlu.factorization.beam import BeamFactorization, RefinementOptions, beam_factor, beam_solve
from beamlu.factorization.block_lu import growth_factor
from beamlu.gallery.families import random_cond
from beamlu.linalg.blocking import BlockingScheme
from beamlu.linalg.dense import UNIT_ROUNDOFF
from beamlu.linalg.norms import MAX, SPECTRAL
from beamlu.linalg.svd import cond2
from beamlu.suites.base import Suite
from beamlu.suites.psi import modified_cases

REFINED_TARGET = 1e-12
REFINE = RefinementOptions(max_iters=10, target=REFINED_TARGET)

ILL_CONDITIONED_N = 64
ILL_CONDITIONED_BLOCK = 8
ILL_CONDITIONED_TAU_HAT = 1e-4
ILL_CONDITIONED_CONDS = (1e4, 1e6, 1e8)
ILL_CONDITIONED_SEEDS = 3


class BeamSuite(Suite):
    def _refined(self, f: BeamFactorization, a: np.ndarray, ctx: dict[str, object]) -> BoundCheck:
        refined = beam_solve(f, a @ np.ones(a.shape[0]), REFINE, a)
        return BoundCheck.compare("refined_residual", refined.final_residual, REFINED_TARGET, {**ctx, "iterations": refined.iterations})

    def run(self) -> list[BoundCheck]:
        checks: list[BoundCheck] = []
        for ctx, a, f in modified_cases(self.jacobi):
            n = a.shape[0]
            ctx = {**ctx, "m": f.mods.count}
            assert f.capacitance is not None
            plain = beam_solve(f, a @ np.ones(n), None, a)
            p2 = growth_factor(f.factors.trace, SPECTRAL)
            bound = 1e3 * n * UNIT_ROUNDOFF * cond2(f.capacitance.matrix) * p2
            checks.append(BoundCheck.compare("woodbury_residual", plain.final_residual, bound, ctx))
            checks.append(self._refined(f, a, ctx))

        blocking = BlockingScheme.uniform(ILL_CONDITIONED_N, ILL_CONDITIONED_BLOCK)
        for cond in ILL_CONDITIONED_CONDS:
            for seed in range(ILL_CONDITIONED_SEEDS):
                a = random_cond(ILL_CONDITIONED_N, cond, seed)
                f = beam_factor(a, blocking, ILL_CONDITIONED_TAU_HAT, True, {MAX, SPECTRAL}, jacobi=self.jacobi)
                ctx = {
                    "family": "random_cond",
                    "n": ILL_CONDITIONED_N,
                    "cond": cond,
                    "seed": seed,
                    "blocking": blocking.label,
                    "tau_hat": ILL_CONDITIONED_TAU_HAT,
                    "m": f.mods.count,
                }
                checks += check_factor_bounds(f, a, context=ctx)
                checks.append(self._refined(f, a, ctx))
        return checks


def create_suite(container: object) -> BeamSuite:
    return BeamSuite(
        name="beam",
        description="Woodbury-corrected BEAM solves, with refinement up to cond 1e8",
        jacobi=container.jacobi,  # type: ignore[attr-defined]
        slow=True,
    )
