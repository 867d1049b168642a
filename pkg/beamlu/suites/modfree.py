from __future__ import annotations

from typing import Callable

import numpy as np

from beamlu.diagnostics.checks import BoundCheck
from beamlu.diagnostics.dominance import ModificationFreeBound, dominance, modification_free_bound, scaled_modification_free_bound
from beamlu.diagnostics.factors import check_factor_bounds
from beamlu.factorization.beam import beam_factor
from beamlu.gallery.families import block_diag_dom_cols, diag_dom, spd
from beamlu.linalg.blocking import BlockingScheme
from beamlu.linalg.norms import MAX, SPECTRAL
from beamlu.suites.base import Suite

INSTANCES = 100
N = 16
SAFETY = 0.99

Generator = Callable[[int], np.ndarray]
Picker = Callable[[ModificationFreeBound], float | None]


class ModFreeSuite(Suite):
    blocking = BlockingScheme.uniform(N, 4)

    def _criteria(self) -> list[tuple[str, Generator, Picker]]:
        return [
            ("cols", lambda s: diag_dom(N, 0.8, s, rows=False, cols=True), lambda b: b.tau_max_cols),
            ("rows", lambda s: diag_dom(N, 0.8, s, rows=True, cols=False), lambda b: b.tau_max_rows),
            ("both", lambda s: diag_dom(N, 0.8, s, rows=True, cols=True), lambda b: b.tau_max_both),
            ("block_cols", lambda s: block_diag_dom_cols(self.blocking, 0.5, s), lambda b: b.tau_max_block_cols),
            ("spd", lambda s: spd(N, 100.0, s), lambda b: b.tau_max_spd),
        ]

    def _beam_at(self, a: np.ndarray, tau: float, ctx: dict[str, object], checks: list[BoundCheck]) -> None:
        f = beam_factor(a, self.blocking, woodbury=False, trace_norms={MAX, SPECTRAL}, tau=tau, jacobi=self.jacobi)
        checks.append(BoundCheck.compare("modification_free", float(f.mods.count), 0.0, {**ctx, "tau": tau}))
        checks.extend(check_factor_bounds(f, a, context=ctx))

    def run(self) -> list[BoundCheck]:
        checks: list[BoundCheck] = []
        for label, make, pick in self._criteria():
            for seed in range(INSTANCES):
                a = make(seed)
                ctx: dict[str, object] = {"criterion": label, "seed": seed}
                tau_max = pick(modification_free_bound(dominance(a, self.blocking), a))
                if tau_max is None:
                    checks.append(BoundCheck.skipped("modification_free", "criterion does not apply", ctx))
                    continue
                self._beam_at(a, SAFETY * tau_max, ctx, checks)

        rng = np.random.Generator(np.random.Philox(key=7))
        for seed in range(INSTANCES):
            a = diag_dom(N, 0.8, 60_000 + seed, rows=True, cols=True)
            d1 = rng.uniform(0.8, 1.25, size=N)
            d2 = rng.uniform(0.8, 1.25, size=N)
            ctx = {"criterion": "scaled", "seed": seed}
            tau_max = scaled_modification_free_bound(a, d1, d2).best
            if tau_max is None:
                checks.append(BoundCheck.skipped("modification_free", "scaled matrix not dominant", ctx))
                continue
            self._beam_at(a, SAFETY * tau_max, ctx, checks)
        return checks


def create_suite(container: object) -> ModFreeSuite:
    return ModFreeSuite(
        name="modfree",
        description="thresholds below the dominance and SPD criteria leave BEAM unmodified",
        jacobi=container.jacobi,  # type: ignore[attr-defined]
    )
