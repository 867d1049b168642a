from __future__ import annotations

import math

from beamlu.diagnostics.checks import BoundCheck
from beamlu.diagnostics.factors import check_factor_bounds
from beamlu.diagnostics.modifications import determinant_bounds
from beamlu.diagnostics.zielke import zielke_growth_check
from beamlu.factorization.beam import beam_factor
from beamlu.gallery.families import zielke
from beamlu.linalg.blocking import BlockingScheme
from beamlu.linalg.norms import MAX, SPECTRAL
from beamlu.linalg.svd import singular_values
from beamlu.suites.base import Suite

GROWTH_CASES = ((8, 2, 0.25), (8, 2, 0.5), (8, 2, 0.1), (16, 2, 0.25), (16, 2, 0.5), (16, 2, 0.1), (16, 4, 0.1))


class ZielkeSuite(Suite):
    def run(self) -> list[BoundCheck]:
        checks = [zielke_growth_check(n, size, tau) for n, size, tau in GROWTH_CASES]

        blocking = BlockingScheme.uniform(8, 2)
        a = zielke(8)
        f = beam_factor(a, blocking, woodbury=True, trace_norms={MAX, SPECTRAL}, tau=0.25, jacobi=self.jacobi)
        ctx = {"family": "zielke", "n": 8, "blocking": blocking.label, "tau": 0.25}
        checks += check_factor_bounds(f, a, context=ctx)
        checks += determinant_bounds(f, a, context=ctx)

        n = 64
        sv = singular_values(zielke(n))
        ctx = {"family": "zielke", "n": n}
        expected_max = 2 * n / math.pi
        checks.append(BoundCheck.compare("zielke_sigma_min_upper", float(sv[-1]), 0.55, ctx))
        checks.append(BoundCheck.compare("zielke_sigma_min_lower", 0.45, float(sv[-1]), ctx))
        checks.append(BoundCheck.compare("zielke_sigma_max_upper", float(sv[0]), 1.05 * expected_max, ctx))
        checks.append(BoundCheck.compare("zielke_sigma_max_lower", 0.95 * expected_max, float(sv[0]), ctx))
        return checks


def create_suite(container: object) -> ZielkeSuite:
    return ZielkeSuite(
        name="zielke",
        description="worst-case BEAM growth on Zielke matrices",
        jacobi=container.jacobi,  # type: ignore[attr-defined]
    )
