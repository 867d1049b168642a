from __future__ import annotations

import math

import numpy as np
import scipy.linalg as sla

from beamlu.diagnostics.checks import BoundCheck
from beamlu.gallery.families import tridiag_ttt, turing_t
from beamlu.linalg.norms import INF, MAX, ONE, norm
from beamlu.linalg.svd import singular_values
from beamlu.suites.base import Suite

SIZES = (5, 10, 20, 30)


def turing_inverse(n: int) -> np.ndarray:
    # integer entries below 2^53: the triangular solve is exact
    return sla.solve_triangular(turing_t(n), np.eye(n), lower=True)


class TuringSuite(Suite):
    def run(self) -> list[BoundCheck]:
        checks: list[BoundCheck] = []
        for n in SIZES:
            inv = turing_inverse(n)
            ctx = {"n": n}
            checks.append(BoundCheck.compare("turing_inverse_max_exact", abs(norm(inv, MAX) - 2.0 ** (n - 2)), 0.0, ctx))
            checks.append(BoundCheck.compare("turing_inverse_one_exact", abs(norm(inv, ONE) - 2.0 ** (n - 1)), 0.0, ctx))
            checks.append(BoundCheck.compare("turing_inverse_inf_exact", abs(norm(inv, INF) - 2.0 ** (n - 1)), 0.0, ctx))
            checks.append(BoundCheck.compare("turing_sigma_min", float(singular_values(turing_t(n))[-1]), 2.0 ** (2 - n), ctx))

            expected = 4.0 * math.sin(math.pi / (4 * n + 2)) ** 2
            got = float(singular_values(tridiag_ttt(n))[-1])
            checks.append(BoundCheck.compare("tridiag_ttt_sigma_min", abs(got - expected) / expected, 1e-10, ctx))
        return checks


def create_suite(container: object) -> TuringSuite:
    return TuringSuite(
        name="turing",
        description="exact inverse norms of Turing's triangular matrix",
        jacobi=container.jacobi,  # type: ignore[attr-defined]
    )
