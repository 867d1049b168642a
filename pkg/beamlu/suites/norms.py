from __future__ import annotations

import numpy as np

from beamlu.diagnostics.checks import BoundCheck
from beamlu.diagnostics.norm_properties import (
    column_additivity_checks,
    partition_checks,
    submultiplicativity_check,
    zero_padding_checks,
)
from beamlu.gallery.families import random_blocking
from beamlu.suites.base import Suite

TRIALS = 1000


class NormsSuite(Suite):
    def run(self) -> list[BoundCheck]:
        checks: list[BoundCheck] = []
        rng = np.random.Generator(np.random.Philox(key=2024))
        for trial in range(TRIALS):
            m, n, p = (int(v) for v in rng.integers(1, 7, size=3))
            rows = random_blocking(m, seed=4 * trial)
            cols = random_blocking(n, seed=4 * trial + 1)
            inner = random_blocking(p, seed=4 * trial + 2)
            b = rng.standard_normal((m, n))
            checks += partition_checks(b, rows, cols)
            checks += zero_padding_checks(b, int(rng.integers(0, 3)), int(rng.integers(0, 3)))
            b2 = rng.standard_normal((m, p))
            checks += column_additivity_checks(b, b2, rows, cols, inner)
            c = rng.standard_normal((n, p))
            checks.append(submultiplicativity_check(b, c, rows, cols, inner))
        return checks


def create_suite(container: object) -> NormsSuite:
    return NormsSuite(
        name="norms",
        description="norm toolkit properties over 1000 random matrices and partitions",
        jacobi=container.jacobi,  # type: ignore[attr-defined]
    )
