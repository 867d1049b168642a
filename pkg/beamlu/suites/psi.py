from __future__ import annotations

from typing import Callable, NamedTuple

import numpy as np

from beamlu.core.config import JacobiOptions
from beamlu.diagnostics.checks import BoundCheck
from beamlu.diagnostics.factors import check_factor_bounds
from beamlu.diagnostics.modifications import determinant_bounds, psi_and_capacitance
from beamlu.factorization.beam import BeamFactorization, beam_factor
from beamlu.gallery.families import leading_swap, random_cond, spd
from beamlu.linalg.blocking import BlockingScheme
from beamlu.linalg.norms import MAX, SPECTRAL
from beamlu.suites.base import Suite

INSTANCES = 50
MAX_SEEDS = 1000

SPD_N = 16
SPD_COND = 100.0
# just above 1/κ: the single-block fallback is then always modified
SPD_TAU_HAT = 1.01 / SPD_COND
SPD_BLOCK_SIZES = (4, 8, 16)

GENERAL_N = 8
GENERAL_COND = 10.0
GENERAL_TAU_HAT = 0.5 / GENERAL_COND
GENERAL_BLOCK_SIZES = (1, 2)


class ModifiedCase(NamedTuple):
    context: dict[str, object]
    a: np.ndarray
    factorization: BeamFactorization


def _first_modified(
    a: np.ndarray,
    block_sizes: tuple[int, ...],
    tau_hat: float,
    jacobi: JacobiOptions,
) -> BeamFactorization | None:
    n = a.shape[0]
    for size in block_sizes:
        f = beam_factor(a, BlockingScheme.uniform(n, size), tau_hat, True, {MAX, SPECTRAL}, jacobi=jacobi)
        if f.mods.count > 0:
            return f
    return None


def _collect(
    family: str,
    make: Callable[[int], np.ndarray],
    block_sizes: tuple[int, ...],
    tau_hat: float,
    jacobi: JacobiOptions,
) -> list[ModifiedCase]:
    cases: list[ModifiedCase] = []
    for seed in range(MAX_SEEDS):
        a = make(seed)
        f = _first_modified(a, block_sizes, tau_hat, jacobi)
        if f is None:
            continue
        ctx: dict[str, object] = {"family": family, "seed": seed, "blocking": f.blocking.label, "tau_hat": tau_hat}
        cases.append(ModifiedCase(ctx, a, f))
        if len(cases) == INSTANCES:
            break
    return cases


def modified_cases(jacobi: JacobiOptions) -> list[ModifiedCase]:
    """Seeded SPD and general instances on which BEAM modifies at least one singular value."""
    cases = _collect("spd", lambda s: spd(SPD_N, SPD_COND, s), SPD_BLOCK_SIZES, SPD_TAU_HAT, jacobi)
    cases += _collect("random_cond", lambda s: random_cond(GENERAL_N, GENERAL_COND, s), GENERAL_BLOCK_SIZES, GENERAL_TAU_HAT, jacobi)
    swap = beam_factor(leading_swap(2), BlockingScheme.uniform(2, 1), 0.1, True, {MAX, SPECTRAL}, jacobi=jacobi)
    cases.append(ModifiedCase({"family": "leading_swap", "blocking": swap.blocking.label, "tau_hat": 0.1}, leading_swap(2), swap))
    return cases


class PsiSuite(Suite):
    def run(self) -> list[BoundCheck]:
        checks: list[BoundCheck] = []
        cases = modified_cases(self.jacobi)
        for family, wanted in (("spd", INSTANCES), ("random_cond", INSTANCES)):
            found = sum(1 for case in cases if case.context["family"] == family)
            checks.append(BoundCheck.compare(f"modified_instances_{family}", float(wanted - found), 0.0, {"found": found}))
        for ctx, a, f in cases:
            ctx = {**ctx, "m": f.mods.count}
            _, psi_checks = psi_and_capacitance(f, a, context=ctx)
            checks += psi_checks
            checks += determinant_bounds(f, a, context=ctx)
            checks += check_factor_bounds(f, a, context=ctx)
        return checks


def create_suite(container: object) -> PsiSuite:
    return PsiSuite(
        name="psi",
        description="ψ, capacitance conditioning and determinant bounds of modified matrices",
        jacobi=container.jacobi,  # type: ignore[attr-defined]
        slow=True,
    )
