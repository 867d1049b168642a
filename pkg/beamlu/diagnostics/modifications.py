"""How far BEAM's modifications move the matrix.

ψ = ‖Ã⁻¹‖₂/‖A⁻¹‖₂ and the capacitance matrix C of the Woodbury correction are
measured directly and compared against the bounds that τ̂·cond₂(A) licenses.
Determinant-based bounds grow like τ̂^{−n} and are compared in logarithms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Mapping

import numpy as np
import scipy.linalg as sla

from beamlu.core.errors import NumericalFailureError
from beamlu.core.logging import get_logger
from beamlu.diagnostics.checks import BoundCheck
from beamlu.factorization.beam import BeamFactorization, build_capacitance, modified_matrix
from beamlu.linalg.dense import as_square, solve_dense_lu
from beamlu.linalg.svd import singular_values

logger = get_logger(__name__)

PSD_GATE_TOL = -1e-10


@dataclass(frozen=True)
class PsiReport:
    """ψ and the two bounds on it; a bound flagged invalid makes no claim."""

    psi_measured: float | None
    bound_general: float | None
    general_valid: bool
    bound_psd: float | None
    psd_valid: bool
    f_hermitian_part_min_eig: float | None
    capacitance_cond: float | None
    tau_hat: float
    cond_a: float | None
    note: str = ""

    @classmethod
    def empty(cls, tau_hat: float, note: str) -> PsiReport:
        return cls(
            psi_measured=None,
            bound_general=None,
            general_valid=False,
            bound_psd=None,
            psd_valid=False,
            f_hermitian_part_min_eig=None,
            capacitance_cond=None,
            tau_hat=tau_hat,
            cond_a=None,
            note=note,
        )


def psi_and_capacitance(
    f: BeamFactorization,
    a: np.ndarray,
    *,
    context: Mapping[str, Any] | None = None,
) -> tuple[PsiReport, list[BoundCheck]]:
    a = as_square(a)
    ctx = {**dict(context or {}), "tau_hat": f.mods.tau_hat, "m": f.mods.count}
    mods = f.mods
    if mods.count == 0:
        return PsiReport.empty(mods.tau_hat, "no modifications"), []

    sv_a = singular_values(a)
    try:
        a_inv_u = solve_dense_lu(a, mods.u_cols)
    except NumericalFailureError:
        logger.warning("psi_skipped_singular", **ctx)
        note = "A is singular to working precision"
        return PsiReport.empty(mods.tau_hat, note), [BoundCheck.skipped("psi", note, ctx)]

    cond_a = float(sv_a[0] / sv_a[-1])
    sv_mod = singular_values(modified_matrix(f, a))
    psi = float(sv_a[-1] / sv_mod[-1])
    t = mods.tau_hat * cond_a

    # F = M_Σ^{1/2} M_Vᵀ A⁻¹ M_U M_Σ^{1/2}
    root = np.sqrt(mods.sigma_deltas)
    big_f = root[:, None] * (mods.v_cols.T @ a_inv_u) * root[None, :]
    gate = big_f.T @ big_f + big_f + big_f.T
    min_eig = float(sla.eigvalsh((gate + gate.T) / 2.0, check_finite=False)[0])
    psd = min_eig >= PSD_GATE_TOL

    capacitance = f.capacitance or build_capacitance(f.factors, mods)
    cap_sv = singular_values(capacitance.matrix)
    cap_cond = float(cap_sv[0] / cap_sv[-1]) if cap_sv[-1] > 0 else math.inf

    checks = [
        BoundCheck.compare("capacitance_cond", cap_cond, (1.0 + t * psi) * (1.0 + t), ctx),
    ]
    general_valid = t < 1.0
    bound_general = 1.0 / (1.0 - t) if general_valid else None
    if bound_general is not None:
        checks.append(BoundCheck.compare("psi_general", psi, bound_general, ctx))
    else:
        checks.append(BoundCheck.skipped("psi_general", "tau_hat * cond2(A) >= 1", ctx))
    bound_psd = 1.0 + t
    if psd:
        checks.append(BoundCheck.compare("psi_psd_gate", psi, bound_psd, {**ctx, "min_eig": min_eig}))
    else:
        checks.append(BoundCheck.skipped("psi_psd_gate", f"F^T F + F + F^T not PSD (min eig {min_eig:.3e})", ctx))

    report = PsiReport(
        psi_measured=psi,
        bound_general=bound_general,
        general_valid=general_valid,
        bound_psd=bound_psd,
        psd_valid=psd,
        f_hermitian_part_min_eig=min_eig,
        capacitance_cond=cap_cond,
        tau_hat=mods.tau_hat,
        cond_a=cond_a,
    )
    return report, checks


def determinant_bounds(
    f: BeamFactorization,
    a: np.ndarray,
    *,
    context: Mapping[str, Any] | None = None,
) -> list[BoundCheck]:
    """Bounds from |det Ã| = Π|det Ã_kk^(k)| ≥ τⁿ, compared as natural logarithms."""
    a = as_square(a)
    n = a.shape[0]
    mods = f.mods
    ctx = {**dict(context or {}), "tau_hat": mods.tau_hat}
    modified = modified_matrix(f, a)

    sv_a = singular_values(a)
    sv_mod = singular_values(modified)
    if sv_mod[-1] == 0.0:
        return [BoundCheck.skipped("determinant_inverse_norm", "modified matrix is exactly singular", ctx)]
    log_rho = math.log(sv_mod[0]) - math.log(sv_a[0])
    log_tau_hat = math.log(mods.tau_hat)

    checks = [
        BoundCheck.compare("modified_norm_ratio", math.exp(log_rho), 1.0 + mods.tau_hat, ctx),
        BoundCheck.compare(
            "determinant_inverse_norm",
            -math.log(sv_mod[-1]),
            (n - 1) * log_rho - n * log_tau_hat - math.log(sv_a[0]),
            ctx,
            log_scale=True,
        ),
        BoundCheck.compare(
            "determinant_cond",
            math.log(sv_mod[0]) - math.log(sv_mod[-1]),
            n * (log_rho - log_tau_hat),
            ctx,
            log_scale=True,
        ),
    ]

    log_tau = math.log(mods.tau)
    for k, (_, hi) in enumerate(f.blocking.ranges(), start=1):
        sv = singular_values(modified[:hi, :hi])
        if sv[-1] == 0.0:
            checks.append(BoundCheck.skipped("determinant_leading_inverse_norm", "leading block singular", {**ctx, "k": k}))
            continue
        checks.append(
            BoundCheck.compare(
                "determinant_leading_inverse_norm",
                -math.log(sv[-1]),
                (hi - 1) * math.log(sv[0]) - hi * log_tau,
                {**ctx, "k": k},
                log_scale=True,
            )
        )
    return checks
