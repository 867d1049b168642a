"""Block LU with additive modifications of small singular values.

Diagonal blocks are factored by SVD. Every singular value at or below the
threshold τ = τ̂‖A‖₂ is raised to exactly τ, and the rank-one change is
recorded so the solve can undo it through the Woodbury identity:

    A⁻¹ = R̃⁻¹ (I + C_L C⁻¹ C_R) L̃⁻¹,  C = I − C_R C_L,
    C_L = L̃⁻¹ M_U,  C_R = M_Σ M_Vᵀ R̃⁻¹.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from beamlu.core.config import JacobiOptions
from beamlu.core.errors import InvalidArgumentError, NumericalFailureError
from beamlu.core.logging import get_logger
from beamlu.factorization.block_lu import BlockLUFactors, DiagFactorizer, Modification, eliminate
from beamlu.factorization.substitution import block_back_sub, block_forward_sub
from beamlu.linalg.blocking import BlockingScheme
from beamlu.linalg.dense import as_square, factor_dense_lu, solve_factored
from beamlu.linalg.norms import NormKind
from beamlu.linalg.svd import sigma_max

logger = get_logger(__name__)


@dataclass(frozen=True)
class ModificationRecord:
    u_cols: np.ndarray
    sigma_deltas: np.ndarray
    v_cols: np.ndarray
    block_of: tuple[int, ...]
    tau: float
    tau_hat: float

    @property
    def count(self) -> int:
        return len(self.block_of)

    def per_block(self, n_blocks: int) -> list[int]:
        counts = [0] * n_blocks
        for k in self.block_of:
            counts[k - 1] += 1
        return counts

    def perturbation(self) -> np.ndarray:
        """M_U · diag(M_Σ) · M_Vᵀ."""
        return (self.u_cols * self.sigma_deltas) @ self.v_cols.T


@dataclass(frozen=True)
class Capacitance:
    c_left: np.ndarray
    c_right: np.ndarray
    factored: tuple[np.ndarray, np.ndarray]

    @property
    def matrix(self) -> np.ndarray:
        return np.eye(self.c_left.shape[1]) - self.c_right @ self.c_left

    def correct(self, y: np.ndarray) -> np.ndarray:
        """(I + C_L C⁻¹ C_R) y."""
        return y + self.c_left @ solve_factored(self.factored, self.c_right @ y)


@dataclass(frozen=True)
class BeamFactorization:
    factors: BlockLUFactors
    mods: ModificationRecord
    capacitance: Capacitance | None

    @property
    def blocking(self) -> BlockingScheme:
        return self.factors.blocking


@dataclass(frozen=True)
class RefinementOptions:
    max_iters: int = 10
    target: float = 1e-13


@dataclass(frozen=True)
class SolveReport:
    x: np.ndarray
    iterations: int
    residuals: tuple[float, ...]
    woodbury_used: bool
    converged: bool
    diverged: bool

    @property
    def final_residual(self) -> float:
        return self.residuals[-1]


def _record(mods: list[Modification], blocking: BlockingScheme, tau: float, tau_hat: float) -> ModificationRecord:
    n, m = blocking.n, len(mods)
    u_cols = np.zeros((n, m))
    v_cols = np.zeros((n, m))
    for j, mod in enumerate(mods):
        lo, hi = blocking.bounds(mod.block)
        u_cols[lo:hi, j] = mod.u
        v_cols[lo:hi, j] = mod.v
    return ModificationRecord(
        u_cols=u_cols,
        sigma_deltas=np.array([mod.delta for mod in mods], dtype=np.float64),
        v_cols=v_cols,
        block_of=tuple(mod.block for mod in mods),
        tau=tau,
        tau_hat=tau_hat,
    )


def build_capacitance(factors: BlockLUFactors, mods: ModificationRecord) -> Capacitance:
    c_left = block_forward_sub(factors.l, factors.blocking, mods.u_cols)
    # C_R = M_Σ M_Vᵀ R̃⁻¹ = (R̃⁻ᵀ M_V M_Σ)ᵀ; R̃ᵀ is block lower triangular.
    c_right = (block_forward_sub(factors.r.T, factors.blocking, mods.v_cols) * mods.sigma_deltas).T
    c = np.eye(mods.count) - c_right @ c_left
    return Capacitance(c_left=c_left, c_right=c_right, factored=factor_dense_lu(c))


def beam_factor(
    a: np.ndarray,
    blocking: BlockingScheme,
    tau_hat: float | None = None,
    woodbury: bool = True,
    trace_norms: Iterable[NormKind] | None = None,
    *,
    tau: float | None = None,
    jacobi: JacobiOptions | None = None,
) -> BeamFactorization:
    """Factor Ã = A + M_U M_Σ M_Vᵀ; pass either `tau_hat` or an absolute `tau`."""
    a = as_square(a)
    norm2 = sigma_max(a)
    if norm2 == 0.0:
        raise InvalidArgumentError("A must be nonzero")
    if tau is None:
        if tau_hat is None or not 0.0 < tau_hat < 1.0:
            raise InvalidArgumentError(f"tau_hat must lie in (0, 1), got {tau_hat}")
        tau = tau_hat * norm2
    else:
        if tau <= 0.0:
            raise InvalidArgumentError(f"tau must be positive, got {tau}")
        tau_hat = tau / norm2

    factors, raw = eliminate(a, blocking, DiagFactorizer.UNITARY, trace_norms, jacobi=jacobi, threshold=tau)
    mods = _record(raw, blocking, tau, tau_hat)
    # L and R are incomplete after an overflow.
    capacitance = build_capacitance(factors, mods) if woodbury and mods.count and not factors.trace.overflowed else None

    logger.debug(
        "beam_factor_done",
        n=blocking.n,
        n_blocks=blocking.n_blocks,
        tau=tau,
        modifications=mods.count,
        woodbury=capacitance is not None,
    )
    return BeamFactorization(factors=factors, mods=mods, capacitance=capacitance)


def modified_matrix(f: BeamFactorization, a: np.ndarray) -> np.ndarray:
    a = as_square(a)
    if f.mods.count == 0:
        return a
    return a + f.mods.perturbation()


def apply_inverse(f: BeamFactorization, b: np.ndarray) -> np.ndarray:
    """Forward substitution, Woodbury correction if present, back substitution."""
    y = block_forward_sub(f.factors.l, f.blocking, b)
    if f.capacitance is not None:
        y = f.capacitance.correct(y)
    return block_back_sub(f.factors.r, f.blocking, y)


def _relative_residual(a: np.ndarray, norm_a: float, b: np.ndarray, x: np.ndarray) -> float:
    r = float(np.linalg.norm(b - a @ x))
    denom = norm_a * float(np.linalg.norm(x))
    if denom == 0.0:
        return 0.0 if r == 0.0 else float("inf")
    return r / denom


def beam_solve(
    f: BeamFactorization,
    b: np.ndarray,
    refine: RefinementOptions | None,
    a_original: np.ndarray,
) -> SolveReport:
    a = as_square(a_original, name="A_original")
    b = np.asarray(b, dtype=np.float64)
    if b.shape[0] != a.shape[0]:
        raise InvalidArgumentError(f"b has {b.shape[0]} rows, expected {a.shape[0]}")
    if f.factors.trace.overflowed:
        step = f.factors.trace.overflow_step
        raise NumericalFailureError(f"Schur complement overflowed at step {step}", block=step)
    refine = refine or RefinementOptions(max_iters=0)
    norm_a = sigma_max(a)

    x = apply_inverse(f, b)
    residuals = [_relative_residual(a, norm_a, b, x)]
    iterations = 0
    growing = 0
    diverged = False
    while iterations < refine.max_iters and residuals[-1] > refine.target:
        x = x + apply_inverse(f, b - a @ x)
        iterations += 1
        residuals.append(_relative_residual(a, norm_a, b, x))
        growing = growing + 1 if residuals[-1] > residuals[-2] else 0
        if growing >= 2:
            diverged = True
            logger.warning("refinement_diverged", iterations=iterations, residual=residuals[-1])
            break

    return SolveReport(
        x=x,
        iterations=iterations,
        residuals=tuple(residuals),
        woodbury_used=f.capacitance is not None,
        converged=residuals[-1] <= refine.target,
        diverged=diverged,
    )
