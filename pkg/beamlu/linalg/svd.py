"""Singular value kernels.

`svd_small` is a cyclic one-sided Jacobi SVD for diagonal blocks: it keeps
small singular values to high relative accuracy, which the modification
threshold test depends on. Whole-matrix quantities (spectral norm, sigma_min,
cond2) use LAPACK `svdvals`, which is deterministic and needs no estimator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.linalg as sla

from beamlu.core.config import JacobiOptions
from beamlu.core.errors import InvalidArgumentError, NumericalFailureError
from beamlu.linalg.dense import UNIT_ROUNDOFF, as_square

_TINY = np.finfo(np.float64).tiny


@dataclass(frozen=True)
class SvdResult:
    u: np.ndarray
    sigma: np.ndarray
    vt: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.u * self.sigma) @ self.vt


@lru_cache(maxsize=128)
def _round_robin(n: int) -> tuple[tuple[np.ndarray, np.ndarray], ...]:
    """Tournament ordering: n-1 rounds of disjoint (p, q) pairs, p < q."""
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        ps, qs = [], []
        for i in range(m // 2):
            a, b = players[i], players[m - 1 - i]
            if a >= n or b >= n:
                continue
            ps.append(min(a, b))
            qs.append(max(a, b))
        if ps:
            rounds.append((np.array(ps, dtype=np.intp), np.array(qs, dtype=np.intp)))
        players = [players[0], players[-1], *players[1:-1]]
    return tuple(rounds)


def _complete_basis(u: np.ndarray, missing: np.ndarray) -> None:
    """Fill columns `missing` of u with unit vectors orthogonal to the rest."""
    n = u.shape[0]
    filled = [j for j in range(u.shape[1]) if j not in set(missing.tolist())]
    for col in missing:
        basis = u[:, filled]
        for i in range(n):
            r = np.zeros(n)
            r[i] = 1.0
            for _ in range(2):
                r -= basis @ (basis.T @ r)
            nr = float(np.linalg.norm(r))
            if nr > 0.5:
                u[:, col] = r / nr
                filled.append(int(col))
                break


def svd_small(a: np.ndarray, options: JacobiOptions | None = None) -> SvdResult:
    options = options or JacobiOptions()
    w = as_square(a)
    n = w.shape[0]
    if n > options.max_size:
        raise InvalidArgumentError(f"block of size {n} exceeds max block size {options.max_size}")

    v = np.eye(n)
    if not np.any(w):
        return SvdResult(u=np.eye(n), sigma=np.zeros(n), vt=np.eye(n))
    # Power-of-two scaling puts max|w| in [1, 2).
    scale = math.ldexp(1.0, math.frexp(float(np.max(np.abs(w))))[1] - 1)
    w = w / scale

    threshold = max(options.tol, n * UNIT_ROUNDOFF)
    rounds = _round_robin(n)
    for _sweep in range(options.max_sweeps):
        rotated = False
        for p, q in rounds:
            wp, wq = w[:, p], w[:, q]
            alpha = np.einsum("ij,ij->j", wp, wp)
            beta = np.einsum("ij,ij->j", wq, wq)
            gamma = np.einsum("ij,ij->j", wp, wq)
            active = np.abs(gamma) > threshold * np.sqrt(alpha * beta)
            if not active.any():
                continue
            rotated = True
            p, q = p[active], q[active]
            alpha, beta, gamma = alpha[active], beta[active], gamma[active]
            zeta = (beta - alpha) / (2.0 * gamma)
            t = np.where(zeta >= 0.0, 1.0, -1.0) / (np.abs(zeta) + np.hypot(1.0, zeta))
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = c * t
            wp, wq = w[:, p], w[:, q]
            w[:, p] = c * wp - s * wq
            w[:, q] = s * wp + c * wq
            vp, vq = v[:, p], v[:, q]
            v[:, p] = c * vp - s * vq
            v[:, q] = s * vp + c * vq
        if not rotated:
            break
    else:
        raise NumericalFailureError(
            f"Jacobi SVD did not converge in {options.max_sweeps} sweeps",
            sweeps=options.max_sweeps,
        )

    sigma = np.linalg.norm(w, axis=0)
    order = np.argsort(-sigma, kind="stable")
    sigma = sigma[order]
    w = w[:, order]
    v = v[:, order]

    zero = sigma <= _TINY
    u = np.zeros_like(w)
    u[:, ~zero] = w[:, ~zero] / sigma[~zero]
    sigma[zero] = 0.0
    if zero.any():
        _complete_basis(u, np.flatnonzero(zero))
    return SvdResult(u=u, sigma=sigma * scale, vt=np.ascontiguousarray(v.T))


def singular_values(a: np.ndarray) -> np.ndarray:
    """All singular values, descending."""
    m = np.asarray(a, dtype=np.float64)
    if m.ndim != 2 or m.size == 0:
        raise InvalidArgumentError(f"singular values need a non-empty 2-D matrix, got shape {m.shape}")
    return np.asarray(sla.svdvals(m, check_finite=False), dtype=np.float64)


def sigma_max(a: np.ndarray) -> float:
    return float(singular_values(as_square(a))[0])


def sigma_min(a: np.ndarray) -> float:
    return float(singular_values(as_square(a))[-1])


def cond2(a: np.ndarray) -> float:
    s = singular_values(as_square(a))
    if s[-1] == 0.0:
        return float("inf")
    return float(s[0] / s[-1])
