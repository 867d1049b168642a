"""Dense matrix helpers.

Matrices are plain float64 numpy arrays. Every helper returns fresh storage,
so callers may keep references to inputs without aliasing surprises.
"""

from __future__ import annotations

import warnings
from typing import Any

import numpy as np
import scipy.linalg as sla

from beamlu.core.errors import InvalidArgumentError, NumericalFailureError

UNIT_ROUNDOFF = 2.0**-53


def as_matrix(value: Any, *, name: str = "A", allow_empty: bool = False) -> np.ndarray:
    """Copy `value` into a 2-D float64 array, validating shape and finiteness."""
    a = np.array(value, dtype=np.float64, copy=True)
    if a.ndim != 2:
        raise InvalidArgumentError(f"{name} must be 2-D, got ndim={a.ndim}")
    if not allow_empty and a.size == 0:
        raise InvalidArgumentError(f"{name} must be non-empty")
    if not np.all(np.isfinite(a)):
        raise InvalidArgumentError(f"{name} has non-finite entries")
    return a


def as_square(value: Any, *, name: str = "A") -> np.ndarray:
    a = as_matrix(value, name=name)
    if a.shape[0] != a.shape[1]:
        raise InvalidArgumentError(f"{name} must be square, got {a.shape}")
    return a


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.shape[-1] != b.shape[0]:
        raise InvalidArgumentError(f"matmul shape mismatch: {a.shape} @ {b.shape}")
    return np.asarray(a @ b, dtype=np.float64)


def matsub(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.shape != b.shape:
        raise InvalidArgumentError(f"matsub shape mismatch: {a.shape} - {b.shape}")
    return np.asarray(a - b, dtype=np.float64)


def transpose(a: np.ndarray) -> np.ndarray:
    return np.array(a.T, dtype=np.float64, copy=True)


def offdiag_abs_sums(a: np.ndarray, *, axis: int) -> np.ndarray:
    """Sum of |a_ij| over i != j; axis=0 sums down columns, axis=1 along rows."""
    abs_a = np.abs(a)
    np.fill_diagonal(abs_a, 0.0)
    return abs_a.sum(axis=axis)


def factor_dense_lu(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Partial-pivoted LU (GEPP) with a working-precision singularity check."""
    a = as_square(a)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", sla.LinAlgWarning)
        lu, piv = sla.lu_factor(a, check_finite=False)
    scale = float(np.max(np.abs(a)))
    pivots = np.abs(np.diag(lu))
    bad = np.flatnonzero(~np.isfinite(pivots) | (pivots <= UNIT_ROUNDOFF * scale))
    if bad.size:
        k = int(bad[0]) + 1
        raise NumericalFailureError(f"matrix is singular to working precision at pivot {k}", pivot=k)
    return lu, piv


def solve_factored(factored: tuple[np.ndarray, np.ndarray], b: np.ndarray) -> np.ndarray:
    return np.asarray(sla.lu_solve(factored, b, check_finite=False), dtype=np.float64)


def solve_dense_lu(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    b = np.asarray(b, dtype=np.float64)
    if b.shape[0] != np.shape(a)[0]:
        raise InvalidArgumentError(f"solve shape mismatch: {np.shape(a)} vs {b.shape}")
    return solve_factored(factor_dense_lu(a), b)
