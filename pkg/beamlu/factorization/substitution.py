from __future__ import annotations

import numpy as np

from beamlu.core.errors import InvalidArgumentError, NumericalFailureError
from beamlu.linalg.blocking import BlockingScheme
from beamlu.linalg.dense import solve_dense_lu


def _prepare(m: np.ndarray, blocking: BlockingScheme, b: np.ndarray) -> np.ndarray:
    blocking.check_dim(m.shape[0])
    rhs = np.array(b, dtype=np.float64, copy=True)
    if rhs.shape[0] != m.shape[0]:
        raise InvalidArgumentError(f"right-hand side has {rhs.shape[0]} rows, expected {m.shape[0]}")
    return rhs


def _solve_diagonal(block: np.ndarray, rhs: np.ndarray, k: int) -> np.ndarray:
    try:
        return solve_dense_lu(block, rhs)
    except NumericalFailureError as exc:
        raise NumericalFailureError(f"diagonal block {k} is singular", pivot=exc.pivot, block=k) from exc


def block_forward_sub(l: np.ndarray, blocking: BlockingScheme, b: np.ndarray) -> np.ndarray:
    """Solve L y = b for block lower triangular L, ascending block order."""
    y = _prepare(l, blocking, b)
    for k, (lo, hi) in enumerate(blocking.ranges(), start=1):
        y[lo:hi] = _solve_diagonal(l[lo:hi, lo:hi], y[lo:hi], k)
        y[hi:] -= l[hi:, lo:hi] @ y[lo:hi]
    return y


def block_back_sub(r: np.ndarray, blocking: BlockingScheme, y: np.ndarray) -> np.ndarray:
    """Solve R x = y for block upper triangular R, descending block order."""
    x = _prepare(r, blocking, y)
    ranges = blocking.ranges()
    for k in range(len(ranges), 0, -1):
        lo, hi = ranges[k - 1]
        x[lo:hi] = _solve_diagonal(r[lo:hi, lo:hi], x[lo:hi] - r[lo:hi, hi:] @ x[hi:], k)
    return x
