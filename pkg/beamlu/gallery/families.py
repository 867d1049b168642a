"""Test matrix families.

Random families draw from numpy's counter-based Philox generator keyed by the
seed, so a (family, parameters, seed) triple names one matrix.
"""

from __future__ import annotations

from enum import Enum

import numpy as np
import scipy.linalg as sla
from pydantic import BaseModel, ConfigDict, Field, model_validator

from beamlu.core.errors import InvalidArgumentError
from beamlu.linalg.blocking import BlockingScheme
from beamlu.linalg.dense import offdiag_abs_sums, solve_dense_lu
from beamlu.linalg.norms import ONE, norm


class MatrixFamily(str, Enum):
    IDENTITY = "identity"
    ZIELKE = "zielke"
    TURING_T = "turing_t"
    TRIDIAG_TTT = "tridiag_ttt"
    DIAG_DOM_ROWS = "diag_dom_rows"
    DIAG_DOM_COLS = "diag_dom_cols"
    DIAG_DOM_BOTH = "diag_dom_both"
    BLOCK_DIAG_DOM_COLS = "block_diag_dom_cols"
    SPD = "spd"
    INVERSE_BLOCK_DIAG_DOM_ROWS = "inverse_block_diag_dom_rows"
    RANDOM_COND = "random_cond"
    LEADING_SWAP = "leading_swap"


_RANDOM = {
    MatrixFamily.DIAG_DOM_ROWS,
    MatrixFamily.DIAG_DOM_COLS,
    MatrixFamily.DIAG_DOM_BOTH,
    MatrixFamily.BLOCK_DIAG_DOM_COLS,
    MatrixFamily.SPD,
    MatrixFamily.INVERSE_BLOCK_DIAG_DOM_ROWS,
    MatrixFamily.RANDOM_COND,
}
_NEEDS_DELTA = {
    MatrixFamily.DIAG_DOM_ROWS,
    MatrixFamily.DIAG_DOM_COLS,
    MatrixFamily.DIAG_DOM_BOTH,
    MatrixFamily.BLOCK_DIAG_DOM_COLS,
    MatrixFamily.INVERSE_BLOCK_DIAG_DOM_ROWS,
}
_NEEDS_BLOCKING = {MatrixFamily.BLOCK_DIAG_DOM_COLS, MatrixFamily.INVERSE_BLOCK_DIAG_DOM_ROWS}
_NEEDS_COND = {MatrixFamily.SPD, MatrixFamily.RANDOM_COND}


def is_random_family(family: MatrixFamily) -> bool:
    return family in _RANDOM


class MatrixSpec(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    family: MatrixFamily
    n: int = Field(ge=1)
    delta: float | None = Field(default=None, gt=0)
    cond_target: float | None = Field(default=None, ge=1)
    seed: int | None = Field(default=None, ge=0)
    block_size: int | None = Field(default=None, ge=1)
    starts: tuple[int, ...] | None = None

    @model_validator(mode="after")
    def _check_parameters(self) -> MatrixSpec:
        if self.family is not MatrixFamily.IDENTITY and self.n < 2:
            raise ValueError(f"{self.family.value} needs n >= 2")
        if self.family in _NEEDS_DELTA and self.delta is None:
            raise ValueError(f"{self.family.value} needs delta")
        if self.family in _NEEDS_COND and self.cond_target is None:
            raise ValueError(f"{self.family.value} needs cond_target")
        if self.family in _RANDOM and self.seed is None:
            raise ValueError(f"{self.family.value} needs seed")
        if self.family in _NEEDS_BLOCKING and self.block_size is None and self.starts is None:
            raise ValueError(f"{self.family.value} needs block_size or starts")
        return self

    @property
    def is_random(self) -> bool:
        return is_random_family(self.family)

    @property
    def blocking(self) -> BlockingScheme | None:
        if self.starts is not None:
            return BlockingScheme(self.starts)
        if self.block_size is not None:
            return BlockingScheme.uniform(self.n, self.block_size)
        return None

    @property
    def key(self) -> str:
        parts = [self.family.value, f"n={self.n}"]
        for name in ("delta", "cond_target", "block_size", "seed"):
            value = getattr(self, name)
            if value is not None:
                parts.append(f"{name}={value:g}" if isinstance(value, float) else f"{name}={value}")
        if self.starts is not None:
            parts.append("starts=" + "/".join(str(s) for s in self.starts))
        return ":".join(parts)


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=seed))


def random_blocking(n: int, seed: int, *, max_size: int | None = None) -> BlockingScheme:
    """A seeded random partition of 1..n with blocks of at most `max_size`."""
    rng = _rng(seed)
    cap = n if max_size is None else max_size
    sizes: list[int] = []
    left = n
    while left:
        size = int(rng.integers(1, min(cap, left) + 1))
        sizes.append(size)
        left -= size
    return BlockingScheme.from_sizes(sizes)


def _orthogonal(rng: np.random.Generator, n: int) -> np.ndarray:
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.where(np.diag(r) < 0, -1.0, 1.0)


def _log_spectrum(n: int, cond: float) -> np.ndarray:
    return np.logspace(0.0, -np.log10(cond), n)


def _raise_margin(diag: np.ndarray, sums: np.ndarray, delta: float) -> np.ndarray:
    """Smallest diag ≥ sums + delta such that diag − sums ≥ delta holds in floating point."""
    out = sums + delta
    short = out - sums < delta
    while short.any():
        out[short] = np.nextafter(out[short], np.inf)
        short = out - sums < delta
    return out * np.where(diag < 0, -1.0, 1.0)


def zielke(n: int) -> np.ndarray:
    a = np.triu(np.ones((n, n)), 1)
    a[n - 1, 0] = -1.0
    return a


def turing_t(n: int) -> np.ndarray:
    return np.eye(n) - np.tril(np.ones((n, n)), -1)


def tridiag_ttt(n: int) -> np.ndarray:
    """T⁻ᵀT⁻¹ for T the upper triangular matrix of ones."""
    b = np.eye(n) - np.eye(n, k=1)
    return b.T @ b


def leading_swap(n: int) -> np.ndarray:
    a = np.eye(n)
    a[:2, :2] = [[0.0, 1.0], [1.0, 0.0]]
    return a


def diag_dom(n: int, delta: float, seed: int, *, rows: bool, cols: bool) -> np.ndarray:
    rng = _rng(seed)
    a = rng.uniform(-1.0, 1.0, size=(n, n))
    signs = rng.choice([-1.0, 1.0], size=n)
    np.fill_diagonal(a, 0.0)
    need = np.zeros(n)
    if rows:
        need = np.maximum(need, offdiag_abs_sums(a, axis=1))
    if cols:
        need = np.maximum(need, offdiag_abs_sums(a, axis=0))
    np.fill_diagonal(a, _raise_margin(signs, need, delta))
    return a


def block_diag_dom_cols(blocking: BlockingScheme, delta: float, seed: int) -> np.ndarray:
    """Block column dominant in the 1-norm: ‖A_jj⁻¹‖₁⁻¹ = Σ_{i≠j}‖A_ij‖₁ + delta (to rounding)."""
    rng = _rng(seed)
    n = blocking.n
    a = rng.uniform(-1.0, 1.0, size=(n, n))
    ranges = blocking.ranges()
    for j, (c0, c1) in enumerate(ranges):
        off = sum(norm(a[r0:r1, c0:c1], ONE) for i, (r0, r1) in enumerate(ranges) if i != j)
        q = _orthogonal(rng, c1 - c0)
        inv_norm = norm(q.T, ONE)
        # slack keeps the computed margin at or above delta after rounding
        a[c0:c1, c0:c1] = (off + delta) * inv_norm * (1.0 + 1e-12) * q
    return a


def inverse_block_diag_dom_rows(blocking: BlockingScheme, delta: float, seed: int) -> np.ndarray:
    """Inverse of a block row dominant (∞ inner norm) matrix."""
    b = block_diag_dom_cols(blocking, delta, seed).T
    inv = solve_dense_lu(b, np.eye(blocking.n))
    err = float(np.max(np.abs(inv @ b - np.eye(blocking.n))))
    if err > 1e-10:
        raise InvalidArgumentError(f"inverse certification failed: ‖A·B − I‖_max = {err:.3e}")
    return inv


def spd(n: int, cond: float, seed: int) -> np.ndarray:
    q = _orthogonal(_rng(seed), n)
    a = (q * _log_spectrum(n, cond)) @ q.T
    return (a + a.T) / 2.0


def random_cond(n: int, cond: float, seed: int) -> np.ndarray:
    if cond == 1.0 and n > 1:
        raise InvalidArgumentError("random_cond needs cond_target > 1 for n > 1")
    rng = _rng(seed)
    u = _orthogonal(rng, n)
    v = _orthogonal(rng, n)
    return (u * _log_spectrum(n, cond)) @ v.T


def generate(spec: MatrixSpec) -> np.ndarray:
    f, n = spec.family, spec.n
    if f is MatrixFamily.IDENTITY:
        return np.eye(n)
    if f is MatrixFamily.ZIELKE:
        return zielke(n)
    if f is MatrixFamily.TURING_T:
        return turing_t(n)
    if f is MatrixFamily.TRIDIAG_TTT:
        return tridiag_ttt(n)
    if f is MatrixFamily.LEADING_SWAP:
        return leading_swap(n)

    assert spec.seed is not None
    if f is MatrixFamily.DIAG_DOM_ROWS:
        return diag_dom(n, spec.delta, spec.seed, rows=True, cols=False)
    if f is MatrixFamily.DIAG_DOM_COLS:
        return diag_dom(n, spec.delta, spec.seed, rows=False, cols=True)
    if f is MatrixFamily.DIAG_DOM_BOTH:
        return diag_dom(n, spec.delta, spec.seed, rows=True, cols=True)
    if f is MatrixFamily.SPD:
        return spd(n, spec.cond_target, spec.seed)
    if f is MatrixFamily.RANDOM_COND:
        return random_cond(n, spec.cond_target, spec.seed)

    blocking = spec.blocking
    assert blocking is not None
    blocking.check_dim(n, name=f.value)
    if f is MatrixFamily.BLOCK_DIAG_DOM_COLS:
        return block_diag_dom_cols(blocking, spec.delta, spec.seed)
    return inverse_block_diag_dom_rows(blocking, spec.delta, spec.seed)
