from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from beamlu.core.errors import InvalidArgumentError
from beamlu.linalg.blocking import BlockingScheme
from beamlu.linalg.svd import singular_values


class NormTag(str, Enum):
    MAX = "max"
    ONE = "one"
    INF = "inf"
    FRO = "fro"
    SPECTRAL = "spectral"
    SUM = "sum"
    BLOCK_MAX = "block_max"
    BLOCK_SUM = "block_sum"


_BLOCK_TAGS = {NormTag.BLOCK_MAX, NormTag.BLOCK_SUM}


@dataclass(frozen=True)
class NormKind:
    """A matrix norm; block kinds apply `inner` to every block of a partition.

    `col_blocking` defaults to `blocking`, giving the square partitions used by
    the factorizations.
    """

    tag: NormTag
    inner: NormKind | None = None
    blocking: BlockingScheme | None = None
    col_blocking: BlockingScheme | None = None

    def __post_init__(self) -> None:
        if self.is_block:
            if self.inner is None or self.blocking is None:
                raise InvalidArgumentError(f"{self.tag.value} needs an inner norm and a blocking")
            if self.inner.is_block:
                raise InvalidArgumentError("inner norm of a block norm must be pointwise")
        elif self.inner is not None or self.blocking is not None or self.col_blocking is not None:
            raise InvalidArgumentError(f"{self.tag.value} takes no inner norm or blocking")

    @property
    def is_block(self) -> bool:
        return self.tag in _BLOCK_TAGS

    @property
    def label(self) -> str:
        if self.is_block:
            assert self.inner is not None
            return f"{self.tag.value}_{self.inner.tag.value}"
        return self.tag.value

    def for_trailing(self, k: int) -> NormKind:
        """Same norm restricted to the trailing blocks k..n_t (a Schur complement)."""
        if not self.is_block or k == 1:
            return self
        assert self.blocking is not None
        cols = self.col_blocking.trailing(k) if self.col_blocking is not None else None
        return replace(self, blocking=self.blocking.trailing(k), col_blocking=cols)


MAX = NormKind(NormTag.MAX)
ONE = NormKind(NormTag.ONE)
INF = NormKind(NormTag.INF)
FRO = NormKind(NormTag.FRO)
SPECTRAL = NormKind(NormTag.SPECTRAL)
SUM = NormKind(NormTag.SUM)

POINTWISE_NORMS = (MAX, ONE, INF, FRO, SPECTRAL, SUM)


def block_max(inner: NormKind, blocking: BlockingScheme, col_blocking: BlockingScheme | None = None) -> NormKind:
    return NormKind(NormTag.BLOCK_MAX, inner=inner, blocking=blocking, col_blocking=col_blocking)


def block_sum(inner: NormKind, blocking: BlockingScheme, col_blocking: BlockingScheme | None = None) -> NormKind:
    return NormKind(NormTag.BLOCK_SUM, inner=inner, blocking=blocking, col_blocking=col_blocking)


def default_trace_norms(*, spectral: bool = True) -> frozenset[NormKind]:
    kinds = {MAX, ONE, INF, FRO}
    if spectral:
        kinds.add(SPECTRAL)
    return frozenset(kinds)


def _pointwise(a: np.ndarray, tag: NormTag) -> float:
    abs_a = np.abs(a)
    if tag is NormTag.MAX:
        return float(abs_a.max())
    if tag is NormTag.ONE:
        return float(abs_a.sum(axis=0).max())
    if tag is NormTag.INF:
        return float(abs_a.sum(axis=1).max())
    if tag is NormTag.FRO:
        return float(np.linalg.norm(a))
    if tag is NormTag.SPECTRAL:
        return float(singular_values(a)[0])
    if tag is NormTag.SUM:
        return float(abs_a.sum())
    raise InvalidArgumentError(f"unsupported pointwise norm {tag}")


def block_norms(a: np.ndarray, kind: NormKind) -> np.ndarray:
    """Matrix of inner norms of every block A_{i,j} of a block kind."""
    assert kind.inner is not None and kind.blocking is not None
    rows = kind.blocking
    cols = kind.col_blocking or kind.blocking
    if a.shape != (rows.n, cols.n):
        raise InvalidArgumentError(f"blocking {rows.n}x{cols.n} does not match matrix shape {a.shape}")
    out = np.empty((rows.n_blocks, cols.n_blocks))
    for i, (r0, r1) in enumerate(rows.ranges()):
        for j, (c0, c1) in enumerate(cols.ranges()):
            out[i, j] = _pointwise(a[r0:r1, c0:c1], kind.inner.tag)
    return out


def norm(a: np.ndarray, kind: NormKind) -> float:
    m = np.asarray(a, dtype=np.float64)
    if m.ndim != 2 or m.size == 0:
        raise InvalidArgumentError(f"norm needs a non-empty 2-D matrix, got shape {m.shape}")
    if not kind.is_block:
        return _pointwise(m, kind.tag)
    values = block_norms(m, kind)
    if kind.tag is NormTag.BLOCK_MAX:
        return float(values.max())
    return float(values.sum())
