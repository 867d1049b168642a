from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from beamlu.core.errors import InvalidArgumentError

BlockRange = int | tuple[int, int]


@dataclass(frozen=True)
class BlockingScheme:
    """1-based block start indices; the last entry is the past-the-end marker n+1."""

    starts: tuple[int, ...]

    def __post_init__(self) -> None:
        starts = tuple(int(s) for s in self.starts)
        object.__setattr__(self, "starts", starts)
        if len(starts) < 2:
            raise InvalidArgumentError("blocking needs at least one block")
        if starts[0] != 1:
            raise InvalidArgumentError(f"blocking must start at 1, got {starts[0]}")
        if any(b <= a for a, b in zip(starts, starts[1:])):
            raise InvalidArgumentError(f"blocking starts must be strictly increasing: {starts}")

    @classmethod
    def uniform(cls, n: int, size: int) -> BlockingScheme:
        if n < 1 or size < 1:
            raise InvalidArgumentError(f"uniform blocking needs n >= 1 and size >= 1, got n={n}, size={size}")
        return cls(tuple(range(1, n + 1, size)) + (n + 1,))

    @classmethod
    def from_sizes(cls, sizes: Iterable[int]) -> BlockingScheme:
        starts = [1]
        for s in sizes:
            starts.append(starts[-1] + int(s))
        return cls(tuple(starts))

    @property
    def n(self) -> int:
        return self.starts[-1] - 1

    @property
    def n_blocks(self) -> int:
        return len(self.starts) - 1

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(b - a for a, b in zip(self.starts, self.starts[1:]))

    @property
    def max_block_size(self) -> int:
        return max(self.sizes)

    @property
    def label(self) -> str:
        return ",".join(str(s) for s in self.starts)

    def bounds(self, k: int) -> tuple[int, int]:
        """0-based half-open row range of block k (1-based)."""
        if not 1 <= k <= self.n_blocks:
            raise InvalidArgumentError(f"block index {k} out of range 1..{self.n_blocks}")
        return self.starts[k - 1] - 1, self.starts[k] - 1

    def ranges(self) -> list[tuple[int, int]]:
        return [(a - 1, b - 1) for a, b in zip(self.starts, self.starts[1:])]

    def owner(self, row: int) -> int:
        """1-based block owning 0-based `row`."""
        return int(np.searchsorted(np.asarray(self.starts), row + 1, side="right"))

    def check_dim(self, n: int, *, name: str = "A") -> None:
        if n != self.n:
            raise InvalidArgumentError(f"blocking covers {self.n} indices but {name} has dimension {n}")

    def leading(self, k: int) -> BlockingScheme:
        return BlockingScheme(self.starts[: k + 1])

    def trailing(self, k: int) -> BlockingScheme:
        """Blocks k..n_t renumbered to start at 1."""
        shift = self.starts[k - 1] - 1
        return BlockingScheme(tuple(s - shift for s in self.starts[k - 1 :]))

    def is_refinement_of(self, other: BlockingScheme) -> bool:
        return self.n == other.n and set(other.starts) <= set(self.starts)


def _block_span(blocking: BlockingScheme, r: BlockRange) -> slice:
    lo, hi = (r, r) if isinstance(r, int) else r
    if lo > hi:
        raise InvalidArgumentError(f"empty block range {r}")
    a, _ = blocking.bounds(lo)
    _, b = blocking.bounds(hi)
    return slice(a, b)


def block_view(
    a: np.ndarray,
    blocking: BlockingScheme,
    i: BlockRange,
    j: BlockRange,
    *,
    col_blocking: BlockingScheme | None = None,
) -> np.ndarray:
    """Copy of the block rectangle A_{i,j}; ranges are inclusive 1-based pairs."""
    cols = col_blocking or blocking
    blocking.check_dim(a.shape[0])
    cols.check_dim(a.shape[1])
    return np.array(a[_block_span(blocking, i), _block_span(cols, j)], copy=True)
