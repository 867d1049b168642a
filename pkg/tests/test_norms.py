from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from beamlu.core.errors import InvalidArgumentError
from beamlu.diagnostics.norm_properties import (
    column_additivity_checks,
    partition_checks,
    submultiplicativity_check,
    zero_padding_checks,
)
from beamlu.gallery.families import random_blocking
from beamlu.linalg.blocking import BlockingScheme
from beamlu.linalg.norms import (
    FRO,
    INF,
    MAX,
    ONE,
    SPECTRAL,
    SUM,
    NormKind,
    NormTag,
    block_max,
    block_norms,
    block_sum,
    default_trace_norms,
    norm,
)

A = np.array([[1.0, -2.0], [3.0, 4.0]])


@pytest.mark.parametrize(
    "kind, expected",
    [
        (MAX, 4.0),
        (ONE, 6.0),
        (INF, 7.0),
        (FRO, math.sqrt(30.0)),
        (SUM, 10.0),
    ],
)
def test_pointwise_norms(kind: NormKind, expected: float) -> None:
    assert norm(A, kind) == pytest.approx(expected, rel=1e-15)


def test_spectral_norm_matches_numpy() -> None:
    assert norm(A, SPECTRAL) == pytest.approx(np.linalg.norm(A, 2), rel=1e-14)


def test_block_norms_of_two_by_two_partition() -> None:
    a = np.arange(16, dtype=float).reshape(4, 4)
    blocking = BlockingScheme.uniform(4, 2)
    values = block_norms(a, block_max(MAX, blocking))
    assert values.tolist() == [[5.0, 7.0], [13.0, 15.0]]
    assert norm(a, block_max(MAX, blocking)) == 15.0
    assert norm(a, block_sum(MAX, blocking)) == 40.0


def test_block_norm_validation() -> None:
    with pytest.raises(InvalidArgumentError):
        NormKind(NormTag.BLOCK_MAX)
    with pytest.raises(InvalidArgumentError):
        NormKind(NormTag.MAX, inner=ONE)
    blocking = BlockingScheme.uniform(4, 2)
    with pytest.raises(InvalidArgumentError):
        block_max(block_sum(ONE, blocking), blocking)
    with pytest.raises(InvalidArgumentError):
        norm(np.zeros((3, 3)), block_max(ONE, blocking))


def test_for_trailing_restricts_block_norms() -> None:
    blocking = BlockingScheme((1, 3, 4, 7))
    kind = block_max(FRO, blocking).for_trailing(2)
    assert kind.blocking == BlockingScheme((1, 2, 5))
    assert MAX.for_trailing(3) is MAX


def test_default_trace_norms() -> None:
    assert SPECTRAL in default_trace_norms()
    assert SPECTRAL not in default_trace_norms(spectral=False)


dims = st.integers(min_value=1, max_value=6)
seeds = st.integers(min_value=0, max_value=10_000)


@settings(max_examples=60, deadline=None)
@given(m=dims, n=dims, seed=seeds)
def test_partition_sandwich(m: int, n: int, seed: int) -> None:
    b = np.random.Generator(np.random.Philox(key=seed)).standard_normal((m, n))
    checks = partition_checks(b, random_blocking(m, seed), random_blocking(n, seed + 1))
    assert [c for c in checks if c.failed] == []


@settings(max_examples=40, deadline=None)
@given(m=dims, n=dims, pad_rows=st.integers(0, 3), pad_cols=st.integers(0, 3), seed=seeds)
def test_zero_padding_invariance(m: int, n: int, pad_rows: int, pad_cols: int, seed: int) -> None:
    b = np.random.Generator(np.random.Philox(key=seed)).standard_normal((m, n))
    assert all(c.satisfied for c in zero_padding_checks(b, pad_rows, pad_cols))


@settings(max_examples=40, deadline=None)
@given(m=dims, n=dims, p=dims, seed=seeds)
def test_column_additivity_and_submultiplicativity(m: int, n: int, p: int, seed: int) -> None:
    rng = np.random.Generator(np.random.Philox(key=seed))
    rows, cols, inner = random_blocking(m, seed), random_blocking(n, seed + 1), random_blocking(p, seed + 2)
    b1 = rng.standard_normal((m, n))
    b2 = rng.standard_normal((m, p))
    assert all(c.satisfied for c in column_additivity_checks(b1, b2, rows, cols, inner))
    c = rng.standard_normal((n, p))
    assert submultiplicativity_check(b1, c, rows, cols, inner).satisfied
