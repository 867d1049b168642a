from __future__ import annotations

import math

import numpy as np
import pytest
from pydantic import ValidationError

from beamlu.core.errors import InvalidArgumentError, MatrixMarketParseError
from beamlu.diagnostics.dominance import block_dominance, pointwise_dominance
from beamlu.gallery.families import (
    MatrixFamily,
    MatrixSpec,
    generate,
    inverse_block_diag_dom_rows,
    random_blocking,
    random_cond,
    tridiag_ttt,
    turing_t,
    zielke,
)
from beamlu.integrations.matrix_market import read_matrix_market, write_matrix_market
from beamlu.linalg.blocking import BlockingScheme
from beamlu.linalg.norms import INF, MAX, ONE, norm
from beamlu.linalg.svd import cond2, singular_values
from beamlu.suites.turing import turing_inverse


def test_zielke_structure() -> None:
    a = zielke(4)
    assert a.tolist() == [
        [0.0, 1.0, 1.0, 1.0],
        [0.0, 0.0, 1.0, 1.0],
        [0.0, 0.0, 0.0, 1.0],
        [-1.0, 0.0, 0.0, 0.0],
    ]


@pytest.mark.parametrize("n", [5, 10, 20, 30])
def test_turing_inverse_norms_are_exact(n: int) -> None:
    inv = turing_inverse(n)
    assert norm(inv, MAX) == 2.0 ** (n - 2)
    assert norm(inv, ONE) == 2.0 ** (n - 1)
    assert norm(inv, INF) == 2.0 ** (n - 1)
    assert singular_values(turing_t(n))[-1] <= 2.0 ** (2 - n) * (1 + 1e-9)


@pytest.mark.parametrize("n", [4, 16, 50])
def test_tridiag_ttt_sigma_min(n: int) -> None:
    expected = 4.0 * math.sin(math.pi / (4 * n + 2)) ** 2
    assert singular_values(tridiag_ttt(n))[-1] == pytest.approx(expected, rel=1e-10)


@pytest.mark.parametrize(
    "family, rows, cols",
    [
        (MatrixFamily.DIAG_DOM_ROWS, True, False),
        (MatrixFamily.DIAG_DOM_COLS, False, True),
        (MatrixFamily.DIAG_DOM_BOTH, True, True),
    ],
)
def test_diag_dom_margins(family: MatrixFamily, rows: bool, cols: bool) -> None:
    a = generate(MatrixSpec(family=family, n=12, delta=0.25, seed=4))
    p = pointwise_dominance(a)
    if rows:
        assert p.delta_r >= 0.25
    if cols:
        assert p.delta_c >= 0.25


def test_block_diag_dom_cols_margin() -> None:
    spec = MatrixSpec(family=MatrixFamily.BLOCK_DIAG_DOM_COLS, n=10, delta=0.5, seed=2, starts=(1, 4, 5, 11))
    a = generate(spec)
    b = block_dominance(a, spec.blocking)
    assert b.by_cols
    assert b.delta_c == pytest.approx(0.5, rel=1e-9)


def test_inverse_block_diag_dom_rows_has_dominant_inverse() -> None:
    blocking = BlockingScheme.uniform(9, 3)
    a = inverse_block_diag_dom_rows(blocking, 0.5, seed=3)
    assert block_dominance(np.linalg.inv(a), blocking).by_rows


@pytest.mark.parametrize("family", [MatrixFamily.SPD, MatrixFamily.RANDOM_COND])
def test_conditioned_families(family: MatrixFamily) -> None:
    a = generate(MatrixSpec(family=family, n=10, cond_target=1e4, seed=0))
    assert cond2(a) == pytest.approx(1e4, rel=1e-8)
    if family is MatrixFamily.SPD:
        assert np.array_equal(a, a.T)


def test_random_families_are_seeded() -> None:
    spec = MatrixSpec(family=MatrixFamily.RANDOM_COND, n=6, cond_target=10.0, seed=42)
    assert np.array_equal(generate(spec), generate(spec))
    assert not np.array_equal(random_cond(6, 10.0, 42), random_cond(6, 10.0, 43))
    assert random_blocking(20, 7, max_size=4) == random_blocking(20, 7, max_size=4)
    assert random_blocking(20, 7, max_size=4).max_block_size <= 4


def test_spec_validation_and_key() -> None:
    with pytest.raises(ValidationError):
        MatrixSpec(family=MatrixFamily.SPD, n=4, seed=1)
    with pytest.raises(ValidationError):
        MatrixSpec(family=MatrixFamily.DIAG_DOM_ROWS, n=4, delta=0.1)
    with pytest.raises(ValidationError):
        MatrixSpec(family=MatrixFamily.ZIELKE, n=1)
    spec = MatrixSpec(family=MatrixFamily.SPD, n=4, cond_target=100.0, seed=3)
    assert spec.key == "spd:n=4:cond_target=100:seed=3"
    assert spec.is_random
    assert not MatrixSpec(family=MatrixFamily.ZIELKE, n=4).is_random
    with pytest.raises(InvalidArgumentError):
        random_cond(3, 1.0, 0)


def test_matrix_market_round_trip_is_exact(tmp_path, rng: np.random.Generator) -> None:
    a = rng.standard_normal((4, 3))
    path = tmp_path / "a.mtx"
    write_matrix_market(path, a)
    assert np.array_equal(read_matrix_market(path), a)


def test_matrix_market_coordinate_symmetric(tmp_path) -> None:
    path = tmp_path / "s.mtx"
    path.write_text(
        "%%MatrixMarket matrix coordinate real symmetric\n% comment\n3 3 3\n1 1 2.0\n3 1 -1.5\n2 2 4\n",
        encoding="utf-8",
    )
    assert read_matrix_market(path).tolist() == [[2.0, 0.0, -1.5], [0.0, 4.0, 0.0], [-1.5, 0.0, 0.0]]


@pytest.mark.parametrize(
    "body, line",
    [
        ("%%MatrixMarket matrix array complex general\n1 1\n1\n", 1),
        ("%%MatrixMarket matrix array real general\n2 2\n1\n2\nx\n4\n", 5),
        ("%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1.0\n", 3),
        ("%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n", 5),
    ],
)
def test_matrix_market_errors_carry_line(tmp_path, body: str, line: int) -> None:
    path = tmp_path / "bad.mtx"
    path.write_text(body, encoding="utf-8")
    with pytest.raises(MatrixMarketParseError) as info:
        read_matrix_market(path)
    assert info.value.line == line
    assert str(path) in str(info.value)


def test_matrix_market_missing_file(tmp_path) -> None:
    with pytest.raises(InvalidArgumentError, match="not found"):
        read_matrix_market(tmp_path / "nope.mtx")
