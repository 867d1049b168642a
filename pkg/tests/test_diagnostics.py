from __future__ import annotations

import math

import numpy as np
import pytest

from beamlu.core.config import JacobiOptions
from beamlu.core.errors import InvalidArgumentError
from beamlu.diagnostics.checks import BoundCheck
from beamlu.diagnostics.dominance import (
    block_dominance,
    dominance,
    is_spd,
    modification_free_bound,
    pointwise_dominance,
    scaled_modification_free_bound,
)
from beamlu.diagnostics.factors import check_backward_error, check_factor_bounds, factored_growth
from beamlu.diagnostics.growth import check_growth_bounds, check_interlacing, growth_check_norms
from beamlu.diagnostics.modifications import determinant_bounds, psi_and_capacitance
from beamlu.diagnostics.zielke import zielke_growth_check
from beamlu.factorization.beam import beam_factor
from beamlu.factorization.block_lu import DiagFactorizer, factor_block_lu, growth_factor
from beamlu.gallery.families import diag_dom, leading_swap, random_cond, spd
from beamlu.linalg.blocking import BlockingScheme
from beamlu.linalg.norms import INF, MAX, ONE, SPECTRAL
from beamlu.services.experiment_runner import _modfree_checks
from beamlu.suites.dominance import FOOTNOTE_MATRIX
from beamlu.suites.psi import INSTANCES, SPD_BLOCK_SIZES, SPD_COND, SPD_N, SPD_TAU_HAT, modified_cases


def _failed(checks: list[BoundCheck]) -> list[BoundCheck]:
    return [c for c in checks if c.failed]


def test_bound_check_semantics() -> None:
    assert BoundCheck.compare("x", 1.0 + 1e-12, 1.0).satisfied
    assert not BoundCheck.compare("x", 1.001, 1.0).satisfied
    assert not BoundCheck.compare("x", math.nan, 1.0).satisfied
    assert BoundCheck.compare("x", 1e300, math.inf).satisfied
    assert BoundCheck.compare("x", 10.0 + 1e-10, 10.0, log_scale=True).satisfied
    skipped = BoundCheck.skipped("x", "not applicable")
    assert skipped.satisfied is None
    assert not skipped.failed


def test_pointwise_dominance_margins() -> None:
    a = np.array([[4.0, 1.0], [-2.0, 3.0]])
    p = pointwise_dominance(a)
    assert p.delta_r == 1.0
    assert p.delta_c == 2.0
    assert p.by_rows and p.by_cols
    weak = pointwise_dominance(np.array([[1.0, 1.0], [0.0, 1.0]]))
    assert weak.delta_r == 0.0
    assert not weak.by_rows


def test_footnote_matrix_inner_norms() -> None:
    blocking = BlockingScheme.uniform(4, 2)
    by_inf = block_dominance(FOOTNOTE_MATRIX, blocking, inner_cols=INF)
    by_one = block_dominance(FOOTNOTE_MATRIX, blocking, inner_cols=ONE)
    assert by_inf.by_cols and by_one.by_cols
    assert by_inf.delta_c == pytest.approx(0.6)
    assert by_one.delta_c == pytest.approx(0.2)
    inv_one = float(np.abs(np.linalg.inv(FOOTNOTE_MATRIX)).sum(axis=0).max())
    assert 1.0 / by_inf.delta_c < inv_one <= 1.0 / by_one.delta_c


def test_spd_detection() -> None:
    assert is_spd(spd(6, 10.0, seed=0))
    assert not is_spd(np.array([[1.0, 2.0], [2.0, 1.0]]))
    assert not is_spd(np.array([[2.0, 1.0], [0.0, 2.0]]))


def test_modification_free_thresholds() -> None:
    a = diag_dom(16, 0.8, seed=3, rows=True, cols=True)
    blocking = BlockingScheme.uniform(16, 4)
    bound = modification_free_bound(dominance(a, blocking), a)
    assert bound.tau_max_cols == pytest.approx(0.8 / 4.0, rel=1e-12)
    assert bound.tau_max_both is not None and bound.tau_max_both >= 0.8 - 1e-12
    assert bound.tau_max_spd is None
    for tau_max in (bound.tau_max_cols, bound.tau_max_rows, bound.tau_max_both):
        f = beam_factor(a, blocking, woodbury=False, trace_norms={MAX}, tau=0.99 * tau_max)
        assert f.mods.count == 0


def test_spd_threshold_is_sigma_min() -> None:
    a = spd(16, 100.0, seed=4)
    bound = modification_free_bound(dominance(a), a)
    assert bound.tau_max_spd == pytest.approx(0.01, rel=1e-10)
    f = beam_factor(a, BlockingScheme.uniform(16, 4), woodbury=False, trace_norms={MAX}, tau=0.99 * bound.tau_max_spd)
    assert f.mods.count == 0


def test_scaled_threshold_reduces_to_unscaled() -> None:
    a = diag_dom(8, 0.5, seed=9, rows=True, cols=True)
    plain = modification_free_bound(dominance(a), a)
    scaled = scaled_modification_free_bound(a, np.ones(8), np.ones(8))
    assert scaled.tau_max_cols == pytest.approx(plain.tau_max_cols)
    assert scaled.tau_max_rows == pytest.approx(plain.tau_max_rows)
    with pytest.raises(InvalidArgumentError):
        scaled_modification_free_bound(a, -np.ones(8), np.ones(8))


@pytest.mark.parametrize("rows, cols", [(True, False), (False, True), (True, True)])
def test_dominant_growth_bounds_hold(rows: bool, cols: bool) -> None:
    a = diag_dom(24, 0.5, seed=1, rows=rows, cols=cols)
    blocking = BlockingScheme.uniform(24, 5)
    trace = factor_block_lu(a, blocking, DiagFactorizer.UNITARY, growth_check_norms(blocking)).trace
    checks = check_growth_bounds(a, blocking, trace)
    names = {c.name for c in checks}
    if rows:
        assert "p_inf_row_dominant" in names
        assert growth_factor(trace, INF) == pytest.approx(1.0, abs=1e-12)
    if cols:
        assert "p_one_col_dominant" in names
    assert _failed(checks) == []
    assert _failed(check_interlacing(a, blocking, trace)) == []


def test_growth_bounds_skip_dominance_for_modified_matrices() -> None:
    a = spd(16, 100.0, seed=2)
    blocking = BlockingScheme.uniform(16, 4)
    f = beam_factor(a, blocking, 0.2, True, growth_check_norms(blocking))
    assert f.mods.count > 0
    elim = a + f.mods.perturbation()
    checks = check_growth_bounds(a, blocking, f.factors.trace, factored=elim)
    assert any(c.name == "dominance_growth" and c.satisfied is None for c in checks)
    assert _failed(checks) == []


def test_growth_bounds_reject_foreign_trace() -> None:
    a = random_cond(8, 10.0, seed=0)
    trace = factor_block_lu(a, BlockingScheme.uniform(8, 2), trace_norms={MAX}).trace
    with pytest.raises(InvalidArgumentError):
        check_growth_bounds(a, BlockingScheme.uniform(8, 4), trace)


def test_factor_and_backward_bounds() -> None:
    a = diag_dom(20, 0.5, seed=6, rows=False, cols=True)
    blocking = BlockingScheme.uniform(20, 4)
    f = factor_block_lu(a, blocking, DiagFactorizer.UNITARY, growth_check_norms(blocking))
    checks = check_factor_bounds(f, a) + check_backward_error(f, a)
    names = {c.name for c in checks}
    assert {"r_norm_spectral", "l_norm_spectral", "l_norm_col_dominant", "factor_residual_max", "solve_residual"} <= names
    assert _failed(checks) == []
    assert factored_growth(f, MAX) == pytest.approx(growth_factor(f.trace, MAX), rel=1e-10)


def test_pointwise_factors_skip_r_norm() -> None:
    a = diag_dom(8, 0.5, seed=6, rows=True, cols=False)
    f = factor_block_lu(a, BlockingScheme.uniform(8, 2), DiagFactorizer.POINTWISE_LU)
    names = {c.name for c in check_factor_bounds(f, a)}
    assert not any(name.startswith("r_norm") for name in names)


def test_psi_for_leading_swap() -> None:
    a = leading_swap(2)
    f = beam_factor(a, BlockingScheme.uniform(2, 1), 0.1)
    report, checks = psi_and_capacitance(f, a)
    expected = 2.0 / (math.sqrt(4.01) - 0.1)
    assert report.psi_measured == pytest.approx(expected, rel=1e-12)
    assert report.cond_a == pytest.approx(1.0)
    assert report.general_valid
    assert report.bound_general == pytest.approx(1.0 / 0.9)
    assert _failed(checks) == []


def test_psi_without_modifications_is_empty() -> None:
    f = beam_factor(np.eye(3), BlockingScheme.uniform(3, 1), 0.5)
    report, checks = psi_and_capacitance(f, np.eye(3))
    assert report.psi_measured is None
    assert checks == []


def test_psi_and_determinant_bounds_on_spd() -> None:
    a = spd(16, 100.0, seed=8)
    f = beam_factor(a, BlockingScheme.uniform(16, 4), 0.04, True, {MAX, SPECTRAL})
    if f.mods.count == 0:
        pytest.skip("no modifications at this threshold")
    _, checks = psi_and_capacitance(f, a)
    checks += determinant_bounds(f, a)
    names = {c.name for c in checks}
    assert {"capacitance_cond", "modified_norm_ratio", "determinant_cond"} <= names
    assert _failed(checks) == []


def test_zielke_growth_is_exact() -> None:
    check = zielke_growth_check(8, 2, 0.25)
    assert check.satisfied
    assert check.context["p_max"] == pytest.approx(64.0, rel=1e-8)
    assert check.context["counts"] == [1, 1, 1, 0]
    assert zielke_growth_check(16, BlockingScheme.uniform(16, 2), 0.5).satisfied


@pytest.mark.parametrize("tau, size", [(0.6, 2), (0.0, 2), (0.25, 1)])
def test_zielke_check_rejects_invalid_arguments(tau: float, size: int) -> None:
    with pytest.raises(InvalidArgumentError):
        zielke_growth_check(8, size, tau)


def test_l_norm_spd_bound_holds() -> None:
    a = spd(32, 1e4, seed=0)
    blocking = BlockingScheme.uniform(32, 4)
    f = factor_block_lu(a, blocking, DiagFactorizer.UNITARY, growth_check_norms(blocking))
    checks = {c.name: c for c in check_factor_bounds(f, a)}
    spd_check = checks["l_norm_spd"]
    assert spd_check.satisfied
    assert spd_check.bound == pytest.approx((math.sqrt(1e4) + 1.0) * 8, rel=1e-6)


def test_l_block_fro_check_needs_block_column_dominance() -> None:
    a = np.array([[1.0, 5.0], [0.5, 1.0]])
    f = factor_block_lu(a, BlockingScheme.uniform(2, 1), DiagFactorizer.UNITARY)
    assert "l_block_max_fro" not in {c.name for c in check_factor_bounds(f, a)}


def test_l_block_fro_check_on_block_column_dominant_input() -> None:
    rng = np.random.Generator(np.random.Philox(key=3))
    a = np.eye(12) + 0.05 * rng.uniform(-1.0, 1.0, (12, 12))
    blocking = BlockingScheme.uniform(12, 3)
    f = factor_block_lu(a, blocking, DiagFactorizer.UNITARY)
    checks = {c.name: c for c in check_factor_bounds(f, a)}
    assert checks["l_block_max_fro"].satisfied


def test_modification_free_check_is_emitted_at_the_threshold() -> None:
    a = np.eye(4)
    blocking = BlockingScheme.uniform(4, 1)
    tau_max = modification_free_bound(dominance(a, blocking), a).best
    f = beam_factor(a, blocking, tau=tau_max)
    assert f.mods.tau == tau_max
    checks = _modfree_checks(a, blocking, f, {})
    assert [c.name for c in checks] == ["modification_free"]
    assert checks[0].satisfied
    assert _modfree_checks(a, blocking, beam_factor(a, blocking, tau=2.0 * tau_max), {}) == []


def test_single_block_spd_fallback_is_modified() -> None:
    assert SPD_TAU_HAT * SPD_COND > 1.0
    blocking = BlockingScheme.uniform(SPD_N, max(SPD_BLOCK_SIZES))
    for seed in range(5):
        f = beam_factor(spd(SPD_N, SPD_COND, seed), blocking, SPD_TAU_HAT)
        assert f.mods.count >= 1


@pytest.mark.slow
def test_modified_cases_cover_every_family() -> None:
    cases = modified_cases(JacobiOptions())
    counts: dict[str, int] = {}
    for case in cases:
        family = str(case.context["family"])
        counts[family] = counts.get(family, 0) + 1
        assert case.factorization.mods.count >= 1
    assert counts == {"spd": INSTANCES, "random_cond": INSTANCES, "leading_swap": 1}
    assert all(case.context["tau_hat"] == SPD_TAU_HAT for case in cases if case.context["family"] == "spd")
