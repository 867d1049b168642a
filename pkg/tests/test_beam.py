from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from beamlu.core.errors import InvalidArgumentError
from beamlu.factorization.beam import (
    RefinementOptions,
    apply_inverse,
    beam_factor,
    beam_solve,
    build_capacitance,
    modified_matrix,
)
from beamlu.factorization.block_lu import DiagFactorizer, factor_block_lu, growth_factor
from beamlu.gallery.families import leading_swap, random_blocking, random_cond, spd, zielke
from beamlu.linalg.blocking import BlockingScheme
from beamlu.linalg.dense import UNIT_ROUNDOFF
from beamlu.linalg.norms import FRO, MAX, SPECTRAL, norm
from beamlu.linalg.svd import singular_values


def test_leading_swap_gets_one_modification() -> None:
    a = leading_swap(2)
    f = beam_factor(a, BlockingScheme.uniform(2, 1), 0.1)
    assert f.mods.count == 1
    assert f.mods.per_block(2) == [1, 0]
    assert f.mods.tau == pytest.approx(0.1)
    assert f.mods.sigma_deltas.tolist() == pytest.approx([0.1])
    assert np.allclose(np.abs(modified_matrix(f, a)), [[0.1, 1.0], [1.0, 0.0]])
    assert f.capacitance is not None


def test_woodbury_solve_recovers_original_system() -> None:
    a = leading_swap(2)
    f = beam_factor(a, BlockingScheme.uniform(2, 1), 0.1)
    b = np.array([2.0, 3.0])
    assert np.allclose(apply_inverse(f, b), [3.0, 2.0], atol=1e-14)
    report = beam_solve(f, b, None, a)
    assert report.woodbury_used
    assert report.iterations == 0
    assert report.final_residual <= 1e-14


def test_spd_block_modifications_and_refinement() -> None:
    a = spd(16, 100.0, seed=5)
    f = beam_factor(a, BlockingScheme.uniform(16, 4), 0.2, True, {MAX, SPECTRAL})
    assert f.mods.count >= 1
    assert sum(f.mods.per_block(4)) == f.mods.count
    b = a @ np.ones(16)
    report = beam_solve(f, b, RefinementOptions(max_iters=10, target=1e-13), a)
    assert report.converged
    assert not report.diverged
    assert np.allclose(report.x, np.ones(16), atol=1e-10)


def test_without_woodbury_the_solve_targets_the_modified_matrix() -> None:
    a = spd(16, 100.0, seed=5)
    f = beam_factor(a, BlockingScheme.uniform(16, 4), 0.2, False)
    assert f.capacitance is None
    b = a @ np.ones(16)
    plain = beam_solve(f, b, None, a)
    assert not plain.woodbury_used
    assert plain.final_residual > 1e-8
    refined = beam_solve(f, b, RefinementOptions(max_iters=5, target=1e-12), a)
    assert refined.iterations >= 1
    assert len(refined.residuals) == refined.iterations + 1


def test_capacitance_of_recorded_modifications() -> None:
    a = spd(8, 100.0, seed=1)
    f = beam_factor(a, BlockingScheme.uniform(8, 2), 0.05)
    if f.mods.count == 0:
        pytest.skip("threshold left the factorization unmodified")
    cap = build_capacitance(f.factors, f.mods)
    assert cap.matrix.shape == (f.mods.count, f.mods.count)
    # A⁻¹ = R̃⁻¹ (I + C_L C⁻¹ C_R) L̃⁻¹ must reproduce the dense inverse
    inv = np.column_stack([apply_inverse(f, e) for e in np.eye(8)])
    assert np.allclose(inv @ a, np.eye(8), atol=1e-10)


def test_exact_threshold_tie_records_no_modification() -> None:
    a = np.diag([0.5, 1.0])
    f = beam_factor(a, BlockingScheme.uniform(2, 1), tau=0.5)
    assert f.mods.count == 0
    assert f.capacitance is None
    assert np.array_equal(modified_matrix(f, a), a)


def test_recorded_deltas_are_positive_and_bounded_by_tau() -> None:
    a = spd(16, 100.0, seed=5)
    f = beam_factor(a, BlockingScheme.uniform(16, 4), 0.2)
    assert f.mods.count >= 1
    assert np.all(f.mods.sigma_deltas > 0.0)
    assert np.all(f.mods.sigma_deltas <= f.mods.tau)


def test_unmodified_factorization_has_no_capacitance() -> None:
    f = beam_factor(np.eye(4), BlockingScheme.uniform(4, 2), 0.01)
    assert f.mods.count == 0
    assert f.capacitance is None
    assert f.mods.u_cols.shape == (4, 0)


@pytest.mark.parametrize("kwargs", [{"tau_hat": 0.0}, {"tau_hat": 1.0}, {"tau_hat": None}, {"tau": -1.0}])
def test_threshold_validation(kwargs: dict[str, float | None]) -> None:
    with pytest.raises(InvalidArgumentError):
        beam_factor(np.eye(2), BlockingScheme.uniform(2, 1), **kwargs)


def test_zero_matrix_is_rejected() -> None:
    with pytest.raises(InvalidArgumentError):
        beam_factor(np.zeros((2, 2)), BlockingScheme.uniform(2, 1), 0.1)


def test_solve_checks_rhs_length() -> None:
    f = beam_factor(np.eye(3), BlockingScheme.uniform(3, 1), 0.1)
    with pytest.raises(InvalidArgumentError):
        beam_solve(f, np.ones(4), None, np.eye(3))


def test_leading_swap_growth_is_inverse_threshold() -> None:
    f = beam_factor(leading_swap(2), BlockingScheme.uniform(2, 1), 0.1, True, {MAX})
    assert abs(f.factors.l[1, 0]) == pytest.approx(10.0)
    assert growth_factor(f.factors.trace, MAX) == pytest.approx(10.0)


def test_tiny_threshold_on_singular_block_does_not_fail() -> None:
    a = np.array([[0.0, 1.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 1.0]])
    blocking = BlockingScheme.from_sizes([2, 1])
    f = beam_factor(a, blocking, 1e-17, False, {MAX})
    assert f.mods.per_block(2) == [1, 0]
    assert f.mods.sigma_deltas.tolist() == pytest.approx([1e-17])
    assert np.allclose(f.factors.product(), modified_matrix(f, a), atol=1e-15)


def test_tiny_absolute_threshold_on_zielke_does_not_fail() -> None:
    f = beam_factor(zielke(16), BlockingScheme.uniform(16, 2), tau=1e-30, woodbury=False, trace_norms={MAX})
    assert not f.factors.trace.overflowed
    assert f.mods.count >= 1
    assert np.all(f.mods.sigma_deltas > 0.0)
    assert np.all(np.isfinite(f.factors.l))


def test_unmodified_factorization_matches_plain_block_lu_bitwise() -> None:
    a = spd(16, 100.0, seed=9)
    blocking = BlockingScheme.uniform(16, 4)
    kinds = {MAX, FRO, SPECTRAL}
    f = beam_factor(a, blocking, 1 / 200, True, kinds)
    plain = factor_block_lu(a, blocking, DiagFactorizer.UNITARY, kinds)
    assert f.mods.count == 0
    assert np.array_equal(f.factors.l, plain.l)
    assert np.array_equal(f.factors.r, plain.r)
    assert [rec.norms for rec in f.factors.trace.records] == [rec.norms for rec in plain.trace.records]


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(min_value=0, max_value=10_000), tau_hat=st.sampled_from([1e-3, 1e-2, 0.05]))
def test_diagonal_blocks_end_at_or_above_threshold(seed: int, tau_hat: float) -> None:
    a = random_cond(12, 1e6, seed)
    blocking = random_blocking(12, seed, max_size=4)
    f = beam_factor(a, blocking, tau_hat, False, {MAX})
    for lo, hi in blocking.ranges():
        assert singular_values(f.factors.r[lo:hi, lo:hi])[-1] >= f.mods.tau * (1 - 1e-10)


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(min_value=0, max_value=10_000))
def test_beam_equals_block_lu_of_modified_matrix(seed: int) -> None:
    a = random_cond(12, 1e3, seed)
    blocking = BlockingScheme.uniform(12, 3)
    kinds = {MAX, FRO}
    f = beam_factor(a, blocking, 0.05, False, kinds)
    a_mod = modified_matrix(f, a)
    plain = factor_block_lu(a_mod, blocking, DiagFactorizer.UNITARY, kinds)

    scale = norm(a_mod, MAX)
    envelopes = [1e3 * 12 * UNIT_ROUNDOFF * growth_factor(g.trace, MAX) * scale for g in (f.factors, plain)]
    assert np.max(np.abs(f.factors.product() - a_mod)) <= envelopes[0]
    assert np.max(np.abs(plain.product() - a_mod)) <= envelopes[1]
    assert np.max(np.abs(f.factors.product() - plain.product())) <= sum(envelopes)


@pytest.mark.parametrize(("cond", "target"), [(1e6, 1e-13), (1e8, 1e-12)])
def test_refinement_reaches_target_on_ill_conditioned_input(cond: float, target: float) -> None:
    a = random_cond(64, cond, seed=1)
    f = beam_factor(a, BlockingScheme.uniform(64, 8), 1e-4)
    b = a @ np.ones(64)
    report = beam_solve(f, b, RefinementOptions(max_iters=10, target=target), a)
    assert report.converged
    assert not report.diverged
    assert report.iterations <= 10
    assert report.final_residual <= target
