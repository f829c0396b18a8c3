"""Tests for the brute-force grid oracle, the exact 2-norm and the counterexample miner."""

import numpy as np
import pytest

from hypernorm import oracle
from hypernorm.config import reset_settings
from hypernorm.errors import InputError, SizeCapError
from hypernorm.generate import random_signs, random_symmetric
from hypernorm.optimize import AscentConfig, EqualityConstraint, maximize_pnorm
from hypernorm.oracle import (
    COUNTEREXAMPLE_GAP,
    DOCUMENTED_SLACK_K64,
    GridSpec,
    exact_2norm_2matrix,
    find_counterexample,
    grid_max,
    grid_slack,
    sphere_grid,
)
from hypernorm.tensor import DenseHypermatrix, linear_form, pnorm, sign_transform

K64 = GridSpec(resolution=64)
K64_ORTHANT = GridSpec(resolution=64, orthant=True)


class TestSphereGrid:
    def test_orthant_points_are_primitive_directions(self):
        points = sphere_grid(2, 2.0, 2, orthant=True)
        assert len(points) == 5
        for point in points:
            assert pnorm(point, 2.0) == pytest.approx(1.0)
            assert np.all(point >= 0)

    def test_signed_points_are_unique_up_to_global_sign(self):
        points = sphere_grid(2, 3.0, 1, orthant=False)
        assert len(points) == 4
        keys = {tuple(np.sign(p)) for p in points}
        assert (1.0, -1.0) in keys
        assert (-1.0, 1.0) not in keys

    def test_cap(self):
        with pytest.raises(SizeCapError) as info:
            sphere_grid(4, 2.0, 64, orthant=False, cap=1000)
        assert info.value.estimate > info.value.cap == 1000


class TestGridMax:
    def test_identity(self, identity2):
        result = grid_max(identity2, 2.0, K64_ORTHANT)
        assert result.value == pytest.approx(1.0, abs=DOCUMENTED_SLACK_K64)

    def test_all_ones_p4(self, ones2x2):
        assert grid_max(ones2x2, 4.0, K64).value == pytest.approx(2**1.5, abs=DOCUMENTED_SLACK_K64)

    def test_swap_at_p1(self, swap):
        free = grid_max(swap, 1.0, K64, EqualityConstraint.free(2))
        tied = grid_max(swap, 1.0, K64, EqualityConstraint.all_equal(2))
        assert free.value == pytest.approx(1.0, abs=DOCUMENTED_SLACK_K64)
        assert tied.value == pytest.approx(0.5, abs=DOCUMENTED_SLACK_K64)

    def test_value_matches_maximizer(self):
        A = DenseHypermatrix.from_array(np.random.default_rng(1).standard_normal((2, 2, 2)))
        result = grid_max(A, 3.0, GridSpec(resolution=16))
        assert result.maximizer.is_feasible(1e-9)
        assert abs(linear_form(A, result.maximizer)) == pytest.approx(result.value, rel=1e-12)
        assert result.evaluations > 0

    def test_agrees_with_optimizer(self):
        rng = np.random.default_rng(2)
        for p in (2.0, 3.0):
            A = DenseHypermatrix.from_array(rng.random((3, 3)))
            grid = grid_max(A, p, K64_ORTHANT).value
            ascent = maximize_pnorm(A, AscentConfig(p=p)).value
            assert grid <= ascent + 1e-9
            assert grid == pytest.approx(ascent, abs=DOCUMENTED_SLACK_K64)

    def test_lower_bound_within_slack_for_order_three(self):
        rng = np.random.default_rng(3)
        A = DenseHypermatrix.from_array(rng.random((2, 2, 2)))
        spec = GridSpec(resolution=16, orthant=True)
        grid = grid_max(A, 2.5, spec)
        ascent = maximize_pnorm(A, AscentConfig(p=2.5)).value
        assert grid.value <= ascent + 1e-9
        assert ascent - grid.value <= grid.slack

    def test_refine_reaches_optimizer(self):
        rng = np.random.default_rng(4)
        A = DenseHypermatrix.from_array(rng.random((2, 3, 2)))
        refined = grid_max(A, 3.0, GridSpec(resolution=8, orthant=True, refine=True))
        assert refined.value == pytest.approx(maximize_pnorm(A, AscentConfig(p=3.0)).value, abs=1e-6)

    def test_gridding_every_block(self, ones2x2):
        result = grid_max(ones2x2, 2.0, GridSpec(resolution=8, exact_last_block=False))
        assert result.value == pytest.approx(2.0, abs=1e-12)

    def test_symmetric_nonnegative_constraint_costs_nothing(self):
        rng = np.random.default_rng(5)
        for p in (2.0, 3.0):
            A = random_symmetric(3, 2, rng)
            free = grid_max(A, p, K64_ORTHANT)
            tied = grid_max(A, p, K64_ORTHANT, EqualityConstraint.all_equal(2))
            assert abs(free.value - tied.value) <= 2 * DOCUMENTED_SLACK_K64

    def test_sign_flip_keeps_the_norm(self):
        rng = np.random.default_rng(6)
        A = random_symmetric(3, 2, rng)
        B = sign_transform(A, 1, 2, random_signs(3, rng))
        spec = GridSpec(resolution=32)
        assert abs(grid_max(A, 2.0, spec).value - grid_max(B, 2.0, spec).value) <= 2 * DOCUMENTED_SLACK_K64

    def test_cap_refuses(self, ones2x2x2):
        with pytest.raises(SizeCapError):
            grid_max(ones2x2x2, 2.0, GridSpec(resolution=64, exact_last_block=False, cap=10_000))

    def test_rejects_p_below_one(self, ones2x2):
        with pytest.raises(InputError):
            grid_max(ones2x2, 0.5)

    def test_same_result_for_any_thread_count(self, monkeypatch):
        A = DenseHypermatrix.from_array(np.random.default_rng(7).standard_normal((2, 2, 2)))
        spec = GridSpec(resolution=12)
        monkeypatch.setenv("HYPERNORM_THREADS", "1")
        reset_settings()
        serial = grid_max(A, 3.0, spec)
        monkeypatch.setenv("HYPERNORM_THREADS", "4")
        reset_settings()
        parallel = grid_max(A, 3.0, spec)
        assert serial.value == parallel.value
        for u, v in zip(serial.maximizer.vectors, parallel.maximizer.vectors, strict=True):
            np.testing.assert_array_equal(u, v)

    def test_slack_formula(self, ones2x2):
        assert grid_slack(ones2x2, GridSpec(resolution=64)) == pytest.approx(1 * 2 / 64 * 4.0)
        assert grid_slack(ones2x2, GridSpec(resolution=64, exact_last_block=False)) == pytest.approx(2 * 2 / 64 * 4.0)


class TestExact2Norm:
    def test_identity(self):
        assert exact_2norm_2matrix(DenseHypermatrix.from_array(np.eye(4))) == pytest.approx(1.0, rel=1e-10)

    def test_diagonal(self):
        A = DenseHypermatrix.from_array(np.diag([3.0, 4.0]))
        assert exact_2norm_2matrix(A) == pytest.approx(4.0, rel=1e-10)

    def test_rank_one(self, ones2x2):
        assert exact_2norm_2matrix(ones2x2) == pytest.approx(2.0, rel=1e-10)

    def test_zero(self):
        assert exact_2norm_2matrix(DenseHypermatrix.from_array(np.zeros((3, 2)))) == 0.0

    def test_rejects_higher_order(self, ones2x2x2):
        with pytest.raises(InputError):
            exact_2norm_2matrix(ones2x2x2)

    def test_matches_singular_value(self):
        rng = np.random.default_rng(8)
        for _ in range(10):
            M = rng.standard_normal((4, 3))
            A = DenseHypermatrix.from_array(M)
            assert exact_2norm_2matrix(A) == pytest.approx(np.linalg.norm(M, 2), rel=1e-10)

    def test_agrees_with_ascent(self):
        rng = np.random.default_rng(9)
        for _ in range(20):
            n = int(rng.integers(1, 7))
            M = rng.standard_normal((n, n)) if rng.random() < 0.5 else rng.random((n, n))
            A = DenseHypermatrix.from_array(M)
            assert maximize_pnorm(A, AscentConfig(p=2.0)).value == pytest.approx(exact_2norm_2matrix(A), abs=1e-6)


class TestFindCounterexample:
    def test_rejects_p2(self):
        with pytest.raises(InputError):
            find_counterexample(2.0, 10, 2, 0)

    def test_swap_matrix_at_p1(self):
        witness = find_counterexample(1.0, 10, 2, 0)
        assert witness is not None
        assert witness.trial == 0
        np.testing.assert_array_equal(witness.matrix.array, [[0.0, 1.0], [1.0, 0.0]])
        assert witness.unconstrained_value == pytest.approx(1.0, abs=DOCUMENTED_SLACK_K64)
        assert witness.constrained_value == pytest.approx(0.5, abs=DOCUMENTED_SLACK_K64)
        assert witness.gap == pytest.approx(0.5, abs=2 * DOCUMENTED_SLACK_K64)

    def test_finds_a_witness_below_two(self):
        witness = find_counterexample(1.5, 50, 2, 3)
        assert witness is not None
        assert witness.gap > COUNTEREXAMPLE_GAP
        np.testing.assert_array_equal(witness.constrained_tuple.vectors[0], witness.constrained_tuple.vectors[1])

    def test_swap_gap_at_p_one_and_a_half(self):
        # max 2 x_1 x_2 over |x|_1.5 = 1 is attained at the uniform vector
        witness = find_counterexample(1.5, 1, 2, 0)
        assert witness is not None
        assert witness.constrained_value == pytest.approx(2 * 2 ** (-4 / 3), abs=1e-6)
        assert witness.unconstrained_value == pytest.approx(1.0, abs=1e-6)

    def test_rejects_small_n(self):
        with pytest.raises(InputError):
            find_counterexample(1.0, 1, 1, 0)

    @pytest.mark.parametrize(
        ("p", "n", "trial", "gap"),
        [(3.0, 2, 4, 0.0449), (4.0, 2, 4, 0.1306), (3.0, 3, 6, 0.2223)],
    )
    def test_signed_search_above_two(self, p, n, trial, gap):
        witness = find_counterexample(p, 30, n, 0)
        assert witness is not None
        assert witness.trial == trial
        assert witness.gap > COUNTEREXAMPLE_GAP
        assert witness.gap == pytest.approx(gap, abs=1e-3)
        assert not witness.matrix.nonnegative
        np.testing.assert_array_equal(witness.matrix.array, _signed_draw(0, n, trial))

    def test_random_search_below_two(self, monkeypatch):
        builder = oracle._counterexample_candidate

        def without_swap(trial, rng, p, n):
            # the identity attains its norm at x = y, so trial 0 never yields a witness
            if trial == 0:
                return DenseHypermatrix.from_array(np.eye(n))
            return builder(trial, rng, p, n)

        monkeypatch.setattr(oracle, "_counterexample_candidate", without_swap)
        witness = find_counterexample(1.5, 30, 2, 0)
        assert witness is not None
        assert witness.trial == 1
        assert witness.gap > COUNTEREXAMPLE_GAP
        assert witness.gap == pytest.approx(0.0055, abs=1e-3)
        assert witness.matrix.nonnegative
        np.testing.assert_array_equal(witness.matrix.array, _nonneg_draw(0, 2, witness.trial))


def _signed_draw(seed: int, n: int, trial: int) -> np.ndarray:
    """The symmetric candidate a seeded miner builds at a given trial for p > 2."""
    rng = np.random.default_rng(seed)
    for _ in range(trial + 1):
        raw = rng.standard_normal((n, n))
    return (raw + raw.T) / 2.0


def _nonneg_draw(seed: int, n: int, trial: int) -> np.ndarray:
    """The candidate for p < 2, where trial 0 draws nothing."""
    rng = np.random.default_rng(seed)
    for _ in range(trial):
        raw = rng.random((n, n))
    return (raw + raw.T) / 2.0
