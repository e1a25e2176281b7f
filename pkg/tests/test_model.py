import numpy as np
import pytest

from conpart import (
    ConeSpec,
    ConicProblem,
    PrimalDualPair,
    aggregate_witnesses,
    dual_objective,
    primal_objective,
    residuals,
)
from conftest import build_trivial_lp


def test_problem_validation():
    with pytest.raises(ValueError):
        ConicProblem(
            [ConeSpec.orthant(2)], [np.ones((3, 1))], [np.zeros(2)], np.zeros(1)
        )
    with pytest.raises(ValueError):
        ConicProblem([ConeSpec.orthant(2)], [np.ones((2, 1))], [np.zeros(3)], np.zeros(1))


def test_stacked_split_roundtrip():
    p = ConicProblem(
        [ConeSpec.orthant(2), ConeSpec.lorentz(3)],
        [np.ones((2, 2)), np.zeros((3, 2))],
        [np.zeros(2), np.ones(3)],
        np.zeros(2),
    )
    A, b = p.stacked()
    assert A.shape == (5, 2) and b.shape == (5,)
    parts = p.split(np.arange(5.0))
    np.testing.assert_allclose(parts[0], [0.0, 1.0])
    np.testing.assert_allclose(parts[1], [2.0, 3.0, 4.0])
    with pytest.raises(ValueError):
        p.split(np.zeros(4))


def test_homogeneous_flag():
    assert build_trivial_lp().homogeneous() is False
    p = ConicProblem(
        [ConeSpec.orthant(1)], [np.ones((1, 1))], [np.zeros(1)], np.zeros(1)
    )
    assert p.homogeneous() is True


def test_objectives_and_residuals_on_solved_lp():
    p = build_trivial_lp()
    pair = PrimalDualPair.create(p, [1.0], [[1.0]])
    assert primal_objective(p, pair.x) == pytest.approx(1.0)
    assert dual_objective(p, pair.y_blocks) == pytest.approx(1.0)
    rep = residuals(p, pair)
    assert rep.duality_gap == pytest.approx(0.0)
    assert rep.dual_equality_residual == pytest.approx(0.0)
    assert rep.is_solution(1e-9)


def test_residuals_flag_non_solution():
    p = build_trivial_lp()
    pair = PrimalDualPair.create(p, [2.0], [[1.0]])  # feasible but slack.y != 0
    rep = residuals(p, pair)
    assert rep.complementarity_gaps[0] == pytest.approx(1.0)
    assert not rep.is_solution(1e-6)


def test_pair_create_validation():
    p = build_trivial_lp()
    with pytest.raises(ValueError):
        PrimalDualPair.create(p, [1.0, 2.0], [[1.0]])
    with pytest.raises(ValueError):
        PrimalDualPair.create(p, [1.0], [[1.0, 2.0]])


def test_aggregate_witnesses_averages():
    # min 0 s.t. x >= 0, 2 - x >= 0: every x in [0, 2] optimal, dual zero
    p = ConicProblem(
        [ConeSpec.orthant(1), ConeSpec.orthant(1)],
        [np.array([[1.0]]), np.array([[-1.0]])],
        [np.array([0.0]), np.array([-2.0])],
        np.zeros(1),
    )
    zero_dual = [np.zeros(1), np.zeros(1)]
    pair = aggregate_witnesses(
        p, [np.array([0.0]), np.array([2.0])], [zero_dual, zero_dual]
    )
    assert pair.x[0] == pytest.approx(1.0)
    # the average exposes positive slack on both blocks simultaneously
    assert all(s[0] > 0.9 for s in pair.s_blocks)


def test_aggregate_witnesses_rejects_bad_input():
    p = build_trivial_lp()
    with pytest.raises(ValueError):
        aggregate_witnesses(p, [], [])
    with pytest.raises(ValueError):
        # infeasible primal witness
        aggregate_witnesses(p, [np.array([0.0])], [[np.array([1.0])]])
    with pytest.raises(ValueError):
        # dual witness violating the equality constraint
        aggregate_witnesses(p, [np.array([1.0])], [[np.array([2.0])]])
