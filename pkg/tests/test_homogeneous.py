import numpy as np
import pytest

from conpart import (
    ConeSpec,
    ConicProblem,
    GeneratedCone,
    UnsupportedConeError,
    check_r0_inclusion,
    classify,
    classify_six_dual,
    image_cone,
    lineality,
)


def _orthant_problem(A_blocks):
    blocks = [ConeSpec.orthant(A.shape[0]) for A in A_blocks]
    n = A_blocks[0].shape[1]
    return ConicProblem(
        blocks, A_blocks, [np.zeros(A.shape[0]) for A in A_blocks], np.zeros(n)
    )


def test_generated_cone_contains():
    cone = GeneratedCone(np.array([[1.0, 0.0], [0.0, 1.0]]))
    assert cone.contains(np.array([2.0, 3.0]))
    assert not cone.contains(np.array([-1.0, 0.0]))


def test_lineality_halfplane():
    # generators x, -x, y span a half-plane: lineality is the x-axis
    cone = GeneratedCone(np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0]]))
    basis = lineality(cone)
    assert basis.shape == (1, 2)
    assert abs(basis[0][0]) == pytest.approx(1.0)
    assert basis[0][1] == pytest.approx(0.0, abs=1e-9)


def test_lineality_full_space_and_trivial():
    full = GeneratedCone(np.array([[1.0], [-1.0]]))
    assert lineality(full).shape == (1, 1)
    pointed = GeneratedCone(np.array([[1.0, 0.0], [0.0, 1.0]]))
    assert lineality(pointed).shape == (0, 2)


def test_image_cone_stacks_rows():
    p = _orthant_problem([np.array([[1.0, 0.0]]), np.array([[0.0, 1.0]])])
    cone = image_cone(p)
    assert cone.generators.shape == (2, 2)
    assert cone.contains(np.array([1.0, 1.0]))


def test_requires_homogeneous_orthant():
    p = ConicProblem(
        [ConeSpec.lorentz(3)], [np.zeros((3, 2))], [np.zeros(3)], np.zeros(2)
    )
    with pytest.raises(UnsupportedConeError):
        classify_six_dual(p)
    bad_b = ConicProblem(
        [ConeSpec.orthant(1)], [np.ones((1, 1))], [np.ones(1)], np.zeros(1)
    )
    with pytest.raises(UnsupportedConeError):
        classify_six_dual(bad_b)


def test_six_dual_free_variable():
    # single row x1 >= 0 with a second free variable: lineality forces
    # nothing, block can be interior => B
    p = _orthant_problem([np.array([[1.0, 0.0]])])
    six = classify_six_dual(p)
    assert six.B == {0}
    assert six.C == set()


def test_six_dual_opposing_rows():
    # rows x and -x: both slacks are forced to zero and the duals can be
    # interior (y1 = y2 balances), so both blocks land in N
    p = _orthant_problem([np.array([[1.0]]), np.array([[-1.0]])])
    six = classify_six_dual(p)
    assert six.N == {0, 1}


def test_six_dual_matches_support_route():
    p = _orthant_problem(
        [np.array([[1.0, 1.0], [1.0, -1.0]]), np.array([[-1.0, 0.0]])]
    )
    six = classify_six_dual(p)
    rep = classify(p)
    assert (six.B, six.N, six.O, six.C) == (
        rep.six.B,
        rep.six.N,
        rep.six.O,
        rep.six.C,
    )
    assert check_r0_inclusion(p, rep.four)


def test_six_dual_is_disjoint_cover():
    rng = np.random.default_rng(2)
    for _ in range(20):
        m = int(rng.integers(1, 4))
        A_blocks = [rng.integers(-2, 3, size=(int(rng.integers(1, 3)), 3)).astype(float)
                    for _ in range(m)]
        p = _orthant_problem(A_blocks)
        six = classify_six_dual(p)
        sets = [six.B, six.N, six.Bprime, six.Nprime, six.O, six.C]
        assert sum(len(s) for s in sets) == p.r
        assert frozenset().union(*sets) == frozenset(range(p.r))
