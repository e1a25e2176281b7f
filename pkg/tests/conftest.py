import pathlib
import sys

import numpy as np
import pytest

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent))

from conpart import ConeSpec, ConicProblem, LiftKind, LiftMap
from conpart.cones import svec, sym

FIXTURES = pathlib.Path(__file__).resolve().parent.parent / "fixtures"


def build_trivial_lp() -> ConicProblem:
    """min x subject to x >= 1; optimal at x = 1 with dual y = 1."""
    return ConicProblem(
        [ConeSpec.orthant(1)],
        [np.array([[1.0]])],
        [np.array([1.0])],
        np.array([1.0]),
        "trivial-lp",
    )


def build_degenerate_sdp() -> ConicProblem:
    """Order-3 SDP whose unique primal optimum is x = 0 with dual slack of
    rank 1, so strict complementarity fails on the single block."""
    G0 = np.zeros((3, 3))
    G0[2, 2] = 1.0
    Gk = [np.zeros((3, 3)) for _ in range(4)]
    Gk[0][0, 0] = -1
    Gk[0][1, 2] = -1
    Gk[1][1, 1] = -1
    Gk[1][0, 2] = -1
    Gk[1][2, 0] = -1
    Gk[2][0, 1] = -1
    Gk[2][1, 0] = -1
    Gk[2][2, 2] = -1
    Gk[3][2, 1] = -1
    A = np.column_stack([svec(sym(g)) for g in Gk])
    b = svec(-G0)
    return ConicProblem(
        [ConeSpec.psd(3)], [A], [b], np.array([-1.0, 0.0, 0.0, 0.0]), "degenerate-sdp"
    )


_MIXED_ROWS = np.array(
    [
        [0.0, 0.0, 1.0],
        [1.0, 0.0, 0.0],
        [0.0, 1.0, 0.0],
        [0.0, 0.0, 1.0],
        [0.0, -1.0, 0.0],
        [1.0, 1.0, 0.0],
        [0.0, 1.0, 0.0],
        [0.0, 1.0, 1.0],
    ]
)


def build_mixed(refined: bool) -> ConicProblem:
    """Homogeneous mixed Lorentz/orthant instance; the refined variant
    splits the trailing orthant rows into dimension-one blocks."""
    A = _MIXED_ROWS
    if refined:
        blocks = [ConeSpec.lorentz(4)] + [ConeSpec.orthant(1)] * 4
        A_blocks = [A[:4], A[4:5], A[5:6], A[6:7], A[7:8]]
    else:
        blocks = [ConeSpec.lorentz(4), ConeSpec.orthant(1), ConeSpec.orthant(3)]
        A_blocks = [A[:4], A[4:5], A[5:8]]
    b_blocks = [np.zeros(Ab.shape[0]) for Ab in A_blocks]
    return ConicProblem(blocks, A_blocks, b_blocks, np.zeros(3), "mixed")


def build_kernel_counterexample() -> tuple[ConicProblem, LiftMap]:
    """Homogeneous two-block instance plus a lift map that is injective and
    boundary preserving but violates the kernel condition on its second
    block (kernel direction (1, -1) lies in the target cone)."""
    problem = ConicProblem(
        [ConeSpec.lorentz(3), ConeSpec.orthant(1)],
        [np.array([[0.0, 1.0], [1.0, 0.0], [0.0, 1.0]]), np.array([[1.0, 0.0]])],
        [np.zeros(3), np.zeros(1)],
        np.zeros(2),
        "kernel-counterexample",
    )
    lift = LiftMap(
        [ConeSpec.lorentz(3), ConeSpec.orthant(1)],
        [ConeSpec.lorentz(3), ConeSpec.lorentz(2)],
        [np.eye(3), np.array([[1.0], [1.0]])],
        LiftKind.GENERAL,
    )
    return problem, lift


@pytest.fixture
def trivial_lp():
    return build_trivial_lp()


@pytest.fixture
def degenerate_sdp():
    return build_degenerate_sdp()
