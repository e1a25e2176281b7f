"""Exact-rational ground truth for the (B, N) partition of small LPs.

For an LP  min c.x  s.t.  Ax >= b  with integer data and a bounded feasible
polytope, the optimal face is the convex hull of the optimal vertices, so

    B = { i : some optimal vertex has slack_i > 0 }

is computed exactly by enumerating all n-subsets of rows with Fraction
arithmetic.  Strict complementarity always holds for LPs, hence N is the
complement of B.  As an independent cross-check, dual basic optimal
solutions (square row subsets S with A_S^T y_S = c, y_S >= 0,
b_S . y_S = v*) are enumerated too; the union of their supports must land
inside N.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

import numpy as np

from conpart.cones import ConeSpec
from conpart.model import ConicProblem


def _frac_matrix(M) -> list[list[Fraction]]:
    return [[Fraction(int(v)) for v in row] for row in np.asarray(M)]


def _frac_vector(v) -> list[Fraction]:
    return [Fraction(int(x)) for x in np.asarray(v).ravel()]


def _solve_square(M: list[list[Fraction]], rhs: list[Fraction]):
    """Exact Gaussian elimination; returns None when M is singular."""
    n = len(rhs)
    aug = [row[:] + [rhs[i]] for i, row in enumerate(M)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            return None
        aug[col], aug[pivot] = aug[pivot], aug[col]
        pv = aug[col][col]
        aug[col] = [v / pv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [aug[r][n] for r in range(n)]


def _dot(u, v) -> Fraction:
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def lp_partition(A, b, c) -> tuple[set[int], set[int], set[int], Fraction]:
    """Exact (B, N) for an integer-data LP with a bounded feasible polytope.

    Returns (B, N, dual-certified subset of N, optimal value).
    """
    A = np.asarray(A)
    m, n = A.shape
    FA = _frac_matrix(A)
    Fb = _frac_vector(b)
    Fc = _frac_vector(c)

    vertices = []
    for S in combinations(range(m), n):
        x = _solve_square([FA[i] for i in S], [Fb[i] for i in S])
        if x is None:
            continue
        if all(_dot(FA[i], x) >= Fb[i] for i in range(m)):
            vertices.append(x)
    if not vertices:
        raise ValueError("feasible polytope has no vertices; generator bug")

    vstar = min(_dot(Fc, x) for x in vertices)
    B: set[int] = set()
    for x in vertices:
        if _dot(Fc, x) == vstar:
            B |= {i for i in range(m) if _dot(FA[i], x) > Fb[i]}
    N = set(range(m)) - B

    n_cert: set[int] = set()
    for S in combinations(range(m), n):
        At = [[FA[i][k] for i in S] for k in range(n)]
        y = _solve_square(At, Fc)
        if y is None or any(v < 0 for v in y):
            continue
        if _dot([Fb[i] for i in S], y) == vstar:
            n_cert |= {i for i, v in zip(S, y) if v > 0}
    return B, N, n_cert, vstar


def random_bounded_lp(rng, n_max: int = 4, m_max: int = 6):
    """Integer LP with bounded feasible polytope and planted zero-gap pair.

    The last row is minus the sum of the others, so the rows sum to zero;
    together with full column rank this kills the recession cone, making
    the feasible set a polytope.  Returns (A, b, c, problem) with the
    problem built from dimension-one orthant blocks, one per row.
    """
    n = int(rng.integers(2, n_max + 1))
    m = int(rng.integers(n + 1, m_max + 1))
    while True:
        rows = rng.integers(-3, 4, size=(m - 1, n))
        A = np.vstack([rows, -rows.sum(axis=0, keepdims=True)])
        if np.linalg.matrix_rank(A.astype(float)) == n:
            break
    x0 = rng.integers(-2, 3, size=n)
    s0 = np.zeros(m, dtype=int)
    y0 = np.zeros(m, dtype=int)
    side = rng.integers(2, size=m)
    s0[side == 0] = rng.integers(1, 4, size=int(np.sum(side == 0)))
    y0[side == 1] = rng.integers(1, 4, size=int(np.sum(side == 1)))
    b = A @ x0 - s0
    c = A.T @ y0
    problem = ConicProblem(
        [ConeSpec.orthant(1) for _ in range(m)],
        [A[i : i + 1].astype(float) for i in range(m)],
        [b[i : i + 1].astype(float) for i in range(m)],
        c.astype(float),
        "random-bounded-lp",
    )
    return A, b, c, problem
