"""Dual lineality-space route to the six-partition of homogeneous
all-orthant feasibility problems.

For b = 0, c = 0 and orthant blocks the dual image cone A^T K+ is the
finitely generated (hence closed) cone spanned by the rows of A, and the
membership of a block in B, N, B0 or N0 reduces to linear-programming
tests against the lineality space of that cone.  This gives a second,
independent computation of the six-partition that the support-problem
route can be checked against.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog

from .cones import ConeKind
from .model import ConicProblem
from .partition import FourPartition, SixPartition

_RANK_TOL = 1e-9


class UnsupportedConeError(ValueError):
    """The dual characterization is only implemented for orthant blocks."""


def _in_cone(generators: np.ndarray, v: np.ndarray) -> bool:
    """Feasibility LP:  exists lambda >= 0 with generators^T lambda = v."""
    res = linprog(
        c=np.zeros(generators.shape[0]),
        A_eq=generators.T,
        b_eq=v,
        bounds=(0, None),
        method="highs",
    )
    if res.status not in (0, 2):
        raise RuntimeError(f"lineality feasibility LP failed: {res.message}")
    return res.status == 0


@dataclass
class GeneratedCone:
    """Finitely generated cone with its lineality space.

    ``generators`` are stored as rows; ``lineality_basis`` is an orthonormal
    basis (rows) of the largest linear subspace contained in the cone.
    """

    generators: np.ndarray
    lineality_basis: np.ndarray = field(init=False)

    def __post_init__(self):
        self.generators = np.atleast_2d(np.asarray(self.generators, dtype=float))
        self.lineality_basis = lineality(self)

    def contains(self, v: np.ndarray) -> bool:
        return _in_cone(self.generators, np.asarray(v, dtype=float).ravel())


def lineality(cone: GeneratedCone) -> np.ndarray:
    """Orthonormal basis (rows) of { v : v in cone and -v in cone }.

    A generator g belongs to the lineality space exactly when -g is again a
    nonnegative combination of generators; the space is spanned by the
    generators that pass this feasibility test.
    """
    G = np.atleast_2d(np.asarray(cone.generators, dtype=float))
    if G.shape[0] == 0:
        raise ValueError("generator list must be nonempty")
    passing = [g for g in G if np.linalg.norm(g) <= _RANK_TOL or _in_cone(G, -g)]
    if not passing:
        return np.zeros((0, G.shape[1]))
    M = np.vstack(passing)
    _, sv, Vt = np.linalg.svd(M, full_matrices=False)
    rank = int(np.sum(sv > _RANK_TOL * max(1.0, sv[0])))
    basis = Vt[:rank]
    # invariant: every basis direction must itself lie in the cone both ways
    for v in basis:
        if not (_in_cone(G, v) and _in_cone(G, -v)):
            raise RuntimeError("lineality basis vector fails its cone certificates")
    return basis


def _require_homogeneous_orthant(problem: ConicProblem) -> None:
    if not problem.homogeneous():
        raise UnsupportedConeError(
            "dual characterization requires b = 0 and c = 0"
        )
    for cone in problem.blocks:
        if cone.kind is ConeKind.PSD or (
            cone.kind is ConeKind.LORENTZ and cone.dim >= 2
        ):
            raise UnsupportedConeError(
                "dual characterization is implemented for orthant blocks only"
            )


def image_cone(problem: ConicProblem) -> GeneratedCone:
    """Cone A^T K+ generated by the rows of A (orthant polars are generated
    by unit vectors, so the block images contribute exactly the rows)."""
    _require_homogeneous_orthant(problem)
    A_st, _ = problem.stacked()
    return GeneratedCone(A_st)


def _complement_projector(basis: np.ndarray, n: int) -> np.ndarray:
    if basis.shape[0] == 0:
        return np.eye(n)
    return np.eye(n) - basis.T @ basis


def _meets_lineality(A_j: np.ndarray, proj: np.ndarray, strict: bool) -> bool:
    """Does A_j^T lambda lie in the lineality space for some admissible
    lambda: lambda >= 1 componentwise (strict=True, encoding the relative
    interior of the image after scaling) or lambda >= 0 with sum 1
    (strict=False, encoding a nonzero multiplier)?"""
    m = A_j.shape[0]
    A_eq = proj @ A_j.T
    b_eq = np.zeros(A_eq.shape[0])
    if strict:
        bounds = (1, None)
        res = linprog(np.zeros(m), A_eq=A_eq, b_eq=b_eq, bounds=bounds, method="highs")
    else:
        A_eq = np.vstack([A_eq, np.ones((1, m))])
        b_eq = np.concatenate([b_eq, [1.0]])
        res = linprog(np.zeros(m), A_eq=A_eq, b_eq=b_eq, bounds=(0, None), method="highs")
    if res.status not in (0, 2):
        raise RuntimeError(f"membership LP failed: {res.message}")
    return res.status == 0


def classify_six_dual(problem: ConicProblem) -> SixPartition:
    """Six-partition from the lineality-space membership tests.

    j is in B when no nonzero block multiplier maps into the lineality
    space, and in N when a strictly positive one does.  For polyhedral data
    the image cone is closed, so the coarse (B, N) and fine (B0, N0) tests
    use the same lineality space and coincide.
    """
    _require_homogeneous_orthant(problem)
    cone = image_cone(problem)
    proj = _complement_projector(cone.lineality_basis, problem.n)
    B, N = set(), set()
    for j, A_j in enumerate(problem.A_blocks):
        if not _meets_lineality(A_j, proj, strict=False):
            B.add(j)
        if _meets_lineality(A_j, proj, strict=True):
            N.add(j)
    J = frozenset(range(problem.r))
    B, N = frozenset(B), frozenset(N)
    return SixPartition(
        B=B,
        N=N,
        Bprime=frozenset(),
        Nprime=frozenset(),
        O=B & N,
        C=J - B - N,
        b0=B,
        n0=N,
    )


def check_r0_inclusion(problem: ConicProblem, four: FourPartition) -> bool:
    """Verify that every strictly-complementarity-capable block index lies
    in the set where the image cone's lineality intersections with and
    without closure agree.  Closed (polyhedral) image cones make the two
    intersections identical, so the candidate set is all of J and the check
    reduces to a consistency smoke test; it is kept so a nonpolyhedral
    extension inherits it.
    """
    _require_homogeneous_orthant(problem)
    cone = image_cone(problem)
    closed_basis = cone.lineality_basis  # closure of a polyhedral cone is itself
    same = closed_basis.shape == cone.lineality_basis.shape and np.allclose(
        closed_basis, cone.lineality_basis
    )
    r_tilde = frozenset(range(problem.r)) if same else frozenset()
    return four.r0 <= r_tilde
