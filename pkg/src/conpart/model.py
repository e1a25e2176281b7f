"""Problem and solution data model for multifold conic programs.

A problem is  min c.x  s.t.  A^j x - b^j in K_j  for blocks j = 0..r-1,
with the dual  max sum_j b^j.y^j  s.t.  sum_j (A^j)^T y^j = c,  y^j in K_j+.
PSD blocks are stored in svec coordinates throughout, so every inner
product below is a plain dot product.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .cones import ConeSpec, classify_membership


@dataclass
class ConicProblem:
    blocks: list[ConeSpec]
    A_blocks: list[np.ndarray]
    b_blocks: list[np.ndarray]
    c: np.ndarray
    name: str = ""

    def __post_init__(self):
        self.blocks = list(self.blocks)
        self.c = np.asarray(self.c, dtype=float).ravel()
        self.A_blocks = [np.atleast_2d(np.asarray(A, dtype=float)) for A in self.A_blocks]
        self.b_blocks = [np.asarray(b, dtype=float).ravel() for b in self.b_blocks]
        if not (len(self.blocks) == len(self.A_blocks) == len(self.b_blocks)):
            raise ValueError("blocks, A_blocks and b_blocks must have equal length")
        for cone, A, b in zip(self.blocks, self.A_blocks, self.b_blocks):
            if A.shape != (cone.dim, self.n):
                raise ValueError(
                    f"A block of shape {A.shape} does not match cone dim "
                    f"{cone.dim} and n={self.n}"
                )
            if b.size != cone.dim:
                raise ValueError("b block does not match cone dimension")

    @property
    def n(self) -> int:
        return self.c.size

    @property
    def r(self) -> int:
        return len(self.blocks)

    @property
    def total_dim(self) -> int:
        return sum(cone.dim for cone in self.blocks)

    def stacked(self) -> tuple[np.ndarray, np.ndarray]:
        """Row-stacked (A, b) over all blocks."""
        return np.vstack(self.A_blocks), np.concatenate(self.b_blocks)

    def split(self, v: np.ndarray) -> list[np.ndarray]:
        """Split a stacked row-space vector into per-block pieces."""
        v = np.asarray(v, dtype=float).ravel()
        if v.size != self.total_dim:
            raise ValueError("stacked vector has wrong dimension")
        out, at = [], 0
        for cone in self.blocks:
            out.append(v[at : at + cone.dim])
            at += cone.dim
        return out

    def slacks(self, x: np.ndarray) -> list[np.ndarray]:
        x = np.asarray(x, dtype=float).ravel()
        return [A @ x - b for A, b in zip(self.A_blocks, self.b_blocks)]

    def homogeneous(self) -> bool:
        return bool(
            np.all(self.c == 0.0)
            and all(np.all(b == 0.0) for b in self.b_blocks)
        )


@dataclass
class PrimalDualPair:
    x: np.ndarray
    y_blocks: list[np.ndarray]
    s_blocks: list[np.ndarray] = field(default_factory=list)

    @staticmethod
    def create(problem: ConicProblem, x, y_blocks) -> "PrimalDualPair":
        x = np.asarray(x, dtype=float).ravel()
        ys = [np.asarray(y, dtype=float).ravel() for y in y_blocks]
        if x.size != problem.n or len(ys) != problem.r:
            raise ValueError("pair dimensions do not match the problem")
        for cone, y in zip(problem.blocks, ys):
            if y.size != cone.dim:
                raise ValueError("dual block dimension mismatch")
        return PrimalDualPair(x, ys, problem.slacks(x))


def primal_objective(problem: ConicProblem, x) -> float:
    x = np.asarray(x, dtype=float).ravel()
    if x.size != problem.n:
        raise ValueError("x has wrong dimension")
    return float(problem.c @ x)


def dual_objective(problem: ConicProblem, y_blocks) -> float:
    if len(y_blocks) != problem.r:
        raise ValueError("wrong number of dual blocks")
    total = 0.0
    for b, y in zip(problem.b_blocks, y_blocks):
        y = np.asarray(y, dtype=float).ravel()
        if y.size != b.size:
            raise ValueError("dual block dimension mismatch")
        total += float(b @ y)
    return total


@dataclass
class ResidualReport:
    primal_cone_margins: list[float]
    dual_cone_margins: list[float]
    dual_equality_residual: float
    complementarity_gaps: list[float]
    duality_gap: float
    scale: float  # 1 + largest vector norm seen, used by is_solution

    def is_solution(self, tol: float) -> bool:
        t = tol * self.scale
        return bool(
            all(m >= -t for m in self.primal_cone_margins)
            and all(m >= -t for m in self.dual_cone_margins)
            and self.dual_equality_residual <= t
            and all(g <= t for g in self.complementarity_gaps)
        )


def residuals(problem: ConicProblem, pair: PrimalDualPair) -> ResidualReport:
    """Evaluate the optimality system residuals for a candidate pair."""
    s_blocks = problem.slacks(pair.x)
    if len(pair.y_blocks) != problem.r:
        raise ValueError("wrong number of dual blocks")
    pm, dm, gaps = [], [], []
    scale = 1.0 + float(np.linalg.norm(pair.x))
    aty = np.zeros(problem.n)
    for cone, A, s, y in zip(
        problem.blocks, problem.A_blocks, s_blocks, pair.y_blocks
    ):
        y = np.asarray(y, dtype=float).ravel()
        if y.size != cone.dim:
            raise ValueError("dual block dimension mismatch")
        pm.append(classify_membership(cone, s).margin)
        dm.append(classify_membership(cone, y).margin)
        gaps.append(abs(float(y @ s)))
        aty += A.T @ y
        scale = max(scale, 1.0 + float(np.linalg.norm(s)), 1.0 + float(np.linalg.norm(y)))
    eq_res = float(np.linalg.norm(aty - problem.c))
    gap = primal_objective(problem, pair.x) - dual_objective(problem, pair.y_blocks)
    return ResidualReport(pm, dm, eq_res, gaps, gap, scale)


def aggregate_witnesses(
    problem: ConicProblem,
    primal_witnesses: list[np.ndarray],
    dual_witnesses: list[list[np.ndarray]],
    tol: float = 1e-6,
) -> PrimalDualPair:
    """Uniform average of solution witnesses.

    By convexity of the solution set the average is again a solution, and
    averaging per-block witnesses yields a pair of maximal complementarity.
    Every input witness must pass the residual check at ``tol``.
    """
    if not primal_witnesses or not dual_witnesses:
        raise ValueError("witness lists must be nonempty")
    for x in primal_witnesses:
        for cone, s in zip(problem.blocks, problem.slacks(x)):
            band = tol * (1.0 + float(np.linalg.norm(s)))
            if classify_membership(cone, s).margin < -band:
                raise ValueError("primal witness is not feasible")
    for y in dual_witnesses:
        rep = residuals(problem, PrimalDualPair.create(problem, primal_witnesses[0], y))
        t = tol * rep.scale
        if rep.dual_equality_residual > t or any(m < -t for m in rep.dual_cone_margins):
            raise ValueError("dual witness is not feasible")
    x_hat = np.mean([np.asarray(x, dtype=float).ravel() for x in primal_witnesses], axis=0)
    y_hat = []
    for j in range(problem.r):
        y_hat.append(
            np.mean([np.asarray(y[j], dtype=float).ravel() for y in dual_witnesses], axis=0)
        )
    pair = PrimalDualPair.create(problem, x_hat, y_hat)
    rep = residuals(problem, pair)
    if not rep.is_solution(10 * tol):
        raise ValueError("aggregated pair fails the residual check; some witness was not a solution")
    return pair
