"""Primal-dual interior-point solves and optimal-face support problems.

The core cone LP solves are delegated to Clarabel, an interior-point method
over products of orthants, Lorentz cones and PSD cones, i.e. exactly the
cone family supported here.  This module owns the translation between the
svec-based block model and Clarabel's standard form, and the construction
of the bounded auxiliary "support problems" that probe the optimal face of
a solved problem block by block.

Optimal faces of degenerate instances often contain unbounded directions
along which numerically-feasible iterates drift, so every face probe below
carries an explicit trust-region bound on the variable norm; the bound is
generous enough not to affect the sign decisions the probes feed.

All solves are deterministic: the backend contains no randomized pivoting
and the block orderings below are fixed.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import clarabel
import numpy as np
import scipy.sparse as sp

from .cones import (
    SQRT2,
    ConeKind,
    ConeSpec,
    classify_membership,
    interior_point,
    smat,
    svec,
)
from .model import ConicProblem, PrimalDualPair, residuals

# slack factor applied to the objective-face constraint c.x <= val + slack;
# exact equality on a floating-point optimal value would be infeasible
_FACE_SLACK_FACTOR = 100.0


def _shortcut_level(opts: "SolveOptions") -> float:
    """Support values certified by the base pair above this level make the
    auxiliary solve unnecessary (the base pair is itself a witness)."""
    return 100.0 * math.sqrt(opts.tol)


class SolverError(RuntimeError):
    """A conic solve failed; carries the block index when applicable."""

    def __init__(self, message: str, block: int | None = None):
        super().__init__(message)
        self.block = block


class SolveStatus(enum.Enum):
    OPTIMAL = "optimal"
    PRIMAL_INFEASIBLE = "primal_infeasible"
    DUAL_INFEASIBLE = "dual_infeasible"
    NUMERICAL_FAILURE = "numerical_failure"


class Side(enum.Enum):
    PRIMAL = "primal"
    DUAL = "dual"


class SupportSide(enum.Enum):
    PRIMAL_INTERIOR = "primal_interior"
    DUAL_INTERIOR = "dual_interior"
    PRIMAL_NONZERO = "primal_nonzero"
    DUAL_NONZERO = "dual_nonzero"


@dataclass(frozen=True)
class SolveOptions:
    tol: float = 1e-8
    max_iters: int = 200
    step_fraction: float = 0.98

    def __post_init__(self):
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if not (0.0 < self.step_fraction < 1.0):
            raise ValueError("step_fraction must lie in (0, 1)")


@dataclass
class SolveResult:
    status: SolveStatus
    pair: PrimalDualPair | None
    optimal_value: float
    iterations: int
    final_mu: float


@dataclass
class SupportValue:
    index: int
    side: SupportSide
    value: float
    witness: PrimalDualPair


def _triangle_order(p: int) -> np.ndarray:
    """Permutation from row-wise to column-wise upper-triangle svec order
    (the backend stores PSD triangles column by column)."""
    iu, ju = np.triu_indices(p)
    return np.lexsort((iu, ju))


def _settings(opts: SolveOptions) -> "clarabel.DefaultSettings":
    st = clarabel.DefaultSettings()
    st.verbose = False
    st.max_iter = opts.max_iters
    st.tol_gap_abs = opts.tol
    st.tol_gap_rel = opts.tol
    # feasibility needs to be much tighter than the gap: a violation of
    # delta on a curved cone boundary admits drift of order sqrt(delta)
    # along degenerate directions, which the face probes must not see
    st.tol_feas = min(opts.tol * 1e-2, 1e-10)
    st.reduced_tol_feas = min(opts.tol, 1e-8)
    st.reduced_tol_gap_abs = math.sqrt(opts.tol)
    st.reduced_tol_gap_rel = math.sqrt(opts.tol)
    return st


_STATUS_MAP = {
    "Solved": "optimal",
    "AlmostSolved": "almost",
    "PrimalInfeasible": "primal infeasible",
    "AlmostPrimalInfeasible": "primal infeasible",
    "DualInfeasible": "dual infeasible",
    "AlmostDualInfeasible": "dual infeasible",
}


def _conelp(f, cone_rows, opts: SolveOptions, E=None, d=None):
    """Solve  min f.u  s.t.  H u - g in K per block, E u = d.

    ``cone_rows`` is a list of (ConeSpec, H, g).  Returns
    (status, u, z_blocks, iterations, gap) with z in svec coordinates for
    PSD blocks; status is one of "optimal", "almost", "primal infeasible",
    "dual infeasible" or "failure".
    """
    f = np.asarray(f, dtype=float).ravel()
    nv = f.size
    lin, soc, sdp = [], [], []
    for idx, (cone, H, g) in enumerate(cone_rows):
        H = np.atleast_2d(np.asarray(H, dtype=float))
        g = np.asarray(g, dtype=float).ravel()
        if cone.kind is ConeKind.PSD:
            sdp.append((idx, cone, H, g))
        elif cone.kind is ConeKind.LORENTZ and cone.dim >= 2:
            soc.append((idx, cone, H, g))
        else:
            lin.append((idx, cone, H, g))

    A_parts, b_parts, cones = [], [], []
    layout = []  # (block idx, triangle permutation or None, row offset, length)
    at = 0
    if E is not None:
        E = np.atleast_2d(np.asarray(E, dtype=float))
        A_parts.append(E)
        b_parts.append(np.asarray(d, dtype=float).ravel())
        cones.append(clarabel.ZeroConeT(E.shape[0]))
        at += E.shape[0]
    for idx, cone, H, g in lin:
        A_parts.append(-H)
        b_parts.append(-g)
        cones.append(clarabel.NonnegativeConeT(cone.dim))
        layout.append((idx, None, at, cone.dim))
        at += cone.dim
    for idx, cone, H, g in soc:
        A_parts.append(-H)
        b_parts.append(-g)
        cones.append(clarabel.SecondOrderConeT(cone.dim))
        layout.append((idx, None, at, cone.dim))
        at += cone.dim
    for idx, cone, H, g in sdp:
        order = _triangle_order(cone.order)
        A_parts.append(-H[order])
        b_parts.append(-g[order])
        cones.append(clarabel.PSDTriangleConeT(cone.order))
        layout.append((idx, order, at, cone.dim))
        at += cone.dim

    A = sp.csc_matrix(np.vstack(A_parts))
    b = np.concatenate(b_parts)
    P = sp.csc_matrix((nv, nv))
    try:
        sol = clarabel.DefaultSolver(P, f, A, b, cones, _settings(opts)).solve()
    except Exception as exc:  # the backend raises plain BaseException subclasses
        raise SolverError(f"cone LP solve failed: {exc}") from exc

    status = _STATUS_MAP.get(str(sol.status), "failure")
    u = None
    z_blocks: list[np.ndarray | None] = [None] * len(cone_rows)
    if status in ("optimal", "almost"):
        u = np.asarray(sol.x, dtype=float).ravel()
        z = np.asarray(sol.z, dtype=float).ravel()
        for idx, order, off, length in layout:
            piece = z[off : off + length]
            if order is not None:
                mine = np.empty(length)
                mine[order] = piece
                piece = mine
            z_blocks[idx] = piece
    gap = abs(float(sol.obj_val - sol.obj_val_dual)) if u is not None else np.inf
    return status, u, z_blocks, sol.iterations, gap


def solve(problem: ConicProblem, opts: SolveOptions | None = None) -> SolveResult:
    """Solve the primal-dual pair and return an approximate solution of the
    optimality system.

    The interior-point iterates approach the central path's limit, which
    lies in the relative interior of the optimal face; the returned pair is
    therefore close to maximal complementarity, but partition decisions
    never rely on that (see :mod:`conpart.partition`).
    """
    opts = opts or SolveOptions()
    rows = list(zip(problem.blocks, problem.A_blocks, problem.b_blocks))
    status, u, z_blocks, iters, gap = _conelp(problem.c, rows, opts)
    if status == "optimal" or (status == "almost" and u is not None):
        pair = PrimalDualPair.create(problem, u, z_blocks)
        ok = residuals(problem, pair).is_solution(10 * max(opts.tol, 1e-9))
        if status == "optimal" or ok:
            value = float(problem.c @ u)
            return SolveResult(SolveStatus.OPTIMAL, pair, value, iters, gap)
    if status == "primal infeasible":
        return SolveResult(SolveStatus.PRIMAL_INFEASIBLE, None, np.nan, iters, gap)
    if status == "dual infeasible":
        return SolveResult(SolveStatus.DUAL_INFEASIBLE, None, np.nan, iters, gap)
    return SolveResult(SolveStatus.NUMERICAL_FAILURE, None, np.nan, iters, gap)


def _face_slack(optimal_value: float, opts: SolveOptions) -> float:
    return _FACE_SLACK_FACTOR * opts.tol * (1.0 + abs(optimal_value))


def _unit(nv: int, k: int) -> np.ndarray:
    e = np.zeros(nv)
    e[k] = 1.0
    return e


def _dual_offsets(problem: ConicProblem) -> list[int]:
    offs, at = [], 0
    for cone in problem.blocks:
        offs.append(at)
        at += cone.dim
    return offs


def _solve_support(problem, f, cone_rows, opts, E=None, d=None, block=None):
    status, u, _, _, _ = _conelp(f, cone_rows, opts, E=E, d=d)
    if status not in ("optimal", "almost") or u is None:
        raise SolverError(
            f"support problem did not reach optimality (status {status})", block=block
        )
    return u


def _norm_bound_row(nv: int, span: slice, radius: float):
    """Cone row enforcing ||u[span]|| <= radius via a Lorentz constraint."""
    k = span.stop - span.start
    H = np.zeros((k + 1, nv))
    H[1:, span] = np.eye(k)
    g = np.zeros(k + 1)
    g[0] = -radius
    return (ConeSpec.lorentz(k + 1), H, g)


def _pair_radius(base_pair: PrimalDualPair, side: "Side") -> float:
    if side is Side.PRIMAL:
        ref = float(np.linalg.norm(base_pair.x))
    else:
        ref = float(np.linalg.norm(np.concatenate(base_pair.y_blocks)))
    return 4.0 * (1.0 + ref)


def support_interior(
    problem: ConicProblem,
    optimal_value: float,
    j: int,
    side: Side,
    opts: SolveOptions | None = None,
    base_pair: PrimalDualPair | None = None,
) -> SupportValue:
    """Probe how far block j can move into the cone interior over the
    optimal face.

    Solves  max t  with the block-j slack (primal side) or multiplier
    (dual side) pushed by t times the canonical interior unit, subject to
    optimality of the underlying problem; t is capped at 1 because only the
    sign of the supremum matters.  A positive value certifies membership of
    j in B (primal) or N (dual).
    """
    opts = opts or SolveOptions()
    if base_pair is None:
        base = solve(problem, opts)
        if base.status is not SolveStatus.OPTIMAL:
            raise SolverError("reference solve failed", block=j)
        base_pair = base.pair
    slack = _face_slack(optimal_value, opts)
    e_j = interior_point(problem.blocks[j])

    # the base pair is a solution, so its own interiority margin is a valid
    # lower bound; skip the auxiliary solve when it already decides the sign
    if side is Side.PRIMAL:
        base_margin = classify_membership(
            problem.blocks[j], problem.slacks(base_pair.x)[j]
        ).margin
    else:
        base_margin = classify_membership(
            problem.blocks[j], base_pair.y_blocks[j]
        ).margin
    if base_margin > _shortcut_level(opts):
        kind = (
            SupportSide.PRIMAL_INTERIOR
            if side is Side.PRIMAL
            else SupportSide.DUAL_INTERIOR
        )
        return SupportValue(j, kind, min(1.0, float(base_margin)), base_pair)

    if side is Side.PRIMAL:
        nv = problem.n + 1
        rows = []
        for i, (cone, A, b) in enumerate(
            zip(problem.blocks, problem.A_blocks, problem.b_blocks)
        ):
            H = np.hstack([A, np.zeros((cone.dim, 1))])
            if i == j:
                H[:, -1] = -e_j
            rows.append((cone, H, b))
        rows.append(
            (
                ConeSpec.orthant(1),
                np.concatenate([-problem.c, [0.0]])[None, :],
                np.array([-(optimal_value + slack)]),
            )
        )
        rows.append((ConeSpec.orthant(1), -_unit(nv, nv - 1)[None, :], np.array([-1.0])))
        rows.append(
            _norm_bound_row(nv, slice(0, problem.n), _pair_radius(base_pair, Side.PRIMAL))
        )
        u = _solve_support(problem, -_unit(nv, nv - 1), rows, opts, block=j)
        value = float(np.clip(u[-1], 0.0, 1.0))
        witness = PrimalDualPair.create(problem, u[: problem.n], base_pair.y_blocks)
        return SupportValue(j, SupportSide.PRIMAL_INTERIOR, value, witness)

    m = problem.total_dim
    nv = m + 1
    offs = _dual_offsets(problem)
    rows = []
    for i, cone in enumerate(problem.blocks):
        H = np.zeros((cone.dim, nv))
        H[:, offs[i] : offs[i] + cone.dim] = np.eye(cone.dim)
        if i == j:
            H[:, -1] = -e_j
        rows.append((cone, H, np.zeros(cone.dim)))
    A_st, b_st = problem.stacked()
    rows.append(
        (
            ConeSpec.orthant(1),
            np.concatenate([b_st, [0.0]])[None, :],
            np.array([optimal_value - slack]),
        )
    )
    rows.append((ConeSpec.orthant(1), -_unit(nv, nv - 1)[None, :], np.array([-1.0])))
    rows.append(_norm_bound_row(nv, slice(0, m), _pair_radius(base_pair, Side.DUAL)))
    E = np.hstack([A_st.T, np.zeros((problem.n, 1))])
    u = _solve_support(problem, -_unit(nv, nv - 1), rows, opts, E=E, d=problem.c, block=j)
    value = float(np.clip(u[-1], 0.0, 1.0))
    y_blocks = [u[offs[i] : offs[i] + cone.dim] for i, cone in enumerate(problem.blocks)]
    witness = PrimalDualPair.create(problem, base_pair.x, y_blocks)
    return SupportValue(j, SupportSide.DUAL_INTERIOR, value, witness)


def support_nonzero(
    problem: ConicProblem,
    optimal_value: float,
    j: int,
    side: Side,
    opts: SolveOptions | None = None,
    base_pair: PrimalDualPair | None = None,
) -> SupportValue:
    """Probe whether block j's slack (primal side) or multiplier (dual
    side) can be nonzero over the optimal face.

    Maximizes the pairing with the canonical interior unit, which vanishes
    exactly on the zero vector of the (self-dual) block cone.  A zero value
    on the dual side certifies j in B0; a zero value on the primal side
    certifies j in N0.  Valid because the optimality system splits into the
    product of the primal and dual optimal faces under zero duality gap.
    """
    opts = opts or SolveOptions()
    if base_pair is None:
        base = solve(problem, opts)
        if base.status is not SolveStatus.OPTIMAL:
            raise SolverError("reference solve failed", block=j)
        base_pair = base.pair
    slack = _face_slack(optimal_value, opts)
    e_j = interior_point(problem.blocks[j])

    # same shortcut as the interiority probe: the base pair's own pairing
    # with the interior unit is a valid lower bound on the supremum
    if side is Side.PRIMAL:
        base_val = float(e_j @ problem.slacks(base_pair.x)[j])
    else:
        base_val = float(e_j @ base_pair.y_blocks[j])
    if base_val > _shortcut_level(opts):
        kind = (
            SupportSide.PRIMAL_NONZERO
            if side is Side.PRIMAL
            else SupportSide.DUAL_NONZERO
        )
        return SupportValue(j, kind, min(1.0, base_val), base_pair)

    if side is Side.PRIMAL:
        nv = problem.n
        rows = list(zip(problem.blocks, problem.A_blocks, problem.b_blocks))
        rows.append(
            (
                ConeSpec.orthant(1),
                -problem.c[None, :],
                np.array([-(optimal_value + slack)]),
            )
        )
        obj_row = e_j @ problem.A_blocks[j]
        const = float(e_j @ problem.b_blocks[j])
        # cap the pairing above its value at the base point so the probe is
        # always feasible; only whether the value clears zero matters
        cap = 1.0 + max(0.0, float(obj_row @ base_pair.x) - const)
        rows.append((ConeSpec.orthant(1), -obj_row[None, :], np.array([-cap - const])))
        rows.append(
            _norm_bound_row(nv, slice(0, nv), _pair_radius(base_pair, Side.PRIMAL))
        )
        u = _solve_support(problem, -obj_row, rows, opts, block=j)
        value = float(np.clip(float(obj_row @ u) - const, 0.0, 1.0))
        witness = PrimalDualPair.create(problem, u, base_pair.y_blocks)
        return SupportValue(j, SupportSide.PRIMAL_NONZERO, value, witness)

    m = problem.total_dim
    offs = _dual_offsets(problem)
    rows = []
    for i, cone in enumerate(problem.blocks):
        H = np.zeros((cone.dim, m))
        H[:, offs[i] : offs[i] + cone.dim] = np.eye(cone.dim)
        rows.append((cone, H, np.zeros(cone.dim)))
    A_st, b_st = problem.stacked()
    rows.append(
        (ConeSpec.orthant(1), b_st[None, :], np.array([optimal_value - slack]))
    )
    obj = np.zeros(m)
    obj[offs[j] : offs[j] + problem.blocks[j].dim] = e_j
    cap = 1.0 + max(0.0, float(e_j @ base_pair.y_blocks[j]))
    rows.append((ConeSpec.orthant(1), -obj[None, :], np.array([-cap])))
    rows.append(_norm_bound_row(m, slice(0, m), _pair_radius(base_pair, Side.DUAL)))
    u = _solve_support(problem, -obj, rows, opts, E=A_st.T, d=problem.c, block=j)
    value = float(np.clip(float(obj @ u), 0.0, 1.0))
    y_blocks = [u[offs[i] : offs[i] + cone.dim] for i, cone in enumerate(problem.blocks)]
    witness = PrimalDualPair.create(problem, base_pair.x, y_blocks)
    return SupportValue(j, SupportSide.DUAL_NONZERO, value, witness)


def face_point(
    problem: ConicProblem,
    optimal_value: float,
    objective: np.ndarray,
    side: Side,
    opts: SolveOptions | None = None,
    radius: float | None = None,
) -> np.ndarray:
    """Minimize an arbitrary linear objective over the primal or dual
    optimal face; used to collect extra witnesses for rank aggregation.

    Returns x (primal side) or the stacked dual vector (dual side).  The
    objective is capped against the face's interior-point witness implicitly
    by bounding the variable through the existing cone constraints plus a
    norm-type cap on the objective value.
    """
    opts = opts or SolveOptions()
    slack = _face_slack(optimal_value, opts)
    objective = np.asarray(objective, dtype=float).ravel()
    if side is Side.PRIMAL:
        rows = list(zip(problem.blocks, problem.A_blocks, problem.b_blocks))
        rows.append(
            (
                ConeSpec.orthant(1),
                -problem.c[None, :],
                np.array([-(optimal_value + slack)]),
            )
        )
        # cap the objective so unbounded optimal faces stay solvable
        rows.append((ConeSpec.orthant(1), objective[None, :], np.array([-1.0])))
        if radius is not None:
            rows.append(_norm_bound_row(problem.n, slice(0, problem.n), radius))
        return _solve_support(problem, objective, rows, opts)
    m = problem.total_dim
    offs = _dual_offsets(problem)
    rows = []
    for i, cone in enumerate(problem.blocks):
        H = np.zeros((cone.dim, m))
        H[:, offs[i] : offs[i] + cone.dim] = np.eye(cone.dim)
        rows.append((cone, H, np.zeros(cone.dim)))
    A_st, b_st = problem.stacked()
    rows.append(
        (ConeSpec.orthant(1), b_st[None, :], np.array([optimal_value - slack]))
    )
    rows.append((ConeSpec.orthant(1), objective[None, :], np.array([-1.0])))
    if radius is not None:
        rows.append(_norm_bound_row(m, slice(0, m), radius))
    return _solve_support(problem, objective, rows, opts, E=A_st.T, d=problem.c)


def min_norm_face_point(
    problem: ConicProblem,
    optimal_value: float,
    side: Side,
    opts: SolveOptions | None = None,
) -> np.ndarray:
    """Euclidean-minimum-norm point of the primal or dual optimal face.

    Posed as a second-order cone program  min t, (t, v) in a Lorentz cone,
    over the face constraints.  On problems with a unique solution this
    recovers it far more accurately than the interior-point iterate, whose
    error degrades polynomially under degenerate complementarity.
    """
    opts = opts or SolveOptions()
    slack = _face_slack(optimal_value, opts)
    if side is Side.PRIMAL:
        n = problem.n
        nv = n + 1
        rows = []
        for cone, A, b in zip(problem.blocks, problem.A_blocks, problem.b_blocks):
            rows.append((cone, np.hstack([A, np.zeros((cone.dim, 1))]), b))
        rows.append(
            (
                ConeSpec.orthant(1),
                np.concatenate([-problem.c, [0.0]])[None, :],
                np.array([-(optimal_value + slack)]),
            )
        )
        H = np.zeros((n + 1, nv))
        H[0, -1] = 1.0
        H[1:, :n] = np.eye(n)
        rows.append((ConeSpec.lorentz(n + 1), H, np.zeros(n + 1)))
        u = _solve_support(problem, _unit(nv, nv - 1), rows, opts)
        return u[:n]
    m = problem.total_dim
    nv = m + 1
    offs = _dual_offsets(problem)
    rows = []
    for i, cone in enumerate(problem.blocks):
        H = np.zeros((cone.dim, nv))
        H[:, offs[i] : offs[i] + cone.dim] = np.eye(cone.dim)
        rows.append((cone, H, np.zeros(cone.dim)))
    A_st, b_st = problem.stacked()
    rows.append(
        (
            ConeSpec.orthant(1),
            np.concatenate([b_st, [0.0]])[None, :],
            np.array([optimal_value - slack]),
        )
    )
    H = np.zeros((m + 1, nv))
    H[0, -1] = 1.0
    H[1:, :m] = np.eye(m)
    rows.append((ConeSpec.lorentz(m + 1), H, np.zeros(m + 1)))
    E = np.hstack([A_st.T, np.zeros((problem.n, 1))])
    return _solve_support(problem, _unit(nv, nv - 1), rows, opts, E=E, d=problem.c)


def _complementary_face_embedding(cone: ConeSpec, s: np.ndarray, thr: float):
    """Embedding matrix T and reduced cone for {y in K+ : y . s = 0}.

    Returns (T, reduced_cone) with y = T w; T has cone.dim rows.  A zero
    column count means y is forced to 0.
    """
    if cone.kind is ConeKind.ORTHANT or cone.dim == 1:
        active = np.flatnonzero(s <= thr)
        T = np.zeros((cone.dim, active.size))
        for k, i in enumerate(active):
            T[i, k] = 1.0
        reduced = ConeSpec.orthant(active.size) if active.size else None
        return T, reduced
    if cone.kind is ConeKind.LORENTZ:
        ns = float(np.linalg.norm(s))
        if ns <= thr:
            return np.eye(cone.dim), cone
        if s[0] - np.linalg.norm(s[1:]) > thr:
            return np.zeros((cone.dim, 0)), None
        ray = np.concatenate(([s[0]], -s[1:])) / ns
        return ray[:, None], ConeSpec.orthant(1)
    S = smat(s)
    eig, vec = np.linalg.eigh(S)
    kernel = vec[:, eig <= thr * max(1.0, float(eig[-1]))]
    k = kernel.shape[1]
    if k == 0:
        return np.zeros((cone.dim, 0)), None
    d = k * (k + 1) // 2
    T = np.empty((cone.dim, d))
    iu, ju = np.triu_indices(k)
    for col, (i, jj) in enumerate(zip(iu, ju)):
        W = np.zeros((k, k))
        if i == jj:
            W[i, i] = 1.0
        else:
            W[i, jj] = W[jj, i] = 1.0 / SQRT2
        T[:, col] = svec(kernel @ W @ kernel.T)
    return T, ConeSpec.psd(k)


def polish_pair(
    problem: ConicProblem,
    optimal_value: float,
    opts: SolveOptions | None = None,
    face_threshold: float = 1e-6,
) -> PrimalDualPair | None:
    """High-accuracy representative solution pair.

    The primal point is the minimum-norm point of the primal optimal face.
    The dual point is recovered on the face of the polar cone complementary
    to the polished slack: with y^j = T^j w^j restricted to that face, the
    dual equality system becomes small and well conditioned, and is solved
    by least squares (unique case) or a reduced min-norm cone program.
    Returns None when the polish cannot be validated.
    """
    opts = opts or SolveOptions()
    try:
        x = min_norm_face_point(problem, optimal_value, Side.PRIMAL, opts)
    except SolverError:
        return None
    s_blocks = problem.slacks(x)
    embeds = [
        _complementary_face_embedding(cone, s, face_threshold)
        for cone, s in zip(problem.blocks, s_blocks)
    ]
    E_parts, reduced_cones, widths = [], [], []
    for (T, reduced), A in zip(embeds, problem.A_blocks):
        widths.append(T.shape[1])
        if T.shape[1]:
            E_parts.append(A.T @ T)
            reduced_cones.append(reduced)
    if not E_parts:
        w = np.zeros(0)
        if float(np.linalg.norm(problem.c)) > face_threshold:
            return None
    else:
        E = np.hstack(E_parts)
        w0, *_ = np.linalg.lstsq(E, problem.c, rcond=None)
        if float(np.linalg.norm(E @ w0 - problem.c)) > face_threshold * (
            1.0 + float(np.linalg.norm(problem.c))
        ):
            return None
        _, sv, Vt = np.linalg.svd(E)
        rank = int(np.sum(sv > max(sv[0], 1.0) * 1e-10)) if sv.size else 0
        Z = Vt[rank:].T
        if Z.shape[1] == 0:
            w = w0
        else:
            nq = Z.shape[1]
            nv = nq + 1
            rows = []
            at = 0
            for cone in reduced_cones:
                H = np.hstack([Z[at : at + cone.dim], np.zeros((cone.dim, 1))])
                rows.append((cone, H, -w0[at : at + cone.dim]))
                at += cone.dim
            H = np.zeros((w0.size + 1, nv))
            H[0, -1] = 1.0
            H[1:, :nq] = Z
            rows.append(
                (ConeSpec.lorentz(w0.size + 1), H, np.concatenate([[0.0], -w0]))
            )
            try:
                u = _solve_support(problem, _unit(nv, nv - 1), rows, opts)
            except SolverError:
                return None
            w = w0 + Z @ u[:nq]
    y_blocks, at = [], 0
    for (T, _), width in zip(embeds, widths):
        y_blocks.append(T @ w[at : at + width] if width else np.zeros(T.shape[0]))
        at += width
    pair = PrimalDualPair.create(problem, x, y_blocks)
    if not residuals(problem, pair).is_solution(10 * face_threshold):
        return None
    return pair
