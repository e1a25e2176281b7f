"""Lifting Lorentz-cone blocks to PSD blocks and comparing partitions.

The arrow map sends s = (s0, sbar) to the symmetric matrix with s0 on the
diagonal and sbar along the first row and column; s lies in the Lorentz
cone exactly when the matrix is PSD (its eigenvalues are s0 +- ||sbar||
and s0).  Lifting a problem through such per-block maps preserves the
primal solution set, and under explicit hypotheses on the maps it also
preserves the complementarity partitions; this module verifies those
hypotheses numerically and compares the partitions on both sides.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .cones import (
    SQRT2,
    CertificateError,
    ConeKind,
    ConeSpec,
    Membership,
    classify_membership,
    interior_point,
    smat,
    svec,
)
from .model import ConicProblem
from .partition import PartitionReport, classify
from .solver import SolveOptions, SolverError, _conelp


def arrow(s: np.ndarray) -> np.ndarray:
    """Symmetric order-(m+1) matrix with s0 on the diagonal and sbar along
    the first row and column."""
    s = np.asarray(s, dtype=float).ravel()
    m = s.size - 1
    out = s[0] * np.eye(m + 1)
    out[0, 1:] = s[1:]
    out[1:, 0] = s[1:]
    return out


def arrow_adjoint(Y: np.ndarray) -> np.ndarray:
    """Adjoint of :func:`arrow`: (Tr Y, 2 * first column below the
    diagonal), so that <arrow(s), Y> = <s, arrow_adjoint(Y)>."""
    Y = np.asarray(Y, dtype=float)
    return np.concatenate([[np.trace(Y)], 2.0 * Y[1:, 0]])


class LiftKind(enum.Enum):
    ARROW = "arrow"
    GENERAL = "general"


@dataclass
class LiftMap:
    """Per-block linear maps M^j into target cones.

    Matrices act on the flat block coordinates (svec for PSD targets), so
    ``mats[j] @ s`` is the lifted block vector.
    """

    sources: list[ConeSpec]
    targets: list[ConeSpec]
    mats: list[np.ndarray]
    kind: LiftKind = LiftKind.GENERAL

    def __post_init__(self):
        self.mats = [np.atleast_2d(np.asarray(M, dtype=float)) for M in self.mats]
        if not (len(self.sources) == len(self.targets) == len(self.mats)):
            raise ValueError("sources, targets and mats must have equal length")
        for src, tgt, M in zip(self.sources, self.targets, self.mats):
            if M.shape != (tgt.dim, src.dim):
                raise ValueError(
                    f"map of shape {M.shape} does not take dim {src.dim} "
                    f"to dim {tgt.dim}"
                )

    @property
    def r(self) -> int:
        return len(self.sources)

    def equivalence_holds(
        self, samples: int = 2000, seed: int = 7, tol: float = 1e-7
    ) -> bool:
        """Sampled check of the defining property: s in K_j iff M^j s is in
        the target cone."""
        rng = np.random.default_rng(seed)
        for src, tgt, M in zip(self.sources, self.targets, self.mats):
            for s in _sample_points(src, samples, rng):
                a = classify_membership(src, s, tol).membership
                b = classify_membership(tgt, M @ s, tol).membership
                if (a is Membership.OUTSIDE) != (b is Membership.OUTSIDE):
                    return False
        return True


def _sample_points(cone: ConeSpec, count: int, rng) -> list[np.ndarray]:
    """Mixed sample: interior, boundary and outside points of the cone."""
    pts = [np.zeros(cone.dim), interior_point(cone)]
    for _ in range(count):
        g = rng.standard_normal(cone.dim)
        mode = rng.integers(3)
        if cone.kind is ConeKind.LORENTZ and cone.dim >= 2:
            if mode == 0:
                g[0] = np.linalg.norm(g[1:]) + abs(g[0])  # interior-ish
            elif mode == 1:
                g[0] = np.linalg.norm(g[1:])  # boundary
        elif cone.kind is ConeKind.PSD:
            if mode == 0:
                g = svec(smat(g) @ smat(g).T)  # PSD
            elif mode == 1:
                S = smat(g) @ smat(g).T
                eig, vec = np.linalg.eigh(S)
                eig[0] = 0.0  # rank-deficient: boundary
                g = svec(vec @ np.diag(eig) @ vec.T)
        else:
            if mode == 0:
                g = np.abs(g)
            elif mode == 1:
                g = np.abs(g)
                g[rng.integers(cone.dim)] = 0.0
        pts.append(g)
    return pts


def arrow_lift(blocks: list[ConeSpec]) -> LiftMap:
    """Arrow lift for a list of Lorentz blocks (dim m+1 -> PSD order m+1)."""
    mats, targets = [], []
    for cone in blocks:
        if cone.kind is not ConeKind.LORENTZ:
            raise ValueError("the arrow lift applies to Lorentz blocks only")
        p = cone.dim
        target = ConeSpec.psd(p)
        M = np.column_stack(
            [svec(arrow(np.eye(p)[:, k])) for k in range(p)]
        )
        mats.append(M)
        targets.append(target)
    return LiftMap(list(blocks), targets, mats, LiftKind.ARROW)


def identity_lift(blocks: list[ConeSpec]) -> LiftMap:
    return LiftMap(
        list(blocks),
        list(blocks),
        [np.eye(cone.dim) for cone in blocks],
        LiftKind.GENERAL,
    )


def lift_problem(problem: ConicProblem, lift: LiftMap) -> ConicProblem:
    """Problem with data (M^j A^j, M^j b^j, c) over the target cones; the
    primal solution sets of the two problems coincide."""
    if lift.r != problem.r:
        raise ValueError("lift map and problem have different block counts")
    for cone, src in zip(problem.blocks, lift.sources):
        if cone != src:
            raise ValueError("lift map sources do not match the problem blocks")
    return ConicProblem(
        list(lift.targets),
        [M @ A for M, A in zip(lift.mats, problem.A_blocks)],
        [M @ b for M, b in zip(lift.mats, problem.b_blocks)],
        problem.c,
        problem.name + "-lifted" if problem.name else "lifted",
    )


def transport_dual(
    lift: LiftMap, z_blocks: list[np.ndarray], tol: float = 1e-7
) -> list[np.ndarray]:
    """Pull a lifted dual back through the adjoints: y^j = (M^j)^T z^j.

    Each z^j must lie in the polar of its target cone; transported
    solutions of the lifted optimality system solve the original one.
    """
    if len(z_blocks) != lift.r:
        raise ValueError("wrong number of dual blocks")
    out = []
    for tgt, M, z in zip(lift.targets, lift.mats, z_blocks):
        z = np.asarray(z, dtype=float).ravel()
        if classify_membership(tgt, z, tol).membership is Membership.OUTSIDE:
            raise CertificateError("lifted dual block is outside the polar cone")
        out.append(M.T @ z)
    return out


@dataclass
class HypothesisReport:
    injective: bool
    adjoint_image_closed_via_coercivity: bool
    boundary_preserving: bool
    kernel_trivial_on_polar: bool
    coercivity_constant: float
    kernel_witnesses: dict[int, np.ndarray] = field(default_factory=dict)

    @property
    def preservation_hypotheses(self) -> bool:
        return (
            self.injective
            and self.adjoint_image_closed_via_coercivity
            and self.boundary_preserving
        )


def verify_hypotheses(
    lift: LiftMap,
    tol: float = 1e-7,
    samples: int = 2000,
    seed: int = 11,
    opts: SolveOptions | None = None,
) -> HypothesisReport:
    """Numerically check the hypotheses gating partition preservation.

    Injectivity by matrix rank; closedness of the adjoint image via a
    sampled coercivity constant min ||M^T z|| over the unit sphere of the
    target polar cone; boundary preservation by membership-class sampling;
    the kernel condition (M^T z = 0, z in polar => z = 0) by a small cone
    program per block whose optimal value is positive exactly when a
    nonzero kernel point exists.
    """
    opts = opts or SolveOptions()
    rng = np.random.default_rng(seed)

    injective = all(
        np.linalg.matrix_rank(M, tol=1e-10 * max(1.0, float(np.abs(M).max())))
        == M.shape[1]
        for M in lift.mats
    )

    gamma = np.inf
    boundary_ok = True
    for src, tgt, M in zip(lift.sources, lift.targets, lift.mats):
        for z in _sample_points(tgt, samples, rng):
            nz = float(np.linalg.norm(z))
            if nz <= tol:
                continue
            if classify_membership(tgt, z, tol).membership is Membership.OUTSIDE:
                continue
            gamma = min(gamma, float(np.linalg.norm(M.T @ z)) / nz)
        for s in _sample_points(src, samples, rng):
            a = classify_membership(src, s, tol).membership
            b = classify_membership(tgt, M @ s, tol).membership
            if (a is Membership.BOUNDARY) != (b is Membership.BOUNDARY):
                boundary_ok = False
    coercive = bool(np.isfinite(gamma) and gamma > 10.0 * tol)

    kernel_ok = True
    witnesses: dict[int, np.ndarray] = {}
    for j, (tgt, M) in enumerate(zip(lift.targets, lift.mats)):
        value, z = _kernel_probe(tgt, M, opts)
        if value > np.sqrt(opts.tol):
            kernel_ok = False
            witnesses[j] = z
    return HypothesisReport(
        injective=injective,
        adjoint_image_closed_via_coercivity=coercive,
        boundary_preserving=boundary_ok,
        kernel_trivial_on_polar=kernel_ok,
        coercivity_constant=float(gamma) if np.isfinite(gamma) else 0.0,
        kernel_witnesses=witnesses,
    )


def _kernel_probe(tgt: ConeSpec, M: np.ndarray, opts: SolveOptions):
    """max e.z over {z in polar, M^T z = 0, e.z <= 1}; positive value means
    the kernel meets the polar cone nontrivially.  The witness is scaled so
    its largest-magnitude entry is 1."""
    e = interior_point(tgt)
    nv = tgt.dim
    rows = [
        (tgt, np.eye(nv), np.zeros(nv)),
        (ConeSpec.orthant(1), -e[None, :], np.array([-1.0])),
    ]
    try:
        status, u, _, _, _ = _conelp(
            -e, rows, opts, E=M.T, d=np.zeros(M.shape[1])
        )
    except SolverError:
        return 0.0, np.zeros(nv)
    if status not in ("optimal", "almost") or u is None:
        return 0.0, np.zeros(nv)
    value = float(e @ u)
    z = u.copy()
    peak = float(np.abs(z).max())
    if peak > 0:
        z = z / peak
    return value, z


@dataclass
class ComparisonReport:
    original: PartitionReport
    lifted: PartitionReport
    hypotheses: HypothesisReport
    assertions: dict[str, bool | None]

    @property
    def passed(self) -> bool:
        return all(v is not False for v in self.assertions.values())


def compare_partitions(
    problem: ConicProblem,
    lift: LiftMap,
    opts: SolveOptions | None = None,
) -> ComparisonReport:
    """Classify the problem and its lift, then evaluate the preservation
    assertions, each gated by the hypotheses that imply it.

    Gating (None = hypothesis absent, assertion not claimed):
    four_equal needs injectivity + coercivity + boundary preservation;
    b0_superset is unconditional; n0_equal needs injectivity; six_equal
    additionally needs the kernel condition; r_t_equal needs the kernel
    condition plus R = C on both sides.
    """
    opts = opts or SolveOptions()
    rep_p = classify(problem, opts)
    rep_m = classify(lift_problem(problem, lift), opts)
    hyp = verify_hypotheses(lift, opts=opts)

    four_eq = rep_p.four == rep_m.four
    six_eq = (
        rep_p.six.B == rep_m.six.B
        and rep_p.six.N == rep_m.six.N
        and rep_p.six.Bprime == rep_m.six.Bprime
        and rep_p.six.Nprime == rep_m.six.Nprime
        and rep_p.six.O == rep_m.six.O
        and rep_p.six.C == rep_m.six.C
    )
    assertions: dict[str, bool | None] = {
        "four_equal": four_eq if hyp.preservation_hypotheses else None,
        "b0_superset": rep_m.six.b0 <= rep_p.six.b0,
        "n0_equal": (rep_p.six.n0 == rep_m.six.n0) if hyp.injective else None,
        "six_equal": (
            six_eq and rep_p.six.b0 == rep_m.six.b0
            if hyp.injective and hyp.kernel_trivial_on_polar
            else None
        ),
    }
    r_c_both = rep_p.four.R == rep_p.six.C and rep_m.four.R == rep_m.six.C
    assertions["r_t_equal"] = (
        (rep_p.four.R == rep_m.four.R and rep_p.four.T == rep_m.four.T)
        if hyp.kernel_trivial_on_polar and r_c_both
        else None
    )
    return ComparisonReport(rep_p, rep_m, hyp, assertions)
