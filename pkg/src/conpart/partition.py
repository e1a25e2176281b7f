"""Four- and six-set complementarity partitions of the block index set.

Membership in B, N, B0 and N0 is decided by bounded support problems over
the optimal faces; the remaining four-partition sets follow from
R = R0 \\ (B u N) and T = J \\ (R0 u B u N).  Membership in R0 is decided
kind-by-kind: orthant blocks by refining to coordinates, Lorentz blocks by
the one-dimensionality of boundary normal cones, PSD blocks by a
relative-interior test on an aggregated (approximately maximal) pair.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .cones import CertificateError, ConeKind, ConeSpec, in_ri_normal_cone
from .model import ConicProblem, PrimalDualPair, aggregate_witnesses
from .solver import (
    Side,
    SolveOptions,
    SolveStatus,
    SolverError,
    SupportSide,
    SupportValue,
    face_point,
    polish_pair,
    solve,
    support_interior,
    support_nonzero,
)

# witness-noise tolerance for the aggregated-pair relative-interior tests
_RI_TOL = 1e-4
_AGGREGATE_TOL = 1e-5


@dataclass(frozen=True)
class FourPartition:
    B: frozenset[int]
    N: frozenset[int]
    R: frozenset[int]
    T: frozenset[int]
    r0: frozenset[int]


@dataclass(frozen=True)
class SixPartition:
    B: frozenset[int]
    N: frozenset[int]
    Bprime: frozenset[int]
    Nprime: frozenset[int]
    O: frozenset[int]
    C: frozenset[int]
    b0: frozenset[int]
    n0: frozenset[int]


@dataclass
class RelationCheck:
    r_subset_c: bool
    t_contains_primes_and_o: bool
    lorentz_law_applicable: bool
    lorentz_r_equals_c: bool | None
    four_partition_valid: bool
    six_partition_valid: bool
    offending: dict[str, set] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        checks = [
            self.r_subset_c,
            self.t_contains_primes_and_o,
            self.four_partition_valid,
            self.six_partition_valid,
        ]
        if self.lorentz_law_applicable:
            checks.append(bool(self.lorentz_r_equals_c))
        return all(checks)


@dataclass
class PartitionReport:
    four: FourPartition
    six: SixPartition
    evidence: dict[tuple[int, SupportSide], SupportValue]
    ri_tests: dict[int, bool]
    uncertain: frozenset[int]
    psd_confidence_notes: dict[int, str]
    optimal_value: float
    solution: PrimalDualPair
    aggregated_pair: PrimalDualPair | None
    relations: "RelationCheck | None" = None


def _six_from_b0_n0(J, B, N, b0, n0) -> SixPartition:
    b0, n0 = frozenset(b0), frozenset(n0)
    return SixPartition(
        B=frozenset(B),
        N=frozenset(N),
        Bprime=b0 - n0 - B,
        Nprime=n0 - b0 - N,
        O=b0 & n0,
        C=J - b0 - n0,
        b0=b0,
        n0=n0,
    )


# consistent probe signatures, keyed by whether the primal-interior,
# primal-nonzero, dual-interior and dual-nonzero support values are positive;
# e.g. interior slack on some solution forces the dual side to vanish
_SIGNATURES = {
    (True, True, False, False): "B",
    (False, False, True, True): "N",
    (False, True, False, False): "Bprime",
    (False, False, False, True): "Nprime",
    (False, False, False, False): "O",
    (False, True, False, True): "C",
}
_SIGNATURE_ORDER = ["B", "N", "Bprime", "Nprime", "O", "C"]


def _decode_block(values: dict, thr: float) -> tuple[str, bool]:
    """Label one block from its four support values.

    When simple thresholding yields one of the six consistent signatures it
    is kept; otherwise (residual numerical drift) the signature with the
    best log-scale agreement is chosen and the block flagged as forced.
    """
    obs = (
        values[SupportSide.PRIMAL_INTERIOR] > thr,
        values[SupportSide.PRIMAL_NONZERO] > thr,
        values[SupportSide.DUAL_INTERIOR] > thr,
        values[SupportSide.DUAL_NONZERO] > thr,
    )
    if obs in _SIGNATURES:
        return _SIGNATURES[obs], False

    sides = (
        SupportSide.PRIMAL_INTERIOR,
        SupportSide.PRIMAL_NONZERO,
        SupportSide.DUAL_INTERIOR,
        SupportSide.DUAL_NONZERO,
    )

    def level(v: float) -> float:
        return float(np.clip(np.log10(max(v, 1e-12) / thr), -4.0, 4.0))

    def score(pattern) -> float:
        return sum(
            level(values[s]) if want else -level(values[s])
            for s, want in zip(sides, pattern)
        )

    by_label = {label: score(pat) for pat, label in _SIGNATURES.items()}
    best = max(_SIGNATURE_ORDER, key=lambda lb: by_label[lb])
    return best, True


def _refine_orthant_block(problem: ConicProblem, j: int) -> tuple[ConicProblem, list[int]]:
    """Split orthant block j into dim-1 blocks; returns the refined problem
    and the refined indices of its coordinates."""
    blocks, A_blocks, b_blocks, coord_idx = [], [], [], []
    for i, (cone, A, b) in enumerate(
        zip(problem.blocks, problem.A_blocks, problem.b_blocks)
    ):
        if i == j:
            for k in range(cone.dim):
                coord_idx.append(len(blocks))
                blocks.append(ConeSpec.orthant(1))
                A_blocks.append(A[k : k + 1])
                b_blocks.append(b[k : k + 1])
        else:
            blocks.append(cone)
            A_blocks.append(A)
            b_blocks.append(b)
    refined = ConicProblem(blocks, A_blocks, b_blocks, problem.c, problem.name)
    return refined, coord_idx


def _refined_pair(problem, refined, pair, j) -> PrimalDualPair:
    y_blocks = []
    for i, y in enumerate(pair.y_blocks):
        if i == j:
            y_blocks.extend(np.array([v]) for v in y)
        else:
            y_blocks.append(y)
    return PrimalDualPair.create(refined, pair.x, y_blocks)


def classify(
    problem: ConicProblem,
    opts: SolveOptions | None = None,
    seed: int = 20240,
    extra_pair: PrimalDualPair | None = None,
) -> PartitionReport:
    """Compute both partitions with per-block support-problem evidence.

    ``extra_pair``, when given, joins the witness pool used for the
    aggregated maximal-complementarity pair (it must be a solution; it is
    validated with everything else during aggregation).

    Raises :class:`SolverError` when the problem cannot be solved to
    optimality (infeasible, unbounded, or numerically failing instances
    are rejected, not classified).
    """
    opts = opts or SolveOptions()
    thr = math.sqrt(opts.tol)
    # both partitions are invariant under positive per-block scaling of
    # (A^j, b^j) and scaling of c, so work on an equilibrated copy; the
    # solver's absolute tolerances then read as relative ones
    original = problem
    problem, alphas, beta = _equilibrate(problem)
    if extra_pair is not None:
        extra_pair = _scale_pair(problem, extra_pair, alphas, beta, to_scaled=True)
    base = solve(problem, opts)
    if base.status is not SolveStatus.OPTIMAL:
        raise SolverError(f"problem not solved to optimality: {base.status.value}")
    val = base.optimal_value
    J = frozenset(range(problem.r))

    evidence: dict[tuple[int, SupportSide], SupportValue] = {}
    for j in range(problem.r):
        for fn, side in (
            (support_interior, Side.PRIMAL),
            (support_interior, Side.DUAL),
            (support_nonzero, Side.PRIMAL),
            (support_nonzero, Side.DUAL),
        ):
            sv = fn(problem, val, j, side, opts, base_pair=base.pair)
            evidence[(j, sv.side)] = sv

    # curvature of the cone boundary converts the objective-face slack into
    # spurious support values of order sqrt(slack); those shrink with the
    # slack while genuine values are stable, so marginal positives are
    # re-probed on a 16x tighter face and zeroed when they collapse
    probe_fns = {
        SupportSide.PRIMAL_INTERIOR: (support_interior, Side.PRIMAL),
        SupportSide.DUAL_INTERIOR: (support_interior, Side.DUAL),
        SupportSide.PRIMAL_NONZERO: (support_nonzero, Side.PRIMAL),
        SupportSide.DUAL_NONZERO: (support_nonzero, Side.DUAL),
    }
    refined_uncertain: set[int] = set()
    tight = replace(opts, tol=opts.tol / 16.0)
    for (j, probe_side), sv in list(evidence.items()):
        if not (thr < sv.value <= 100.0 * thr):
            continue
        fn, side = probe_fns[probe_side]
        try:
            sv2 = fn(problem, val, j, side, tight, base_pair=base.pair)
        except SolverError:
            refined_uncertain.add(j)
            continue
        if sv2.value < 0.55 * sv.value:
            evidence[(j, probe_side)] = SupportValue(j, probe_side, 0.0, sv.witness)
            refined_uncertain.add(j)
        else:
            evidence[(j, probe_side)] = sv2

    B, N, b0, n0 = set(), set(), set(), set()
    decoded: set[int] = set()
    for j in J:
        label, forced = _decode_block(
            {side: evidence[(j, side)].value for side in SupportSide}, thr
        )
        if forced:
            decoded.add(j)
        if label == "B":
            B.add(j)
        elif label == "N":
            N.add(j)
        if label in ("B", "Bprime", "O"):
            b0.add(j)
        if label in ("N", "Nprime", "O"):
            n0.add(j)
    B, N = frozenset(B), frozenset(N)
    six = _six_from_b0_n0(J, B, N, b0, n0)

    uncertain = frozenset(
        j
        for j in J
        if j in refined_uncertain
        or j in decoded
        or any(
            thr / 10.0 <= evidence[(j, side)].value <= thr * 10.0
            for side in SupportSide
        )
    )

    # witness pool for the aggregated (approximately maximal) pair
    xs = [base.pair.x]
    ys = [base.pair.y_blocks]
    if extra_pair is not None:
        xs.append(extra_pair.x)
        ys.append(extra_pair.y_blocks)
    for sv in evidence.values():
        if sv.side in (SupportSide.PRIMAL_INTERIOR, SupportSide.PRIMAL_NONZERO):
            xs.append(sv.witness.x)
        else:
            ys.append(sv.witness.y_blocks)

    rng = np.random.default_rng(seed)
    psd_notes: dict[int, str] = {}
    candidates = six.C - B - N
    for j in sorted(candidates):
        if problem.blocks[j].kind is ConeKind.PSD:
            # extra optimal-face points with randomized objectives sharpen
            # the aggregated pair toward maximal rank
            rho_x = 4.0 * (1.0 + float(np.linalg.norm(base.pair.x)))
            rho_y = 4.0 * (
                1.0 + float(np.linalg.norm(np.concatenate(base.pair.y_blocks)))
            )
            for _ in range(problem.blocks[j].order):
                g = rng.standard_normal(problem.n)
                h = rng.standard_normal(problem.total_dim)
                try:
                    xs.append(face_point(problem, val, g, Side.PRIMAL, opts, radius=rho_x))
                    yv = face_point(problem, val, h, Side.DUAL, opts, radius=rho_y)
                    ys.append(problem.split(yv))
                except SolverError:
                    psd_notes[j] = "randomized face solve failed; rank evidence reduced"

    try:
        aggregated = aggregate_witnesses(problem, xs, ys, _AGGREGATE_TOL)
    except ValueError:
        # some probe witness was too inaccurate; the base interior-point
        # pair is itself close to maximal complementarity and always valid
        try:
            aggregated = aggregate_witnesses(
                problem, [base.pair.x], [base.pair.y_blocks], _AGGREGATE_TOL
            )
        except ValueError:
            aggregated = None

    ri_tests: dict[int, bool] = {}
    r0 = set(B | N)
    for j in sorted(candidates):
        cone = problem.blocks[j]
        if cone.kind is ConeKind.LORENTZ and cone.dim >= 2:
            # boundary normal cones of a Lorentz cone are one-dimensional,
            # so every index with both sides nonzero is strictly complementary
            ri_tests[j] = True
        elif cone.kind is ConeKind.PSD:
            ok = False
            if aggregated is not None:
                try:
                    ok = in_ri_normal_cone(
                        cone, aggregated.s_blocks[j], aggregated.y_blocks[j], _RI_TOL
                    )
                except CertificateError:
                    ok = False
            psd_notes.setdefault(
                j,
                "R/T decision rests on an approximate maximal-rank pair "
                "(generically correct, not certified)",
            )
            ri_tests[j] = ok
        else:
            ri_tests[j] = _orthant_strict(problem, j, val, base.pair, opts, thr)
        if ri_tests[j]:
            r0.add(j)

    r0 = frozenset(r0)
    R = r0 - B - N
    T = J - r0 - B - N
    four = FourPartition(B=B, N=N, R=R, T=T, r0=r0)

    solution = polish_pair(problem, val, opts) or base.pair

    # map everything back to the original (unequilibrated) data
    solution = _scale_pair(original, solution, alphas, beta, to_scaled=False)
    if aggregated is not None:
        aggregated = _scale_pair(original, aggregated, alphas, beta, to_scaled=False)
    evidence = {
        key: SupportValue(
            sv.index,
            sv.side,
            sv.value,
            _scale_pair(original, sv.witness, alphas, beta, to_scaled=False),
        )
        for key, sv in evidence.items()
    }
    report = PartitionReport(
        four=four,
        six=six,
        evidence=evidence,
        ri_tests=ri_tests,
        uncertain=uncertain,
        psd_confidence_notes=psd_notes,
        optimal_value=beta * val,
        solution=solution,
        aggregated_pair=aggregated,
    )
    report.relations = check_relations(report, original)
    return report


def _equilibrate(problem: ConicProblem) -> tuple[ConicProblem, np.ndarray, float]:
    """Per-block scaling of (A^j, b^j) and scaling of c to unit size."""
    alphas = []
    A_blocks, b_blocks = [], []
    for A, b in zip(problem.A_blocks, problem.b_blocks):
        a = max(float(np.linalg.norm(A)), float(np.linalg.norm(b)))
        a = a if a > 0.0 else 1.0
        alphas.append(a)
        A_blocks.append(A / a)
        b_blocks.append(b / a)
    beta = float(np.linalg.norm(problem.c))
    beta = beta if beta > 0.0 else 1.0
    scaled = ConicProblem(
        problem.blocks, A_blocks, b_blocks, problem.c / beta, problem.name
    )
    return scaled, np.asarray(alphas), beta


def _scale_pair(
    target: ConicProblem,
    pair: PrimalDualPair,
    alphas: np.ndarray,
    beta: float,
    to_scaled: bool,
) -> PrimalDualPair:
    """Transport a primal-dual pair between a problem and its equilibrated
    copy; x is unchanged, dual blocks scale by alpha_j / beta."""
    if to_scaled:
        ys = [(a / beta) * y for a, y in zip(alphas, pair.y_blocks)]
    else:
        ys = [(beta / a) * y for a, y in zip(alphas, pair.y_blocks)]
    return PrimalDualPair.create(target, pair.x, ys)


def _orthant_strict(problem, j, val, base_pair, opts, thr) -> bool:
    """Strict complementarity of every coordinate of an orthant block,
    decided on the coordinatewise refinement of the block."""
    refined, coords = _refine_orthant_block(problem, j)
    pair = _refined_pair(problem, refined, base_pair, j)
    for idx in coords:
        pi = support_interior(refined, val, idx, Side.PRIMAL, opts, base_pair=pair)
        if pi.value > thr:
            continue
        di = support_interior(refined, val, idx, Side.DUAL, opts, base_pair=pair)
        if di.value <= thr:
            return False
    return True


def check_relations(report: PartitionReport, problem: ConicProblem) -> RelationCheck:
    """Verify the structural relations between the two partitions."""
    four, six = report.four, report.six
    J = frozenset(range(problem.r))
    offending: dict[str, set] = {}

    r_in_c = four.R <= six.C
    if not r_in_c:
        offending["R not in C"] = set(four.R - six.C)
    merged = six.Bprime | six.Nprime | six.O
    t_sup = merged <= four.T
    if not t_sup:
        offending["B'uN'uO not in T"] = set(merged - four.T)

    lorentz_only = all(
        cone.kind is ConeKind.LORENTZ or cone.dim == 1 for cone in problem.blocks
    )
    r_eq_c = None
    if lorentz_only:
        r_eq_c = four.R == six.C
        if not r_eq_c:
            offending["R != C"] = set(four.R ^ six.C)

    four_sets = [four.B, four.N, four.R, four.T]
    four_ok = (
        frozenset().union(*four_sets) == J
        and sum(len(s) for s in four_sets) == len(J)
    )
    six_sets = [six.B, six.N, six.Bprime, six.Nprime, six.O, six.C]
    six_ok = (
        frozenset().union(*six_sets) == J
        and sum(len(s) for s in six_sets) == len(J)
        and six.B <= six.b0
        and six.N <= six.n0
    )
    if not four_ok:
        offending["four-partition not a disjoint cover"] = set()
    if not six_ok:
        offending["six-partition not a disjoint cover"] = set()

    return RelationCheck(
        r_subset_c=r_in_c,
        t_contains_primes_and_o=t_sup,
        lorentz_law_applicable=lorentz_only,
        lorentz_r_equals_c=r_eq_c,
        four_partition_valid=four_ok,
        six_partition_valid=six_ok,
        offending=offending,
    )


def strict_complementarity(report: PartitionReport) -> bool:
    """Strict complementarity holds iff T is empty (equivalently R0 = J);
    the componentwise and joint notions coincide."""
    return len(report.four.T) == 0
