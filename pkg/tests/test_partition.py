import numpy as np
import pytest

from conpart import (
    ConeSpec,
    ConicProblem,
    PrimalDualPair,
    SolverError,
    check_relations,
    classify,
    residuals,
    strict_complementarity,
)
from conpart.solver import SupportSide
from conftest import build_degenerate_sdp, build_mixed, build_trivial_lp
from _instances import random_zero_gap


def test_trivial_lp_partition(trivial_lp):
    rep = classify(trivial_lp)
    assert rep.four.N == {0} and not (rep.four.B | rep.four.R | rep.four.T)
    assert rep.six.N == {0}
    assert strict_complementarity(rep)
    assert rep.relations.passed
    assert not rep.uncertain
    assert rep.optimal_value == pytest.approx(1.0, abs=1e-7)


def test_degenerate_sdp_partition(degenerate_sdp):
    rep = classify(degenerate_sdp)
    assert rep.four.T == {0} and not rep.four.R
    assert rep.six.C == {0}
    assert not strict_complementarity(rep)
    assert rep.relations.passed
    # the single PSD block carries a confidence note about the rank test
    assert 0 in rep.psd_confidence_notes


def test_mixed_coarse_partition():
    rep = classify(build_mixed(refined=False))
    assert rep.four.N == {1}
    assert rep.four.R == {0}
    assert rep.four.T == {2}
    assert rep.six.C == {0, 2}
    assert rep.relations.passed


def test_mixed_refined_partition():
    rep = classify(build_mixed(refined=True))
    assert rep.four.B == {4}
    assert rep.four.N == {1, 3}
    assert rep.four.R == {0}
    assert rep.four.T == {2}
    assert rep.six.O == {2}
    assert rep.six.C == {0}
    assert rep.relations.passed


def test_classify_rejects_unsolvable():
    p = ConicProblem(
        [ConeSpec.orthant(2)],
        [np.array([[1.0], [-1.0]])],
        [np.array([1.0, 0.0])],
        np.array([1.0]),
    )
    with pytest.raises(SolverError):
        classify(p)


def test_classify_deterministic():
    p = random_zero_gap(np.random.default_rng(42))
    a = classify(p)
    b = classify(p)
    assert a.four == b.four
    assert a.six == b.six


def test_evidence_has_all_probes(trivial_lp):
    rep = classify(trivial_lp)
    assert set(rep.evidence) == {(0, side) for side in SupportSide}
    # dual side is interior at the optimum, primal slack is pinned at zero
    assert rep.evidence[(0, SupportSide.DUAL_INTERIOR)].value > 0.9
    assert rep.evidence[(0, SupportSide.PRIMAL_NONZERO)].value <= 1e-4


def test_classify_accepts_extra_pair(trivial_lp):
    extra = PrimalDualPair.create(trivial_lp, [1.0], [[1.0]])
    rep = classify(trivial_lp, extra_pair=extra)
    assert rep.four.N == {0}


def test_solution_passes_residual_check():
    for builder in (build_trivial_lp, build_degenerate_sdp):
        p = builder()
        rep = classify(p)
        assert residuals(p, rep.solution).is_solution(1e-6)


def test_classify_invariant_under_scaling():
    p = build_mixed(refined=True)
    scaled = ConicProblem(
        p.blocks,
        [1e3 * A for A in p.A_blocks],
        [1e3 * b for b in p.b_blocks],
        p.c,
        p.name,
    )
    a, b_ = classify(p), classify(scaled)
    assert a.four == b_.four
    assert a.six == b_.six


def test_check_relations_reports_offenders():
    p = build_mixed(refined=True)
    rep = classify(p)
    # corrupt the four-partition: move the R block into T
    from conpart.partition import FourPartition

    bad_four = FourPartition(
        B=rep.four.B,
        N=rep.four.N,
        R=frozenset(),
        T=rep.four.T | rep.four.R,
        r0=rep.four.r0,
    )
    rep.four = bad_four
    rel = check_relations(rep, p)
    # R = C fails for this pure Lorentz/dim-1 instance after the corruption
    assert rel.lorentz_law_applicable
    assert rel.lorentz_r_equals_c is False
    assert not rel.passed
    assert "R != C" in rel.offending
