import numpy as np
import pytest

from conpart.cones import (
    CertificateError,
    ConeKind,
    ConeSpec,
    Membership,
    classify_membership,
    in_ri_normal_cone,
    interior_point,
    numeric_rank,
    polar,
    smat,
    svec,
    svec_dim,
    sym,
)


def test_cone_spec_constructors():
    assert ConeSpec.orthant(3).dim == 3
    assert ConeSpec.lorentz(4).kind is ConeKind.LORENTZ
    psd = ConeSpec.psd(3)
    assert psd.order == 3 and psd.dim == 6
    assert ConeSpec.orthant(1).is_pointwise
    assert ConeSpec.lorentz(1).is_pointwise
    assert not ConeSpec.lorentz(2).is_pointwise


def test_cone_spec_validation():
    with pytest.raises(ValueError):
        ConeSpec.orthant(0)
    with pytest.raises(ValueError):
        ConeSpec(ConeKind.PSD, 5, 3)
    with pytest.raises(ValueError):
        ConeSpec(ConeKind.ORTHANT, 3, 2)


def test_svec_roundtrip_and_inner_product():
    rng = np.random.default_rng(0)
    for p in range(1, 6):
        M = sym(rng.standard_normal((p, p)))
        Q = sym(rng.standard_normal((p, p)))
        assert svec(M).size == svec_dim(p)
        np.testing.assert_allclose(smat(svec(M)), M, atol=1e-14)
        # the scaled-triangle dot product equals the trace pairing
        np.testing.assert_allclose(
            float(svec(M) @ svec(Q)), float(np.trace(M @ Q)), atol=1e-12
        )


def test_smat_rejects_non_triangular_length():
    with pytest.raises(ValueError):
        smat(np.zeros(4))


def test_numeric_rank():
    D = np.diag([3.0, 1e-12, -2.0])
    assert numeric_rank(D, 1e-9) == 2
    assert numeric_rank(np.zeros((3, 3)), 1e-9) == 0
    with pytest.raises(ValueError):
        numeric_rank(D, 0.0)


def test_membership_orthant():
    cone = ConeSpec.orthant(3)
    assert classify_membership(cone, [1, 2, 3]).membership is Membership.INTERIOR
    assert classify_membership(cone, [0, 1, 2]).membership is Membership.BOUNDARY
    assert classify_membership(cone, [-1, 1, 2]).membership is Membership.OUTSIDE


def test_membership_lorentz():
    cone = ConeSpec.lorentz(3)
    assert classify_membership(cone, [2, 1, 0]).membership is Membership.INTERIOR
    assert classify_membership(cone, [1, 1, 0]).membership is Membership.BOUNDARY
    assert classify_membership(cone, [1, 1, 1]).membership is Membership.OUTSIDE
    m = classify_membership(cone, [2, 1, 0])
    assert m.margin == pytest.approx(1.0)


def test_membership_psd():
    cone = ConeSpec.psd(2)
    assert classify_membership(cone, svec(np.eye(2))).membership is Membership.INTERIOR
    assert (
        classify_membership(cone, svec(np.diag([1.0, 0.0]))).membership
        is Membership.BOUNDARY
    )
    assert (
        classify_membership(cone, svec(np.diag([1.0, -1.0]))).membership
        is Membership.OUTSIDE
    )


def test_membership_dimension_check():
    with pytest.raises(ValueError):
        classify_membership(ConeSpec.orthant(2), [1.0])


def test_interior_point_is_interior():
    for cone in (ConeSpec.orthant(4), ConeSpec.lorentz(3), ConeSpec.psd(3)):
        assert polar(cone) == cone
        e = interior_point(cone)
        assert classify_membership(cone, e).membership is Membership.INTERIOR


def test_ri_normal_orthant():
    cone = ConeSpec.orthant(3)
    # strictly complementary split passes, a doubly-zero coordinate fails
    assert in_ri_normal_cone(cone, np.array([1.0, 0, 0]), np.array([0.0, 1, 1]))
    assert not in_ri_normal_cone(cone, np.array([1.0, 0, 0]), np.array([0.0, 1, 0]))


def test_ri_normal_lorentz():
    cone = ConeSpec.lorentz(3)
    s = np.array([1.0, 1.0, 0.0])
    y_good = np.array([2.0, -2.0, 0.0])
    assert in_ri_normal_cone(cone, s, y_good)
    assert not in_ri_normal_cone(cone, s, np.zeros(3))
    # interior slack forces a zero multiplier
    assert in_ri_normal_cone(cone, np.array([2.0, 1.0, 0.0]), np.zeros(3))
    # zero slack needs an interior multiplier
    assert in_ri_normal_cone(cone, np.zeros(3), np.array([2.0, 1.0, 0.0]))
    assert not in_ri_normal_cone(cone, np.zeros(3), np.array([1.0, 1.0, 0.0]))


def test_ri_normal_psd():
    cone = ConeSpec.psd(3)
    s = svec(np.diag([1.0, 1.0, 0.0]))
    y_full = svec(np.diag([0.0, 0.0, 2.0]))
    y_deficient = svec(np.zeros((3, 3)))
    assert in_ri_normal_cone(cone, s, y_full)
    assert not in_ri_normal_cone(cone, s, y_deficient)


def test_ri_normal_preconditions():
    cone = ConeSpec.orthant(2)
    with pytest.raises(CertificateError):
        in_ri_normal_cone(cone, np.array([-1.0, 0.0]), np.array([0.0, 1.0]))
    with pytest.raises(CertificateError):
        in_ri_normal_cone(cone, np.array([1.0, 0.0]), np.array([-1.0, 0.0]))
    with pytest.raises(CertificateError):
        # complementarity violated
        in_ri_normal_cone(cone, np.array([1.0, 0.0]), np.array([1.0, 0.0]))
