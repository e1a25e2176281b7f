"""Cone geometry for orthant, Lorentz and PSD blocks.

All vectors live in a flat ``numpy`` representation.  Symmetric matrices are
stored as scaled upper-triangle vectors ("svec"): off-diagonal entries are
multiplied by sqrt(2) so that the vector dot product equals the trace inner
product of the corresponding matrices.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

SQRT2 = np.sqrt(2.0)

#: default relative tolerance for membership classification
DEFAULT_TOL = 1e-7


class CertificateError(ValueError):
    """A precondition of a cone certificate test failed."""


class ConeKind(enum.Enum):
    ORTHANT = "orthant"
    LORENTZ = "lorentz"
    PSD = "psd"


@dataclass(frozen=True)
class ConeSpec:
    """One cone block: kind and ambient vector dimension.

    For PSD blocks ``order`` is the matrix order and ``dim`` the number of
    stored svec entries, order*(order+1)/2.
    """

    kind: ConeKind
    dim: int
    order: int = 0

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("cone dimension must be positive")
        if self.kind is ConeKind.PSD:
            if self.order < 1:
                raise ValueError("PSD cone needs a positive order")
            if self.dim != self.order * (self.order + 1) // 2:
                raise ValueError("PSD dim must equal order*(order+1)/2")
        elif self.order:
            raise ValueError("order is only meaningful for PSD cones")

    @staticmethod
    def orthant(n: int) -> "ConeSpec":
        return ConeSpec(ConeKind.ORTHANT, n)

    @staticmethod
    def lorentz(dim: int) -> "ConeSpec":
        return ConeSpec(ConeKind.LORENTZ, dim)

    @staticmethod
    def psd(order: int) -> "ConeSpec":
        return ConeSpec(ConeKind.PSD, order * (order + 1) // 2, order)

    @property
    def is_pointwise(self) -> bool:
        """True for the cones that coincide with R_+ coordinatewise."""
        return self.kind is ConeKind.ORTHANT or (
            self.kind is ConeKind.LORENTZ and self.dim == 1
        )


class Membership(enum.Enum):
    INTERIOR = "interior"
    BOUNDARY = "boundary"
    OUTSIDE = "outside"


@dataclass(frozen=True)
class MembershipClass:
    membership: Membership
    margin: float


def svec_dim(order: int) -> int:
    return order * (order + 1) // 2


def svec(mat: np.ndarray) -> np.ndarray:
    """Scaled upper-triangle vectorization of a symmetric matrix."""
    mat = np.asarray(mat, dtype=float)
    p = mat.shape[0]
    iu, ju = np.triu_indices(p)
    v = mat[iu, ju].copy()
    v[iu != ju] *= SQRT2
    return v


def smat(v: np.ndarray) -> np.ndarray:
    """Inverse of :func:`svec`."""
    v = np.asarray(v, dtype=float)
    d = v.size
    p = int(round((np.sqrt(8 * d + 1) - 1) / 2))
    if p * (p + 1) // 2 != d:
        raise ValueError("vector length is not a triangular number")
    mat = np.zeros((p, p))
    iu, ju = np.triu_indices(p)
    w = v.copy()
    w[iu != ju] /= SQRT2
    mat[iu, ju] = w
    mat[ju, iu] = w
    return mat


def sym(mat: np.ndarray) -> np.ndarray:
    mat = np.asarray(mat, dtype=float)
    return (mat + mat.T) / 2.0


def numeric_rank(mat: np.ndarray, tol: float) -> int:
    """Number of eigenvalues of a symmetric matrix above the noise level."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    eig = np.linalg.eigvalsh(sym(mat))
    if eig.size == 0:
        return 0
    cut = tol * max(1.0, float(np.max(np.abs(eig))))
    return int(np.sum(np.abs(eig) > cut))


def _check_dim(cone: ConeSpec, v: np.ndarray, what: str) -> np.ndarray:
    v = np.asarray(v, dtype=float).ravel()
    if v.size != cone.dim:
        raise ValueError(
            f"{what} has dimension {v.size}, cone expects {cone.dim}"
        )
    return v


def classify_membership(
    cone: ConeSpec, v: np.ndarray, tol: float = DEFAULT_TOL
) -> MembershipClass:
    """Classify ``v`` against the cone with a relative tolerance band.

    The margin is min(v) for orthants, v0 - ||vbar|| for Lorentz cones and
    the smallest eigenvalue for PSD blocks.  Values within
    ``tol * max(1, ||v||)`` of zero classify as boundary.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    v = _check_dim(cone, v, "vector")
    if cone.kind is ConeKind.ORTHANT or cone.dim == 1:
        margin = float(np.min(v))
    elif cone.kind is ConeKind.LORENTZ:
        margin = float(v[0] - np.linalg.norm(v[1:]))
    else:
        margin = float(np.min(np.linalg.eigvalsh(smat(v))))
    band = tol * max(1.0, float(np.linalg.norm(v)))
    if margin > band:
        cls = Membership.INTERIOR
    elif margin < -band:
        cls = Membership.OUTSIDE
    else:
        cls = Membership.BOUNDARY
    return MembershipClass(cls, margin)


def polar(cone: ConeSpec) -> ConeSpec:
    """Positive polar cone.  All supported kinds are self-dual."""
    return cone


def interior_point(cone: ConeSpec) -> np.ndarray:
    """Canonical interior unit: ones, (1,0,...,0), or the identity matrix."""
    if cone.kind is ConeKind.ORTHANT:
        return np.ones(cone.dim)
    if cone.kind is ConeKind.LORENTZ:
        e = np.zeros(cone.dim)
        e[0] = 1.0
        return e
    return svec(np.eye(cone.order))


def _ri_normal_orthant(s: np.ndarray, y: np.ndarray, tol: float) -> bool:
    band_s = tol * max(1.0, float(np.linalg.norm(s)))
    band_y = tol * max(1.0, float(np.linalg.norm(y)))
    s_pos = s > band_s
    y_pos = y > band_y
    return bool(np.all(s_pos ^ y_pos))


def _ri_normal_lorentz(s, y, tol, s_class, y_class):
    ns = float(np.linalg.norm(s))
    ny = float(np.linalg.norm(y))
    if s_class is Membership.INTERIOR:
        return ny <= tol * max(1.0, ns)
    if ns <= tol:
        return y_class is Membership.INTERIOR
    # boundary, nonzero: the normal cone is the ray through (s0, -sbar)
    refl = np.concatenate(([s[0]], -s[1:]))
    t = float(y @ refl) / float(refl @ refl)
    if t <= tol:
        return False
    return float(np.linalg.norm(y - t * refl)) <= tol * max(1.0, ny)


def _ri_normal_psd(s, y, tol, order, s_class, y_class):
    ns = float(np.linalg.norm(s))
    ny = float(np.linalg.norm(y))
    if s_class is Membership.INTERIOR:
        return ny <= tol * max(1.0, ns)
    if ns <= tol:
        return y_class is Membership.INTERIOR
    S, Y = smat(s), smat(y)
    if numeric_rank(S, tol) + numeric_rank(Y, tol) != order:
        return False
    # the matrix product is quadratically more noise-sensitive than the
    # trace pairing checked in the precondition (eigenvector rotations
    # scale like the square root of the data perturbation)
    prod = float(np.linalg.norm(S @ Y))
    return prod <= np.sqrt(tol) * (1.0 + ns * ny)


def in_ri_normal_cone(
    cone: ConeSpec, s: np.ndarray, y: np.ndarray, tol: float = DEFAULT_TOL
) -> bool:
    """Decide whether -y lies in the relative interior of the normal cone
    to the cone at the slack point s.

    Preconditions (checked, violation raises :class:`CertificateError`):
    s in K, y in the polar cone, and y.s = 0, all within ``tol``.
    """
    s = _check_dim(cone, s, "slack")
    y = _check_dim(cone, y, "dual vector")
    s_cm = classify_membership(cone, s, tol)
    if s_cm.membership is Membership.OUTSIDE:
        raise CertificateError("slack is outside the cone")
    y_cm = classify_membership(polar(cone), y, tol)
    if y_cm.membership is Membership.OUTSIDE:
        raise CertificateError("dual vector is outside the polar cone")
    gap = abs(float(s @ y))
    if gap > tol * (1.0 + np.linalg.norm(s) * np.linalg.norm(y)):
        raise CertificateError("complementarity y.s = 0 fails")

    if cone.kind is ConeKind.ORTHANT or cone.dim == 1:
        return _ri_normal_orthant(s, y, tol)
    if cone.kind is ConeKind.LORENTZ:
        return _ri_normal_lorentz(s, y, tol, s_cm.membership, y_cm.membership)
    return _ri_normal_psd(s, y, tol, cone.order, s_cm.membership, y_cm.membership)
