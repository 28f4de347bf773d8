"""Geometry of U(n) x U(n) (orthogonal groups in real mode).

Points are pairs (Q, Z) of unitary matrices; tangent vectors at (Q, Z) are
pairs (Q S, Z T) with S, T skew-Hermitian.  The metric is the real trace inner
product Re(trace(X^* Y)) summed over the two factors.  Retraction is the QR
factorization with the positive-real-diagonal sign convention, which makes it
deterministic.  Real mode runs the same code over float64 arrays, where the
conjugate transpose degenerates to the transpose.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .pencil import Field

__all__ = [
    "GroupPair",
    "TangentPair",
    "RetractionError",
    "tangent_project",
    "retract",
    "inner",
    "norm",
    "egrad_to_rgrad",
    "ehess_to_rhess",
    "random_point",
    "random_tangent",
    "identity_pair",
    "manifold_dim",
]

ORTHO_TOL = 1e-10


class RetractionError(RuntimeError):
    """Q + tX was numerically rank deficient; retry with a smaller step."""


@dataclass(eq=False)
class GroupPair:
    """Pair of unitary (orthogonal in real mode) matrices, the optimization variable."""

    Q: np.ndarray
    Z: np.ndarray
    field: Field = Field.COMPLEX

    @property
    def n(self) -> int:
        return self.Q.shape[0]

    def orthogonality_defect(self) -> float:
        eye = np.eye(self.n, dtype=self.Q.dtype)
        dq = np.linalg.norm(self.Q.conj().T @ self.Q - eye)
        dz = np.linalg.norm(self.Z.conj().T @ self.Z - eye)
        return float(max(dq, dz))

    def validate(self, tol: float = ORTHO_TOL):
        if self.Q.shape != self.Z.shape or self.Q.ndim != 2 or self.Q.shape[0] != self.Q.shape[1]:
            raise ValueError("Q and Z must be square matrices of equal size")
        if self.field is Field.REAL and (np.iscomplexobj(self.Q) or np.iscomplexobj(self.Z)):
            raise ValueError("real-mode group pair has complex entries")
        defect = self.orthogonality_defect()
        bound = tol * np.sqrt(self.n)
        if defect > bound:
            raise ValueError(f"matrices not unitary: defect {defect:.3e} > {bound:.3e}")
        return self


@dataclass(eq=False)
class TangentPair:
    """Ambient representation of a tangent vector at some GroupPair."""

    XQ: np.ndarray
    XZ: np.ndarray

    def __add__(self, other):
        return TangentPair(self.XQ + other.XQ, self.XZ + other.XZ)

    def __sub__(self, other):
        return TangentPair(self.XQ - other.XQ, self.XZ - other.XZ)

    def __neg__(self):
        return TangentPair(-self.XQ, -self.XZ)

    def __mul__(self, t):
        return TangentPair(self.XQ * t, self.XZ * t)

    __rmul__ = __mul__


def _skew(M: np.ndarray) -> np.ndarray:
    return 0.5 * (M - M.conj().T)


def _sym(M: np.ndarray) -> np.ndarray:
    return 0.5 * (M + M.conj().T)


def tangent_project(base: GroupPair, E) -> TangentPair:
    """Orthogonal projection of the ambient pair E onto the tangent space at base.

    X_Q = Q skew(Q^* E_Q) and likewise for Z; idempotent and self-adjoint for
    the real trace inner product.
    """
    EQ, EZ = (E.XQ, E.XZ) if isinstance(E, TangentPair) else E
    XQ = base.Q @ _skew(base.Q.conj().T @ EQ)
    XZ = base.Z @ _skew(base.Z.conj().T @ EZ)
    return TangentPair(XQ, XZ)


def _qr_positive(M: np.ndarray) -> np.ndarray:
    """Q factor of M with the R diagonal rotated to be real positive."""
    Qf, R = np.linalg.qr(M)
    d = np.diagonal(R).copy()
    mags = np.abs(d)
    if np.any(mags <= 1e-12 * max(1.0, float(mags.max(initial=0.0)))):
        raise RetractionError("rank-deficient matrix in QR retraction")
    return Qf * (d / mags)


def retract(base: GroupPair, X: TangentPair, t: float = 1.0) -> GroupPair:
    """QR retraction: orthonormal factor of base + t*X, first order in t."""
    Q = _qr_positive(base.Q + t * X.XQ)
    Z = _qr_positive(base.Z + t * X.XZ)
    return GroupPair(Q, Z, base.field)


def inner(X: TangentPair, Y: TangentPair) -> float:
    """Re(trace(XQ^* YQ) + trace(XZ^* YZ))."""
    return float(
        np.sum((np.conj(X.XQ) * Y.XQ).real) + np.sum((np.conj(X.XZ) * Y.XZ).real)
    )


def norm(X: TangentPair) -> float:
    return float(np.sqrt(inner(X, X)))


def egrad_to_rgrad(base: GroupPair, egrad) -> TangentPair:
    """Riemannian gradient: tangent projection of the Euclidean gradient pair."""
    return tangent_project(base, egrad)


def ehess_to_rhess(base: GroupPair, egrad, ehessvec, X: TangentPair) -> TangentPair:
    """Riemannian Hessian along X from Euclidean gradient and Hessian-vector.

    Projection of ehessvec minus the Weingarten correction X * sym(Q^* egrad)
    per factor (embedded-submanifold formula for the unitary group).
    """
    GQ, GZ = (egrad.XQ, egrad.XZ) if isinstance(egrad, TangentPair) else egrad
    HQ, HZ = (ehessvec.XQ, ehessvec.XZ) if isinstance(ehessvec, TangentPair) else ehessvec
    corrQ = X.XQ @ _sym(base.Q.conj().T @ GQ)
    corrZ = X.XZ @ _sym(base.Z.conj().T @ GZ)
    return tangent_project(base, (HQ - corrQ, HZ - corrZ))


def _gaussian(n: int, field: Field, rng: np.random.Generator) -> np.ndarray:
    if field is Field.REAL:
        return rng.standard_normal((n, n))
    return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))


def random_point(n: int, field: Field, rng: np.random.Generator) -> GroupPair:
    """Haar-distributed pair via QR of Gaussian matrices (positive-diagonal fix)."""
    return GroupPair(_qr_positive(_gaussian(n, field, rng)),
                     _qr_positive(_gaussian(n, field, rng)), field)


def random_tangent(base: GroupPair, rng: np.random.Generator) -> TangentPair:
    """Unit-norm tangent vector: projected Gaussian ambient pair."""
    n = base.n
    X = tangent_project(base, (_gaussian(n, base.field, rng), _gaussian(n, base.field, rng)))
    nx = norm(X)
    if nx == 0.0:
        raise ValueError("degenerate random tangent (zero projection)")
    return X * (1.0 / nx)


def identity_pair(n: int, field: Field) -> GroupPair:
    eye = np.eye(n, dtype=field.dtype)
    return GroupPair(eye.copy(), eye.copy(), field)


def manifold_dim(n: int, field: Field) -> int:
    """Real dimension of the product group: 2n^2 complex, n(n-1) real."""
    return 2 * n * n if field is Field.COMPLEX else n * (n - 1)
