"""The Schur-form residual objective and its Euclidean derivatives.

For a pencil A + xB and unitary pair (Q, Z), rotate to S = (QAZ, QBZ) and
measure the squared distance from S to its nearest stable upper triangular
pencil T(S): strictly upper part kept, diagonal pairs projected onto the
stable scalar set, strictly lower part zeroed.  The objective

    f(Q, Z) = ||QAZ - T0||_F^2 + ||QBZ - T1||_F^2

has Euclidean gradient (treating T as locally constant, valid off the medial
axis)

    grad_Q f = 2 (QAZ - T0)(AZ)^* + 2 (QBZ - T1)(BZ)^*
    grad_Z f = 2 (QA)^*(QAZ - T0) + 2 (QB)^*(QBZ - T1)

and a Hessian-vector product obtained by differentiating the gradient, where
the derivative of T along the rotation is the strictly-upper part of
DS = dQ A Z + Q A dZ plus the diagonal projection derivative.

ObjectiveWorkspace caches the per-problem arrays and the per-point rotated
data so the trust-region loop shares one triangular target among value,
gradient and Hessian calls at the same (Q, Z).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .manifold import GroupPair, TangentPair
from .pencil import Field, Pencil, ScalarPencil
from .projection import MedialAxisError, ProjectionResult, StabilityRegion

__all__ = [
    "TriangularTarget",
    "ObjectiveEvaluation",
    "ObjectiveWorkspace",
    "triangular_target",
    "evaluate",
    "euclidean_gradient",
    "euclidean_hessian_vec",
]


@dataclass(frozen=True, eq=False)
class TriangularTarget:
    """Nearest stable upper triangular pencil to the input, with per-diagonal data."""

    T0: np.ndarray
    T1: np.ndarray
    diag_results: list[ProjectionResult]


@dataclass(frozen=True, eq=False)
class ObjectiveEvaluation:
    value: float
    rotated: Pencil
    target: TriangularTarget
    residual: Pencil


def _herm(M: np.ndarray) -> np.ndarray:
    return np.ascontiguousarray(M.conj().T)


class _Point:
    """Everything the gradient/Hessian need at one (Q, Z)."""

    __slots__ = (
        "Q", "Z", "S0", "S1", "QA", "QB", "AZ", "BZ",
        "AZH", "BZH", "QAH", "QBH", "T0", "T1", "R0", "R1",
        "value", "q", "branch", "lam", "alpha", "da", "db",
    )


class ObjectiveWorkspace:
    """Per-problem state: the pencil coefficients and the region code."""

    def __init__(self, region: StabilityRegion, P: Pencil):
        self.region = region
        self.code = region.code
        self.P = P
        self.A = np.ascontiguousarray(P.A)
        self.B = np.ascontiguousarray(P.B)
        self.field = P.field
        self.n = P.n

    def point(self, Q: np.ndarray, Z: np.ndarray) -> _Point:
        pt = _Point()
        pt.Q = Q
        pt.Z = Z
        pt.QA = Q @ self.A
        pt.QB = Q @ self.B
        pt.S0 = pt.QA @ Z
        pt.S1 = pt.QB @ Z
        pt.AZ = self.A @ Z
        pt.BZ = self.B @ Z
        (pt.T0, pt.T1, pt.R0, pt.R1, pt.value, pt.q, pt.branch,
         pt.lam, pt.alpha, pt.da, pt.db) = _kernels.target_residual(self.code, pt.S0, pt.S1)
        pt.AZH = _herm(pt.AZ)
        pt.BZH = _herm(pt.BZ)
        pt.QAH = _herm(pt.QA)
        pt.QBH = _herm(pt.QB)
        return pt

    def value_at(self, Q: np.ndarray, Z: np.ndarray) -> float:
        """Objective value only; accepts arbitrary (non-unitary) matrices."""
        S0 = (Q @ self.A) @ Z
        S1 = (Q @ self.B) @ Z
        return float(_kernels.objective_value(self.code, S0, S1))

    def egrad(self, pt: _Point) -> tuple[np.ndarray, np.ndarray]:
        GQ = 2.0 * (pt.R0 @ pt.AZH + pt.R1 @ pt.BZH)
        GZ = 2.0 * (pt.QAH @ pt.R0 + pt.QBH @ pt.R1)
        return GQ, GZ

    def has_medial_diag(self, pt: _Point) -> bool:
        return bool(np.any(pt.branch == _kernels.MEDIAL))

    def ehess(self, pt: _Point, dQ: np.ndarray, dZ: np.ndarray,
              medial_fallback: bool = False) -> tuple[np.ndarray, np.ndarray]:
        """Directional derivative of the Euclidean gradient along (dQ, dZ).

        Medial-axis diagonal entries make the Hessian undefined; with
        medial_fallback the stable-side identity branch is used for those
        entries instead of raising.
        """
        if not medial_fallback and self.has_medial_diag(pt):
            raise MedialAxisError(
                "Hessian undefined: rotated diagonal entry on the medial axis"
            )
        DS0 = dQ @ pt.AZ + pt.QA @ dZ
        DS1 = dQ @ pt.BZ + pt.QB @ dZ
        M0, M1 = _kernels.hessian_terms(
            self.code, DS0, DS1, pt.da, pt.db, pt.branch, pt.lam, pt.alpha
        )
        AdZ = self.A @ dZ
        BdZ = self.B @ dZ
        HQ = 2.0 * (pt.R0 @ _herm(AdZ) + M0 @ pt.AZH + pt.R1 @ _herm(BdZ) + M1 @ pt.BZH)
        dQA = dQ @ self.A
        dQB = dQ @ self.B
        HZ = 2.0 * (_herm(dQA) @ pt.R0 + pt.QAH @ M0 + _herm(dQB) @ pt.R1 + pt.QBH @ M1)
        return HQ, HZ

    def target_of(self, pt: _Point) -> TriangularTarget:
        return TriangularTarget(pt.T0, pt.T1, _diag_results(pt))


def _diag_results(pt: _Point) -> list[ProjectionResult]:
    out = []
    for i in range(pt.T0.shape[0]):
        unstable = pt.branch[i] == _kernels.UNSTABLE
        out.append(
            ProjectionResult(
                projected=ScalarPencil(complex(pt.T0[i, i]), complex(pt.T1[i, i])),
                residual_distance=float(pt.q[i]),
                on_medial_axis=bool(pt.branch[i] == _kernels.MEDIAL),
                lam=float(pt.lam[i]) if unstable else None,
                alpha=float(pt.alpha[i]) if unstable else None,
            )
        )
    return out


def _check_pair(P: Pencil, G: GroupPair):
    if G.n != P.n:
        raise ValueError(f"group pair size {G.n} does not match pencil size {P.n}")
    if G.field is not P.field:
        raise ValueError(f"field mismatch: pencil {P.field}, group pair {G.field}")
    G.validate()


def _direction_arrays(D) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(D, TangentPair):
        return D.XQ, D.XZ
    dQ, dZ = D
    return np.asarray(dQ), np.asarray(dZ)


def triangular_target(region: StabilityRegion, P: Pencil) -> TriangularTarget:
    """Nearest element of the closure of the stable upper triangular pencils."""
    ws = ObjectiveWorkspace(region, P)
    eye = np.eye(P.n, dtype=P.field.dtype)
    pt = ws.point(eye, eye)
    return ws.target_of(pt)


def evaluate(region: StabilityRegion, P: Pencil, G: GroupPair) -> ObjectiveEvaluation:
    """f(Q, Z) together with the rotated pencil, its target and the residual."""
    _check_pair(P, G)
    ws = ObjectiveWorkspace(region, P)
    pt = ws.point(G.Q, G.Z)
    return ObjectiveEvaluation(
        value=float(pt.value),
        rotated=Pencil(pt.S0, pt.S1, P.field),
        target=ws.target_of(pt),
        residual=Pencil(pt.R0, pt.R1, P.field),
    )


def euclidean_gradient(region: StabilityRegion, P: Pencil, G: GroupPair):
    """Gradient of f with respect to (Q, Z) for the real trace inner product."""
    _check_pair(P, G)
    ws = ObjectiveWorkspace(region, P)
    pt = ws.point(G.Q, G.Z)
    return ws.egrad(pt)


def euclidean_hessian_vec(region: StabilityRegion, P: Pencil, G: GroupPair, D):
    """Euclidean Hessian-vector product at (Q, Z) along the ambient pair D."""
    _check_pair(P, G)
    ws = ObjectiveWorkspace(region, P)
    pt = ws.point(G.Q, G.Z)
    dQ, dZ = _direction_arrays(D)
    return ws.ehess(pt, dQ, dZ, medial_fallback=False)
