"""Closed-form projection of a scalar pencil a + xb onto the stable set.

Identifying a + xb with (a, b) in C^2, the closure of the stable 1x1 pencils
is { Re(a conj(b)) >= 0 } for the Hurwitz region (eigenvalue -a/b in the
closed left half-plane or at infinity) and { |a| <= |b| } for the Schur
region (eigenvalue in the closed unit disc).  Both sets are cones; the
projection, its residual distance q, and its directional derivative all have
closed forms.

Hurwitz, writing inner = Re(a conj(b)) < 0 and alpha = (|a|^2+|b|^2)/(2 inner):
    lambda solves lambda^2 - 2 alpha lambda + 1 = 0, computed as
    1/(alpha - sqrt(alpha^2 - 1)) to avoid cancellation for alpha << -1;
    projection ((a - lambda b), (b - lambda a)) / (1 - lambda^2);
    q = sqrt(inner * lambda).
alpha = -1 (equivalently b = -a) is the medial axis: every point at distance
|a| sits on a circle; we deterministically pick (a, 0).

Schur, |a| > |b| > 0:
    projection ((|a|+|b|)/(2|a|) a, (|a|+|b|)/(2|b|) b), q = sqrt(2)(|a|-|b|)/2.
b = 0 is the medial axis; we pick (a/2, a/2), i.e. the representative with
eigenvalue -1 on the unit circle.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .pencil import ScalarPencil

__all__ = [
    "StabilityRegion",
    "ProjectionResult",
    "MedialAxisError",
    "is_stable_scalar",
    "project",
    "dproject",
]


class StabilityRegion(enum.Enum):
    """Target region for the pencil eigenvalues."""

    HURWITZ = "hurwitz"
    SCHUR = "schur"

    @property
    def code(self) -> int:
        return _kernels.HURWITZ if self is StabilityRegion.HURWITZ else _kernels.SCHUR


class MedialAxisError(ValueError):
    """The projection is not differentiable at this input (non-unique projection)."""


@dataclass(frozen=True, eq=False)
class ProjectionResult:
    projected: ScalarPencil
    residual_distance: float
    on_medial_axis: bool
    lam: float | None = None
    alpha: float | None = None


def is_stable_scalar(region: StabilityRegion, s: ScalarPencil, tol: float) -> bool:
    """Membership test for the closure of the stable scalar pencils, within tol."""
    a, b = complex(s.a), complex(s.b)
    if region is StabilityRegion.HURWITZ:
        return (a.conjugate() * b).real >= -tol
    return abs(a) <= abs(b) + tol


def project(region: StabilityRegion, s: ScalarPencil) -> ProjectionResult:
    """Nearest stable scalar pencil to s; total function, tie-broken on the medial axis."""
    da = np.array([s.a], dtype=np.complex128)
    db = np.array([s.b], dtype=np.complex128)
    pa, pb, q, branch, lam, alpha = _kernels.diag_project(region.code, da, db)
    medial = bool(branch[0] == _kernels.MEDIAL)
    unstable = bool(branch[0] == _kernels.UNSTABLE)
    return ProjectionResult(
        projected=ScalarPencil(complex(pa[0]), complex(pb[0])),
        residual_distance=float(q[0]),
        on_medial_axis=medial,
        lam=float(lam[0]) if unstable else None,
        alpha=float(alpha[0]) if unstable else None,
    )


def dproject(region: StabilityRegion, s: ScalarPencil, ds: ScalarPencil) -> ScalarPencil:
    """Directional derivative of project at s along ds.

    Stable inputs (boundary included) use the identity derivative; medial-axis
    inputs raise MedialAxisError.
    """
    da = np.array([s.a], dtype=np.complex128)
    db = np.array([s.b], dtype=np.complex128)
    _, _, _, branch, lam, alpha = _kernels.diag_project(region.code, da, db)
    if branch[0] == _kernels.MEDIAL:
        raise MedialAxisError(f"projection not differentiable at {s!r} (medial axis)")
    ta = np.array([ds.a], dtype=np.complex128)
    tb = np.array([ds.b], dtype=np.complex128)
    ha, hb = _kernels.diag_dproject(region.code, da, db, ta, tb, branch, lam, alpha)
    return ScalarPencil(complex(ha[0]), complex(hb[0]))
