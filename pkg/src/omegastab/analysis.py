"""Recover and validate the nearest stable pencil from a solved group pair.

The minimizer in the original basis is Q* T(QAZ + xQBZ) Z*.  Its eigenvalues
are read from the triangular form (never from a general eigensolver: the
triangular basis is exact by construction).  A diagonal entry that vanished
marks a singular closure point; such minimizers can be regularized by giving
every vanished entry the eigenvalue 0, which lies in both regions.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass

import numpy as np

from .manifold import GroupPair
from .objective import ObjectiveWorkspace
from .pencil import (
    EigKind,
    GeneralizedEigenvalue,
    Pencil,
    norm_sq,
    numerical_rank,
    triangular_eigenvalues,
)
from .projection import StabilityRegion, is_stable_scalar

__all__ = [
    "MinimizerResult",
    "JordanCluster",
    "JordanReport",
    "StabilityVerdict",
    "recover_minimizer",
    "verify_stability",
    "jordan_structure",
    "regularize_singular",
    "CLUSTER_TOL",
]

CLUSTER_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class MinimizerResult:
    pencil: Pencil
    triangular: Pencil
    transforms: GroupPair
    squared_distance: float
    eigenvalues: list[GeneralizedEigenvalue]
    is_singular: bool


@dataclass(frozen=True, eq=False)
class JordanCluster:
    eigenvalue: GeneralizedEigenvalue
    algebraic_multiplicity: int
    geometric_multiplicity: int


@dataclass(frozen=True, eq=False)
class JordanReport:
    clusters: list[JordanCluster]
    has_nontrivial_chain: bool
    tol: float


class StabilityVerdict(enum.Enum):
    STABLE = "stable"
    SINGULAR_CLOSURE_POINT = "singular_closure_point"
    VIOLATION = "violation"


def recover_minimizer(region: StabilityRegion, P: Pencil, G: GroupPair,
                      tol: float = 1e-12) -> MinimizerResult:
    """Nearest stable pencil determined by (Q, Z): Q* T(QPZ) Z* and its spectrum."""
    G.validate()
    ws = ObjectiveWorkspace(region, P)
    pt = ws.point(G.Q, G.Z)
    triangular = Pencil(pt.T0, pt.T1, P.field)
    QH = G.Q.conj().T
    ZH = G.Z.conj().T
    pencil = Pencil(QH @ pt.T0 @ ZH, QH @ pt.T1 @ ZH, P.field)
    eigenvalues = triangular_eigenvalues(triangular, tol)
    return MinimizerResult(
        pencil=pencil,
        triangular=triangular,
        transforms=G,
        squared_distance=float(pt.value),
        eigenvalues=eigenvalues,
        is_singular=any(e.kind is EigKind.INDETERMINATE for e in eigenvalues),
    )


def verify_stability(region: StabilityRegion, result: MinimizerResult,
                     tol: float) -> StabilityVerdict:
    """Check every diagonal entry of the triangular minimizer against the region.

    VIOLATION flags an optimizer or projection bug; a vanished diagonal entry
    alongside otherwise stable ones is a singular closure point.
    """
    saw_indeterminate = False
    for i, eig in enumerate(result.eigenvalues):
        if eig.kind is EigKind.INDETERMINATE:
            saw_indeterminate = True
            continue
        if not is_stable_scalar(region, result.triangular.diag(i), tol):
            return StabilityVerdict.VIOLATION
    return (
        StabilityVerdict.SINGULAR_CLOSURE_POINT
        if saw_indeterminate
        else StabilityVerdict.STABLE
    )


def _cluster_indices(eigs: list[GeneralizedEigenvalue], cluster_tol: float) -> list[list[int]]:
    """Single-linkage clustering in the chordal metric (union-find, n is small)."""
    m = len(eigs)
    parent = list(range(m))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(m):
        for j in range(i + 1, m):
            if eigs[i].chordal_distance(eigs[j]) <= cluster_tol:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[ri] = rj
    groups: dict[int, list[int]] = {}
    for i in range(m):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def jordan_structure(result: MinimizerResult, tol: float,
                     cluster_tol: float = CLUSTER_TOL) -> JordanReport:
    """Cluster the spectrum on the Riemann sphere and compare multiplicities.

    Algebraic multiplicity is the cluster size; geometric multiplicity is
    n - rank(A + lambda B) at the cluster representative (n - rank(B) for the
    cluster at infinity).  A cluster with algebraic > geometric multiplicity
    is a nontrivial Jordan chain.
    """
    regular = [e for e in result.eigenvalues if e.kind is not EigKind.INDETERMINATE]
    if len(regular) < len(result.eigenvalues):
        warnings.warn(
            "singular minimizer: indeterminate diagonal entries excluded from "
            "Jordan clustering",
            stacklevel=2,
        )
    n = result.triangular.n
    A = result.triangular.A
    B = result.triangular.B
    scale = float(np.sqrt(norm_sq(result.triangular)))
    clusters = []
    nontrivial = False
    for idx in _cluster_indices(regular, cluster_tol):
        members = [regular[i] for i in idx]
        infinite = [e for e in members if e.kind is EigKind.INFINITE]
        if infinite:
            rep = infinite[0]
            rank = numerical_rank(B, tol * scale)
        else:
            rep = max(members, key=lambda e: abs(e.b))
            lam = rep.value
            rank = numerical_rank(A + lam * B, tol * scale)
        algebraic = len(members)
        geometric = n - rank
        nontrivial = nontrivial or algebraic > geometric
        clusters.append(JordanCluster(rep, algebraic, geometric))
    return JordanReport(clusters=clusters, has_nontrivial_chain=nontrivial, tol=tol)


def regularize_singular(region: StabilityRegion, result: MinimizerResult,
                        delta: float) -> Pencil:
    """Replace every vanished diagonal entry of the triangular form by (0, delta).

    The replacement creates the eigenvalue 0, which belongs to both closed
    regions, and moves the pencil by at most delta * sqrt(#replaced entries).
    The returned pencil lives in the original basis.
    """
    if not result.is_singular:
        raise ValueError("regularize_singular requires a singular minimizer")
    T0 = result.triangular.A.copy()
    T1 = result.triangular.B.copy()
    for i, eig in enumerate(result.eigenvalues):
        if eig.kind is EigKind.INDETERMINATE:
            T0[i, i] = 0.0
            T1[i, i] = delta
    QH = result.transforms.Q.conj().T
    ZH = result.transforms.Z.conj().T
    return Pencil(QH @ T0 @ ZH, QH @ T1 @ ZH, result.pencil.field)
