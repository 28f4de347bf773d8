"""Dense complex matrix pencils A + xB: arithmetic, norms, eigenvalue extraction.

A pencil is stored as a pair of square coefficient matrices (A, B).  Complex
pencils use complex128, real pencils float64; the constructor canonicalizes the
dtype and freezes the arrays.  Eigenvalues of upper triangular pencils are read
off the diagonal as homogeneous pairs (a_ii, b_ii) with root -a_ii/b_ii, which
is far more accurate than running a general-purpose eigensolver on the
assembled matrices.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Field",
    "Pencil",
    "ScalarPencil",
    "EigKind",
    "GeneralizedEigenvalue",
    "norm_sq",
    "distance",
    "triangular_eigenvalues",
    "numerical_rank",
]


class Field(enum.Enum):
    """Scalar field of the pencil coefficients."""

    COMPLEX = "complex"
    REAL = "real"

    @property
    def dtype(self):
        return np.float64 if self is Field.REAL else np.complex128


@dataclass(frozen=True, eq=False)
class ScalarPencil:
    """A 1x1 pencil a + xb, i.e. a pair of scalars."""

    a: complex
    b: complex

    def __iter__(self):
        yield self.a
        yield self.b

    def norm(self) -> float:
        return float(np.hypot(abs(self.a), abs(self.b)))


@dataclass(frozen=True, eq=False)
class Pencil:
    """Square pencil A + xB with immutable coefficient matrices."""

    A: np.ndarray
    B: np.ndarray
    field: Field = Field.COMPLEX

    def __post_init__(self):
        A = np.array(self.A, copy=True, order="C")
        B = np.array(self.B, copy=True, order="C")
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise ValueError(f"A must be square, got shape {A.shape}")
        if B.shape != A.shape:
            raise ValueError(f"B shape {B.shape} does not match A shape {A.shape}")
        if self.field is Field.REAL:
            if np.iscomplexobj(A) and np.abs(A.imag).max(initial=0.0) != 0.0:
                raise ValueError("real-field pencil has nonzero imaginary part in A")
            if np.iscomplexobj(B) and np.abs(B.imag).max(initial=0.0) != 0.0:
                raise ValueError("real-field pencil has nonzero imaginary part in B")
        A = A.real.astype(np.float64) if self.field is Field.REAL else A.astype(np.complex128)
        B = B.real.astype(np.float64) if self.field is Field.REAL else B.astype(np.complex128)
        A.flags.writeable = False
        B.flags.writeable = False
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)

    @property
    def n(self) -> int:
        return self.A.shape[0]

    def diag(self, i: int) -> ScalarPencil:
        return ScalarPencil(complex(self.A[i, i]), complex(self.B[i, i]))


class EigKind(enum.Enum):
    FINITE = "finite"
    INFINITE = "infinite"
    INDETERMINATE = "indeterminate"


@dataclass(frozen=True, eq=False)
class GeneralizedEigenvalue:
    """Point on the Riemann sphere as a homogeneous pair (a, b), root -a/b.

    INDETERMINATE marks a diagonal entry that vanished within tolerance,
    i.e. a singular pencil.
    """

    a: complex
    b: complex
    kind: EigKind

    @property
    def value(self) -> complex:
        if self.kind is not EigKind.FINITE:
            raise ValueError(f"eigenvalue is {self.kind.value}, has no finite value")
        return -self.a / self.b

    def chordal_distance(self, other: "GeneralizedEigenvalue") -> float:
        """Chordal metric |a d - b c| / (||(a,b)|| ||(c,d)||) on the sphere."""
        na = np.hypot(abs(self.a), abs(self.b))
        nb = np.hypot(abs(other.a), abs(other.b))
        if na == 0.0 or nb == 0.0:
            raise ValueError("chordal distance undefined for the zero pair")
        return abs(self.a * other.b - self.b * other.a) / (na * nb)


def norm_sq(P: Pencil) -> float:
    """Squared Frobenius norm of the pencil: sum of |A_ij|^2 + |B_ij|^2."""
    return float(np.sum(np.abs(P.A) ** 2) + np.sum(np.abs(P.B) ** 2))


def distance(P: Pencil, R: Pencil) -> float:
    """Frobenius distance ||(A-S) + x(B-T)||_F between two pencils."""
    if P.n != R.n:
        raise ValueError(f"size mismatch: {P.n} vs {R.n}")
    dA = P.A - R.A
    dB = P.B - R.B
    return float(np.sqrt(np.sum(np.abs(dA) ** 2) + np.sum(np.abs(dB) ** 2)))


def _strict_lower_max(M: np.ndarray) -> float:
    n = M.shape[0]
    if n <= 1:
        return 0.0
    return float(np.abs(np.tril(M, -1)).max())


def triangular_eigenvalues(P: Pencil, tol: float) -> list[GeneralizedEigenvalue]:
    """Eigenvalues of an upper triangular pencil, read from the diagonal.

    The input must be upper triangular in both coefficients up to tol*||P||_F.
    A diagonal pair with max(|a_ii|, |b_ii|) <= tol*||P||_F is reported as
    INDETERMINATE (the pencil is singular); a pair with |b_ii| below the same
    threshold but nonzero a_ii is an infinite eigenvalue.
    """
    scale = float(np.sqrt(norm_sq(P)))
    thresh = tol * scale
    low = max(_strict_lower_max(P.A), _strict_lower_max(P.B))
    if low > thresh:
        raise ValueError(
            f"pencil is not upper triangular: strictly lower magnitude {low:.3e} "
            f"exceeds {thresh:.3e}"
        )
    out = []
    for i in range(P.n):
        a = complex(P.A[i, i])
        b = complex(P.B[i, i])
        if max(abs(a), abs(b)) <= thresh:
            out.append(GeneralizedEigenvalue(a, b, EigKind.INDETERMINATE))
        elif abs(b) <= thresh:
            out.append(GeneralizedEigenvalue(a, b, EigKind.INFINITE))
        else:
            out.append(GeneralizedEigenvalue(a, b, EigKind.FINITE))
    return out


def numerical_rank(M: np.ndarray, tol: float) -> int:
    """Number of singular values of M strictly greater than tol."""
    M = np.asarray(M)
    if M.size == 0:
        return 0
    s = np.linalg.svd(M, compute_uv=False)
    return int(np.count_nonzero(s > tol))
