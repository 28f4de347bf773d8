"""Test-problem pencil generators.

grcar:      x I - M with M the banded Toeplitz grcar matrix (diagonal and three
            superdiagonals 1, first subdiagonal -1).
oscillator: the damped mass-spring chain x B - (J - R) Q block pencil with
            m = c = k = [1..n]; size 2n.
gaussian:   i.i.d. standard normal entries scaled by 1/(sqrt(2) n) so the
            expected squared Frobenius norm of a real pencil is 1.
"""

from __future__ import annotations

import numpy as np

from .pencil import Field, Pencil

__all__ = ["gen_grcar", "gen_oscillator", "gen_gaussian", "truncate_rank", "chain_matrix"]


def gen_grcar(n: int) -> Pencil:
    """Pencil -M + x I for the n x n grcar matrix M."""
    if n < 1:
        raise ValueError("n must be positive")
    M = np.zeros((n, n))
    for k in (0, 1, 2, 3):
        M += np.diag(np.ones(n - k), k) if k < n else 0.0
    if n > 1:
        M -= np.diag(np.ones(n - 1), -1)
    return Pencil(-M, np.eye(n), Field.REAL)


def chain_matrix(coeffs: np.ndarray) -> np.ndarray:
    """Tridiagonal n-mass chain matrix from per-element coefficients.

    Diagonal c_i + c_{i+1} (with c_{n+1} = 0, free end), off-diagonals -c_{i+1}.
    """
    c = np.asarray(coeffs, dtype=float)
    n = c.shape[0]
    K = np.zeros((n, n))
    for i in range(n):
        K[i, i] = c[i] + (c[i + 1] if i + 1 < n else 0.0)
        if i + 1 < n:
            K[i, i + 1] = -c[i + 1]
            K[i + 1, i] = -c[i + 1]
    return K


def gen_oscillator(n: int, eps: float) -> Pencil:
    """Damped oscillator pencil A + xB of size 2n.

    B = diag(M, I), A = -(J - R) Q with J = [[0, -I], [I, 0]],
    R = diag(C, -eps I), Q = diag(I, K), where M = diag(1..n) and C, K are the
    chain matrices built from c = k = [1..n].
    """
    if n < 1:
        raise ValueError("n must be positive")
    m = np.arange(1.0, n + 1.0)
    M = np.diag(m)
    C = chain_matrix(m)
    K = chain_matrix(m)
    eye = np.eye(n)
    zero = np.zeros((n, n))
    B = np.block([[M, zero], [zero, eye]])
    J = np.block([[zero, -eye], [eye, zero]])
    R = np.block([[C, zero], [zero, -eps * eye]])
    Qm = np.block([[eye, zero], [zero, K]])
    A = -(J - R) @ Qm
    return Pencil(A, B, Field.REAL)


def gen_gaussian(n: int, field: Field, rng: np.random.Generator) -> Pencil:
    """Random Gaussian pencil scaled by 1/(sqrt(2) n)."""
    scale = 1.0 / (np.sqrt(2.0) * n)
    if field is Field.REAL:
        A = rng.standard_normal((n, n)) * scale
        B = rng.standard_normal((n, n)) * scale
    else:
        A = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) * scale
        B = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) * scale
    return Pencil(A, B, field)


def truncate_rank(P: Pencil, r: int) -> Pencil:
    """Replace B by its best rank-r approximation (leading singular triplets)."""
    if r < 0 or r > P.n:
        raise ValueError(f"rank must be in [0, {P.n}], got {r}")
    U, s, Vh = np.linalg.svd(P.B)
    Br = (U[:, :r] * s[:r]) @ Vh[:r]
    return Pencil(P.A, Br, P.field)
