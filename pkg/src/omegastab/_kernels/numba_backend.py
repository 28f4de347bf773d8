"""Numba-jitted projection kernels: per-entry loops, one pass, no temporaries.

Mirrors numpy_backend exactly (same signatures, same branch codes).  The loops
compile for float64 and complex128 inputs; scalar .conjugate()/.real keep the
code dtype-generic.
"""

from __future__ import annotations

import numpy as np
from numba import njit

HURWITZ = 0
SCHUR = 1

STABLE = 0
UNSTABLE = 1
MEDIAL = 2

MEDIAL_ALPHA_TOL = 1e-10
_SQRT2_HALF = np.sqrt(2.0) / 2.0


@njit(cache=True)
def diag_project(region, da, db):
    n = da.shape[0]
    pa = np.empty_like(da)
    pb = np.empty_like(db)
    q = np.zeros(n)
    branch = np.zeros(n, dtype=np.int8)
    lam = np.full(n, np.nan)
    alpha = np.full(n, np.nan)
    for i in range(n):
        a = da[i]
        b = db[i]
        if region == HURWITZ:
            inner = (a.conjugate() * b).real
            if inner >= 0.0:
                pa[i] = a
                pb[i] = b
            else:
                al = (abs(a) ** 2 + abs(b) ** 2) / (2.0 * inner)
                if al >= -1.0 - MEDIAL_ALPHA_TOL:
                    branch[i] = MEDIAL
                    pa[i] = a
                    pb[i] = 0.0
                    q[i] = abs(b)
                else:
                    w = np.sqrt(max(al * al - 1.0, 0.0))
                    lm = 1.0 / (al - w)
                    u = 1.0 - lm * lm
                    branch[i] = UNSTABLE
                    pa[i] = (a - lm * b) / u
                    pb[i] = (b - lm * a) / u
                    q[i] = np.sqrt(inner * lm)
                    lam[i] = lm
                    alpha[i] = al
        else:
            ma = abs(a)
            mb = abs(b)
            if ma <= mb:
                pa[i] = a
                pb[i] = b
            elif mb == 0.0:
                branch[i] = MEDIAL
                pa[i] = 0.5 * a
                pb[i] = 0.5 * a
                q[i] = _SQRT2_HALF * ma
            else:
                half = 0.5 * (ma + mb)
                branch[i] = UNSTABLE
                pa[i] = (a / ma) * half
                pb[i] = (b / mb) * half
                q[i] = _SQRT2_HALF * (ma - mb)
    return pa, pb, q, branch, lam, alpha


@njit(cache=True)
def diag_dproject(region, da, db, ta, tb, branch, lam, alpha):
    n = da.shape[0]
    ha = np.empty_like(ta)
    hb = np.empty_like(tb)
    for i in range(n):
        if branch[i] != UNSTABLE:
            ha[i] = ta[i]
            hb[i] = tb[i]
            continue
        a = da[i]
        b = db[i]
        c = ta[i]
        d = tb[i]
        if region == HURWITZ:
            inner = (a.conjugate() * b).real
            nrm2 = abs(a) ** 2 + abs(b) ** 2
            al = alpha[i]
            lm = lam[i]
            w = np.sqrt(al * al - 1.0)
            dal = ((a.conjugate() * c).real + (b.conjugate() * d).real) / inner - nrm2 / (
                2.0 * inner * inner
            ) * ((b.conjugate() * c).real + (a.conjugate() * d).real)
            dlm = (lm / w) * dal
            u = 1.0 - lm * lm
            coef = 2.0 * lm * dlm / (u * u)
            ha[i] = (c - lm * d - dlm * b) / u + coef * (a - lm * b)
            hb[i] = (d - lm * c - dlm * a) / u + coef * (b - lm * a)
        else:
            ma = abs(a)
            mb = abs(b)
            sac = (a.conjugate() * c).real
            sbd = (b.conjugate() * d).real
            ha[i] = 0.5 * (c + (sbd / (ma * mb)) * a - (sac * mb / ma**3) * a + (mb / ma) * c)
            hb[i] = 0.5 * (d + (sac / (ma * mb)) * b - (sbd * ma / mb**3) * b + (ma / mb) * d)
    return ha, hb


@njit(cache=True)
def target_residual(region, S0, S1):
    n = S0.shape[0]
    da = np.empty(n, dtype=S0.dtype)
    db = np.empty(n, dtype=S1.dtype)
    for i in range(n):
        da[i] = S0[i, i]
        db[i] = S1[i, i]
    pa, pb, q, branch, lam, alpha = diag_project(region, da, db)
    T0 = np.zeros_like(S0)
    T1 = np.zeros_like(S1)
    R0 = np.zeros_like(S0)
    R1 = np.zeros_like(S1)
    value = 0.0
    for i in range(n):
        for j in range(i):
            R0[i, j] = S0[i, j]
            R1[i, j] = S1[i, j]
            value += abs(S0[i, j]) ** 2 + abs(S1[i, j]) ** 2
        T0[i, i] = pa[i]
        T1[i, i] = pb[i]
        R0[i, i] = da[i] - pa[i]
        R1[i, i] = db[i] - pb[i]
        value += q[i] * q[i]
        for j in range(i + 1, n):
            T0[i, j] = S0[i, j]
            T1[i, j] = S1[i, j]
    return T0, T1, R0, R1, value, q, branch, lam, alpha, da, db


@njit(cache=True)
def objective_value(region, S0, S1):
    n = S0.shape[0]
    da = np.empty(n, dtype=S0.dtype)
    db = np.empty(n, dtype=S1.dtype)
    value = 0.0
    for i in range(n):
        da[i] = S0[i, i]
        db[i] = S1[i, i]
        for j in range(i):
            value += abs(S0[i, j]) ** 2 + abs(S1[i, j]) ** 2
    _, _, q, _, _, _ = diag_project(region, da, db)
    for i in range(n):
        value += q[i] * q[i]
    return value


@njit(cache=True)
def hessian_terms(region, DS0, DS1, da, db, branch, lam, alpha):
    n = DS0.shape[0]
    ta = np.empty(n, dtype=DS0.dtype)
    tb = np.empty(n, dtype=DS1.dtype)
    for i in range(n):
        ta[i] = DS0[i, i]
        tb[i] = DS1[i, i]
    ha, hb = diag_dproject(region, da, db, ta, tb, branch, lam, alpha)
    M0 = np.zeros_like(DS0)
    M1 = np.zeros_like(DS1)
    for i in range(n):
        for j in range(i):
            M0[i, j] = DS0[i, j]
            M1[i, j] = DS1[i, j]
        M0[i, i] = ta[i] - ha[i]
        M1[i, i] = tb[i] - hb[i]
    return M0, M1
