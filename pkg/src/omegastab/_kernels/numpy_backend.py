"""Pure-numpy implementations of the per-diagonal projection kernels.

Same signatures as the numba backend; selected via OMEGA_STAB_BACKEND=numpy
or automatically when numba is unavailable.  Branch codes: 0 stable (entry
already in the region, projection is the identity), 1 unstable (generic
closed-form projection), 2 medial axis (tie-broken projection).
"""

from __future__ import annotations

import numpy as np

HURWITZ = 0
SCHUR = 1

STABLE = 0
UNSTABLE = 1
MEDIAL = 2

MEDIAL_ALPHA_TOL = 1e-10
_SQRT2_HALF = np.sqrt(2.0) / 2.0


def diag_project(region, da, db):
    """Project diagonal pairs (da_i, db_i) onto the closure of the stable set.

    Returns (pa, pb, q, branch, lam, alpha); lam/alpha are NaN outside the
    Hurwitz unstable branch.
    """
    n = da.shape[0]
    pa = da.copy()
    pb = db.copy()
    q = np.zeros(n)
    branch = np.zeros(n, dtype=np.int8)
    lam = np.full(n, np.nan)
    alpha = np.full(n, np.nan)

    if region == HURWITZ:
        inner = (np.conj(da) * db).real
        uns = np.flatnonzero(inner < 0.0)
        if uns.size:
            a = da[uns]
            b = db[uns]
            inn = inner[uns]
            al = (np.abs(a) ** 2 + np.abs(b) ** 2) / (2.0 * inn)
            med = al >= -1.0 - MEDIAL_ALPHA_TOL
            gen = ~med
            i_med = uns[med]
            branch[i_med] = MEDIAL
            pa[i_med] = a[med]
            pb[i_med] = 0.0
            q[i_med] = np.abs(b[med])
            i_gen = uns[gen]
            alg = al[gen]
            w = np.sqrt(np.maximum(alg * alg - 1.0, 0.0))
            lm = 1.0 / (alg - w)
            u = 1.0 - lm * lm
            branch[i_gen] = UNSTABLE
            pa[i_gen] = (a[gen] - lm * b[gen]) / u
            pb[i_gen] = (b[gen] - lm * a[gen]) / u
            q[i_gen] = np.sqrt(inn[gen] * lm)
            lam[i_gen] = lm
            alpha[i_gen] = alg
    else:
        ma = np.abs(da)
        mb = np.abs(db)
        uns = np.flatnonzero(ma > mb)
        if uns.size:
            a = da[uns]
            b = db[uns]
            maa = ma[uns]
            mbb = mb[uns]
            med = mbb == 0.0
            gen = ~med
            i_med = uns[med]
            branch[i_med] = MEDIAL
            pa[i_med] = 0.5 * a[med]
            pb[i_med] = 0.5 * a[med]
            q[i_med] = _SQRT2_HALF * maa[med]
            i_gen = uns[gen]
            half = 0.5 * (maa[gen] + mbb[gen])
            branch[i_gen] = UNSTABLE
            pa[i_gen] = (a[gen] / maa[gen]) * half
            pb[i_gen] = (b[gen] / mbb[gen]) * half
            q[i_gen] = _SQRT2_HALF * (maa[gen] - mbb[gen])
    return pa, pb, q, branch, lam, alpha


def diag_dproject(region, da, db, ta, tb, branch, lam, alpha):
    """Directional derivative of the diagonal projection at (da, db) along (ta, tb).

    Stable and medial entries get the identity derivative (the medial case is
    the caller-selected fallback branch; callers that refuse medial input must
    check `branch` before calling).
    """
    ha = ta.copy()
    hb = tb.copy()
    uns = np.flatnonzero(branch == UNSTABLE)
    if uns.size == 0:
        return ha, hb
    a = da[uns]
    b = db[uns]
    c = ta[uns]
    d = tb[uns]
    if region == HURWITZ:
        inner = (np.conj(a) * b).real
        nrm2 = np.abs(a) ** 2 + np.abs(b) ** 2
        al = alpha[uns]
        lm = lam[uns]
        w = np.sqrt(al * al - 1.0)
        dal = ((np.conj(a) * c).real + (np.conj(b) * d).real) / inner - nrm2 / (
            2.0 * inner * inner
        ) * ((np.conj(b) * c).real + (np.conj(a) * d).real)
        dlm = (lm / w) * dal
        u = 1.0 - lm * lm
        coef = 2.0 * lm * dlm / (u * u)
        ha[uns] = (c - lm * d - dlm * b) / u + coef * (a - lm * b)
        hb[uns] = (d - lm * c - dlm * a) / u + coef * (b - lm * a)
    else:
        ma = np.abs(a)
        mb = np.abs(b)
        sac = (np.conj(a) * c).real
        sbd = (np.conj(b) * d).real
        ha[uns] = 0.5 * (c + (sbd / (ma * mb)) * a - (sac * mb / ma**3) * a + (mb / ma) * c)
        hb[uns] = 0.5 * (d + (sac / (ma * mb)) * b - (sbd * ma / mb**3) * b + (ma / mb) * d)
    return ha, hb


def target_residual(region, S0, S1):
    """Triangular target T and residual R = S - T of the rotated pencil.

    T keeps the strictly upper part of S, projects the diagonal, and zeroes
    the strictly lower part.  Returns (T0, T1, R0, R1, value, q, branch, lam,
    alpha, da, db) with value = ||R||^2.
    """
    da = np.ascontiguousarray(np.diagonal(S0))
    db = np.ascontiguousarray(np.diagonal(S1))
    pa, pb, q, branch, lam, alpha = diag_project(region, da, db)
    T0 = np.triu(S0)
    T1 = np.triu(S1)
    idx = np.arange(S0.shape[0])
    T0[idx, idx] = pa
    T1[idx, idx] = pb
    R0 = np.tril(S0)
    R1 = np.tril(S1)
    R0[idx, idx] = da - pa
    R1[idx, idx] = db - pb
    low0 = np.tril(S0, -1)
    low1 = np.tril(S1, -1)
    value = float(
        np.sum(np.abs(low0) ** 2) + np.sum(np.abs(low1) ** 2) + np.sum(q * q)
    )
    return T0, T1, R0, R1, value, q, branch, lam, alpha, da, db


def objective_value(region, S0, S1):
    """||S - T(S)||^2 without materializing T: lower-triangle energy + sum q_i^2."""
    da = np.ascontiguousarray(np.diagonal(S0))
    db = np.ascontiguousarray(np.diagonal(S1))
    _, _, q, _, _, _ = diag_project(region, da, db)
    low0 = np.tril(S0, -1)
    low1 = np.tril(S1, -1)
    return float(np.sum(np.abs(low0) ** 2) + np.sum(np.abs(low1) ** 2) + np.sum(q * q))


def hessian_terms(region, DS0, DS1, da, db, branch, lam, alpha):
    """M = L(DS) - diag(Dh) appearing in the Hessian-vector product.

    L zeroes the strictly upper part; the diagonal of M is diag(DS) minus the
    projection derivative of the corresponding diagonal entry.
    """
    ta = np.ascontiguousarray(np.diagonal(DS0))
    tb = np.ascontiguousarray(np.diagonal(DS1))
    ha, hb = diag_dproject(region, da, db, ta, tb, branch, lam, alpha)
    M0 = np.tril(DS0)
    M1 = np.tril(DS1)
    idx = np.arange(DS0.shape[0])
    M0[idx, idx] = ta - ha
    M1[idx, idx] = tb - hb
    return M0, M1
