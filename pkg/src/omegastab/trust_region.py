"""Riemannian trust-region solver with a Steihaug-Toint truncated CG inner loop.

Classical template: minimize the quadratic model m(s) = <g, s> + 0.5 <Hs, s>
over ||s|| <= Delta with truncated CG (stops on negative curvature, trust
boundary, small residual or iteration cap), accept when the actual-to-model
reduction ratio rho clears rho_prime, quarter/double the radius by the usual
rules.  Medial-axis Hessian trouble falls back to the one-sided branch rather
than aborting; trust-region convergence tolerates inexact Hessians.
"""

from __future__ import annotations

import enum
import time
from dataclasses import dataclass, field, replace
from typing import Callable, NamedTuple

import numpy as np

from . import manifold
from .manifold import GroupPair, RetractionError, TangentPair
from .objective import ObjectiveWorkspace
from .pencil import Field, Pencil, norm_sq
from .projection import StabilityRegion

__all__ = [
    "SolveOptions",
    "SolveReport",
    "StopReason",
    "TcgReason",
    "TcgResult",
    "TraceRow",
    "solve",
    "tcg_subproblem",
    "gradient_check",
    "hessian_check",
]


class StopReason(enum.Enum):
    GRAD_TOL = "grad_tol"
    MAX_ITER = "max_iter"
    MAX_TIME = "max_time"


class TcgReason(enum.Enum):
    NEGATIVE_CURVATURE = "negative_curvature"
    BOUNDARY = "boundary"
    RESIDUAL_SMALL = "residual_small"
    MAX_INNER = "max_inner"
    MODEL_INCREASED = "model_increased"


class TraceRow(NamedTuple):
    iteration: int
    f: float
    grad_norm: float
    radius: float
    step_accepted: bool


class TcgResult(NamedTuple):
    step: object
    reason: TcgReason
    hess_step: object
    model_decrease: float
    iterations: int


@dataclass
class SolveOptions:
    """Solver configuration; None fields resolve to pencil-dependent defaults."""

    max_iter: int = 1000
    max_time: float | None = None
    grad_tol: float | None = None      # default 1e-8 * max(1, ||P||_F)
    delta_bar: float | None = None     # default sqrt(2n)
    delta0: float | None = None        # default delta_bar / 8
    rho_prime: float = 0.1
    tcg_max_inner: int | None = None   # default manifold dimension
    tcg_kappa: float = 0.1
    tcg_theta: float = 1.0
    seed: int = 0
    init: str | GroupPair = "identity"  # "identity" | "random" | explicit pair

    def resolved(self, P: Pencil) -> "SolveOptions":
        n = P.n
        delta_bar = self.delta_bar if self.delta_bar is not None else float(np.sqrt(2 * n))
        opts = replace(
            self,
            delta_bar=delta_bar,
            delta0=self.delta0 if self.delta0 is not None else delta_bar / 8.0,
            grad_tol=self.grad_tol
            if self.grad_tol is not None
            else 1e-8 * max(1.0, float(np.sqrt(norm_sq(P)))),
            tcg_max_inner=self.tcg_max_inner
            if self.tcg_max_inner is not None
            else manifold.manifold_dim(n, P.field),
        )
        opts.validate()
        return opts

    def validate(self):
        if not (self.delta0 is None or self.delta_bar is None):
            if not 0.0 < self.delta0 <= self.delta_bar:
                raise ValueError("require 0 < delta0 <= delta_bar")
        if not 0.0 <= self.rho_prime < 0.25:
            raise ValueError("require 0 <= rho_prime < 1/4")
        if self.grad_tol is not None and not self.grad_tol > 0.0:
            raise ValueError("require grad_tol > 0")
        if self.max_iter < 0:
            raise ValueError("require max_iter >= 0")
        if not isinstance(self.init, GroupPair) and self.init not in ("identity", "random"):
            raise ValueError(f"unknown init {self.init!r}")


@dataclass
class SolveReport:
    minimizer: GroupPair
    objective_value: float
    grad_norm: float
    iterations: int
    wall_time: float
    trace: list[TraceRow] = field(default_factory=list)
    stop_reason: StopReason = StopReason.MAX_ITER


def _default_inner(g) -> Callable:
    if isinstance(g, TangentPair):
        return manifold.inner
    return lambda x, y: float(np.sum((np.conj(x) * y).real))


def tcg_subproblem(g, hess_apply, delta: float, *, inner=None,
                   kappa: float = 0.1, theta: float = 1.0,
                   max_inner: int = 100) -> TcgResult:
    """Steihaug-Toint truncated CG for min <g,s> + 0.5 <Hs,s>, ||s|| <= delta.

    Works on any vector type supporting +, - and scalar * (TangentPair or
    plain ndarray); `inner` defaults accordingly.  The returned step never
    exceeds the radius and achieves at least the Cauchy decrease.
    """
    if delta <= 0.0:
        raise ValueError("trust radius must be positive")
    if inner is None:
        inner = _default_inner(g)
    g_norm = np.sqrt(inner(g, g))
    zero = 0.0 * g
    if g_norm == 0.0:
        return TcgResult(zero, TcgReason.RESIDUAL_SMALL, zero, 0.0, 0)
    stop_tol = g_norm * min(kappa, g_norm**theta)

    s = zero
    Hs = zero
    r = g
    d = -r
    e_e = 0.0
    r_r = g_norm * g_norm
    d_d = r_r
    e_d = 0.0
    model_value = 0.0
    reason = TcgReason.MAX_INNER
    iterations = 0

    for _ in range(max_inner):
        iterations += 1
        Hd = hess_apply(d)
        d_Hd = inner(d, Hd)
        if d_Hd <= 0.0:
            tau = (-e_d + np.sqrt(e_d * e_d + d_d * (delta * delta - e_e))) / d_d
            s = s + tau * d
            Hs = Hs + tau * Hd
            reason = TcgReason.NEGATIVE_CURVATURE
            break
        alpha = r_r / d_Hd
        e_e_new = e_e + 2.0 * alpha * e_d + alpha * alpha * d_d
        if e_e_new >= delta * delta:
            tau = (-e_d + np.sqrt(e_d * e_d + d_d * (delta * delta - e_e))) / d_d
            s = s + tau * d
            Hs = Hs + tau * Hd
            reason = TcgReason.BOUNDARY
            break
        s_new = s + alpha * d
        Hs_new = Hs + alpha * Hd
        model_new = inner(g, s_new) + 0.5 * inner(s_new, Hs_new)
        if model_new >= model_value:
            # numerical-noise guard; keep the best-so-far iterate
            reason = TcgReason.MODEL_INCREASED
            break
        s, Hs, model_value, e_e = s_new, Hs_new, model_new, e_e_new
        r = r + alpha * Hd
        r_r_new = inner(r, r)
        if np.sqrt(r_r_new) <= stop_tol:
            reason = TcgReason.RESIDUAL_SMALL
            break
        beta = r_r_new / r_r
        r_r = r_r_new
        d = beta * d - r
        e_d = beta * (e_d + alpha * d_d)
        d_d = r_r + beta * beta * d_d

    decrease = -(inner(g, s) + 0.5 * inner(s, Hs))
    return TcgResult(s, reason, Hs, float(decrease), iterations)


def _initial_point(region, P: Pencil, opts: SolveOptions) -> GroupPair:
    if isinstance(opts.init, GroupPair):
        pair = opts.init
        if pair.field is not P.field or pair.n != P.n:
            raise ValueError("provided initial point does not match the pencil")
        return pair.validate()
    if opts.init == "identity":
        return manifold.identity_pair(P.n, P.field)
    rng = np.random.default_rng(opts.seed)
    return manifold.random_point(P.n, P.field, rng)


def _retract_safe(x: GroupPair, s: TangentPair) -> GroupPair:
    t = 1.0
    for _ in range(8):
        try:
            return manifold.retract(x, s, t)
        except RetractionError:
            t *= 0.5
    raise RetractionError("retraction failed even after step halving")


def solve(region: StabilityRegion, P: Pencil, opts: SolveOptions | None = None) -> SolveReport:
    """Minimize the Schur-residual objective over the group pair manifold."""
    opts = (opts if opts is not None else SolveOptions()).resolved(P)
    ws = ObjectiveWorkspace(region, P)
    x = _initial_point(region, P, opts)
    t0 = time.perf_counter()

    def point_state(pair: GroupPair):
        pt = ws.point(pair.Q, pair.Z)
        eg = ws.egrad(pt)
        rg = manifold.egrad_to_rgrad(pair, eg)
        return pt, eg, rg

    pt, eg, rg = point_state(x)
    f = float(pt.value)
    gn = manifold.norm(rg)
    delta = opts.delta0
    trace = [TraceRow(0, f, gn, delta, False)]
    k = 0
    stop = StopReason.MAX_ITER

    while True:
        if gn <= opts.grad_tol:
            stop = StopReason.GRAD_TOL
            break
        if k >= opts.max_iter:
            stop = StopReason.MAX_ITER
            break
        if opts.max_time is not None and time.perf_counter() - t0 >= opts.max_time:
            stop = StopReason.MAX_TIME
            break

        MQ = x.Q.conj().T @ eg[0]
        MZ = x.Z.conj().T @ eg[1]
        symQ = 0.5 * (MQ + MQ.conj().T)
        symZ = 0.5 * (MZ + MZ.conj().T)

        def hess_apply(X: TangentPair) -> TangentPair:
            HQ, HZ = ws.ehess(pt, X.XQ, X.XZ, medial_fallback=True)
            return manifold.tangent_project(
                x, (HQ - X.XQ @ symQ, HZ - X.XZ @ symZ)
            )

        res = tcg_subproblem(
            rg, hess_apply, delta,
            inner=manifold.inner,
            kappa=opts.tcg_kappa, theta=opts.tcg_theta,
            max_inner=opts.tcg_max_inner,
        )
        x_prop = _retract_safe(x, res.step)
        f_prop = ws.value_at(x_prop.Q, x_prop.Z)

        reg = 1e-15 * max(1.0, abs(f))
        rho = (f - f_prop + reg) / (res.model_decrease + reg)
        accept = res.model_decrease > 0.0 and rho >= opts.rho_prime and f_prop <= f
        if rho < 0.25 or not accept:
            delta = delta / 4.0
        elif rho > 0.75 and res.reason in (TcgReason.NEGATIVE_CURVATURE, TcgReason.BOUNDARY):
            delta = min(2.0 * delta, opts.delta_bar)

        if accept:
            if x_prop.orthogonality_defect() > manifold.ORTHO_TOL:
                x_prop = GroupPair(
                    manifold._qr_positive(x_prop.Q),
                    manifold._qr_positive(x_prop.Z),
                    x_prop.field,
                )
            x = x_prop
            pt, eg, rg = point_state(x)
            f = float(pt.value)
            gn = manifold.norm(rg)

        k += 1
        trace.append(TraceRow(k, f, gn, delta, accept))

    return SolveReport(
        minimizer=x,
        objective_value=f,
        grad_norm=gn,
        iterations=k,
        wall_time=time.perf_counter() - t0,
        trace=trace,
        stop_reason=stop,
    )


def _ambient_directions(n: int, field: Field, rng: np.random.Generator):
    if field is Field.REAL:
        EQ = rng.standard_normal((n, n))
        EZ = rng.standard_normal((n, n))
    else:
        EQ = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        EZ = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    scale = np.sqrt(np.sum(np.abs(EQ) ** 2) + np.sum(np.abs(EZ) ** 2))
    return EQ / scale, EZ / scale


def _pair_inner(AQ, AZ, BQ, BZ) -> float:
    return float(np.sum((np.conj(AQ) * BQ).real) + np.sum((np.conj(AZ) * BZ).real))


def gradient_check(region: StabilityRegion, P: Pencil, point: GroupPair,
                   num_dirs: int, h: float = 1e-6, seed: int = 0) -> float:
    """Worst relative error of <grad f, E> against central differences of f.

    Uses the ambient extension of f (the formula is defined for arbitrary
    matrices), so no retraction enters the check.
    """
    ws = ObjectiveWorkspace(region, P)
    pt = ws.point(point.Q, point.Z)
    GQ, GZ = ws.egrad(pt)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(num_dirs):
        EQ, EZ = _ambient_directions(P.n, P.field, rng)
        analytic = _pair_inner(GQ, GZ, EQ, EZ)
        fp = ws.value_at(point.Q + h * EQ, point.Z + h * EZ)
        fm = ws.value_at(point.Q - h * EQ, point.Z - h * EZ)
        fd = (fp - fm) / (2.0 * h)
        rel = abs(analytic - fd) / max(1.0, abs(analytic), abs(fd))
        worst = max(worst, rel)
    return worst


def hessian_check(region: StabilityRegion, P: Pencil, point: GroupPair,
                  num_dirs: int, h: float = 1e-5, seed: int = 0) -> float:
    """Worst relative error of the Hessian-vector product against central
    differences of the Euclidean gradient."""
    ws = ObjectiveWorkspace(region, P)
    pt = ws.point(point.Q, point.Z)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(num_dirs):
        EQ, EZ = _ambient_directions(P.n, P.field, rng)
        HQ, HZ = ws.ehess(pt, EQ, EZ, medial_fallback=False)
        ptp = ws.point(point.Q + h * EQ, point.Z + h * EZ)
        ptm = ws.point(point.Q - h * EQ, point.Z - h * EZ)
        GQp, GZp = ws.egrad(ptp)
        GQm, GZm = ws.egrad(ptm)
        FQ = (GQp - GQm) / (2.0 * h)
        FZ = (GZp - GZm) / (2.0 * h)
        err = np.sqrt(np.sum(np.abs(HQ - FQ) ** 2) + np.sum(np.abs(HZ - FZ) ** 2))
        na = np.sqrt(np.sum(np.abs(HQ) ** 2) + np.sum(np.abs(HZ) ** 2))
        nf = np.sqrt(np.sum(np.abs(FQ) ** 2) + np.sum(np.abs(FZ) ** 2))
        rel = err / max(1.0, na, nf)
        worst = max(worst, rel)
    return worst
