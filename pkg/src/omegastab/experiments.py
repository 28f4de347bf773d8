"""Statistical experiment harness: size sweep, rank sweep, Jordan statistics.

Each sample owns an independent RNG seeded seed + sample_index and may run in
a separate process; OMEGA_STAB_THREADS caps the worker count (default: all
cores).  Aggregation happens in index order after collection, so results do
not depend on scheduling.  Sweeps follow the statistical-comparison protocol
(real Gaussian pencils, identity start, orthogonal groups); Jordan statistics
use complex pencils from random starts.
"""

from __future__ import annotations

import os
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .analysis import jordan_structure, recover_minimizer
from .generators import gen_gaussian, truncate_rank
from .pencil import Field, Pencil
from .projection import StabilityRegion
from .trust_region import SolveOptions, SolveReport, solve

__all__ = [
    "ExperimentRow",
    "thread_budget",
    "parallel_map",
    "solve_restarts",
    "experiment_size_sweep",
    "experiment_rank_sweep",
    "experiment_jordan_stats",
]


@dataclass(frozen=True, eq=False)
class ExperimentRow:
    """One aggregated sweep point; index is the pencil size or the rank of B."""

    index: int
    mean_distance: float
    sample_count: int
    mean_wall_time: float


def thread_budget() -> int:
    raw = os.environ.get("OMEGA_STAB_THREADS", "").strip()
    if raw:
        count = int(raw)
        if count < 1:
            raise ValueError("OMEGA_STAB_THREADS must be >= 1")
        return count
    return os.cpu_count() or 1


def parallel_map(fn, items: list):
    """Order-preserving map over items, process-parallel when allowed."""
    items = list(items)
    workers = min(thread_budget(), len(items)) if items else 1
    if workers <= 1:
        return [fn(item) for item in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _solve_seeded(args):
    region, P, opts = args
    return solve(region, P, opts)


def solve_restarts(region: StabilityRegion, P: Pencil, opts: SolveOptions,
                   restarts: int) -> tuple[SolveReport, list[SolveReport]]:
    """Best of `restarts` independent solves with seeds opts.seed + i."""
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    jobs = [(region, P, replace(opts, seed=opts.seed + i)) for i in range(restarts)]
    reports = parallel_map(_solve_seeded, jobs)
    best = min(reports, key=lambda r: r.objective_value)
    return best, reports


def _sweep_sample(args):
    region, n, rank, seed, budget = args
    try:
        rng = np.random.default_rng(seed)
        P = gen_gaussian(n, Field.REAL, rng)
        if rank is not None:
            P = truncate_rank(P, rank)
        opts = SolveOptions(init="identity", seed=seed, max_time=budget)
        report = solve(region, P, opts)
        return float(np.sqrt(report.objective_value)), report.wall_time, True
    except Exception:
        return float("nan"), float("nan"), False


def _aggregate(index: int, outcomes) -> ExperimentRow:
    good = [(d, t) for d, t, ok in outcomes if ok]
    if not good:
        raise RuntimeError(f"all samples failed at index {index}")
    dist = float(np.mean([d for d, _ in good]))
    wall = float(np.mean([t for _, t in good]))
    return ExperimentRow(index, dist, len(good), wall)


def experiment_size_sweep(sizes, samples: int, per_run_budget: float | None,
                          seed: int = 0,
                          region: StabilityRegion = StabilityRegion.HURWITZ
                          ) -> list[ExperimentRow]:
    """Mean distance to the stable set for scaled Gaussian pencils of each size."""
    rows = []
    for n in sorted(sizes):
        jobs = [(region, int(n), None, seed + i, per_run_budget) for i in range(samples)]
        rows.append(_aggregate(int(n), parallel_map(_sweep_sample, jobs)))
    return rows


def experiment_rank_sweep(n: int, ranks, samples: int,
                          per_run_budget: float | None, seed: int = 0,
                          region: StabilityRegion = StabilityRegion.HURWITZ
                          ) -> list[ExperimentRow]:
    """Same sweep with B truncated to each prescribed rank."""
    rows = []
    for r in sorted(ranks):
        jobs = [(region, n, int(r), seed + i, per_run_budget) for i in range(samples)]
        rows.append(_aggregate(int(r), parallel_map(_sweep_sample, jobs)))
    return rows


def _jordan_sample(args):
    region, n, seed, budget = args
    try:
        rng = np.random.default_rng(seed)
        P = gen_gaussian(n, Field.COMPLEX, rng)
        opts = SolveOptions(init="random", seed=seed, max_time=budget)
        report = solve(region, P, opts)
        result = recover_minimizer(region, P, report.minimizer)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            jr = jordan_structure(result, tol=1e-12)
        return bool(jr.has_nontrivial_chain), True
    except Exception:
        return False, False


def experiment_jordan_stats(n: int, samples: int, per_run_budget: float | None,
                            seed: int = 0,
                            region: StabilityRegion = StabilityRegion.HURWITZ
                            ) -> float:
    """Fraction of random complex pencils whose computed minimizer has a
    nontrivial Jordan chain."""
    jobs = [(region, n, seed + i, per_run_budget) for i in range(samples)]
    outcomes = parallel_map(_jordan_sample, jobs)
    good = [flag for flag, ok in outcomes if ok]
    if not good:
        raise RuntimeError("all Jordan-statistics samples failed")
    return float(np.mean([1.0 if flag else 0.0 for flag in good]))
