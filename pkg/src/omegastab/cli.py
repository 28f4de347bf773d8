"""Command-line interface: solve, project, generate, experiment.

Exit codes: 0 success, 2 I/O failure, 3 parse failure, 4 validation failure.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import pencilio
from .analysis import (
    jordan_structure,
    recover_minimizer,
    regularize_singular,
    verify_stability,
)
from .generators import gen_gaussian, gen_grcar, gen_oscillator, truncate_rank
from .pencil import Field, Pencil, ScalarPencil, norm_sq
from .pencilio import PencilParseError
from .projection import StabilityRegion, project
from .experiments import (
    experiment_jordan_stats,
    experiment_rank_sweep,
    experiment_size_sweep,
    solve_restarts,
)
from .trust_region import SolveOptions

EXIT_OK = 0
EXIT_IO = 2
EXIT_PARSE = 3
EXIT_INVALID = 4


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="omega-stab",
        description="Nearest Hurwitz/Schur-stable matrix pencil via Riemannian optimization",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("solve", help="compute the nearest stable pencil for a pencil file")
    ps.add_argument("--input", required=True, help="PencilFile JSON path")
    ps.add_argument("--region", choices=["hurwitz", "schur"], default="hurwitz")
    ps.add_argument("--field", choices=["complex", "real"], default=None,
                    help="override the manifold field (default: the file's field)")
    ps.add_argument("--init", choices=["identity", "random"], default="identity")
    ps.add_argument("--restarts", type=int, default=1)
    ps.add_argument("--seed", type=int, default=0)
    ps.add_argument("--max-iter", type=int, default=1000)
    ps.add_argument("--max-time", type=float, default=None, help="seconds per restart")
    ps.add_argument("--grad-tol", type=float, default=None)
    ps.add_argument("--tol", type=float, default=1e-12,
                    help="rank / eigenvalue classification tolerance")
    ps.add_argument("--delta", type=float, default=None,
                    help="regularization size for singular minimizers")
    ps.add_argument("--output", default=None, help="result JSON path")

    pp = sub.add_parser("project", help="project one scalar pencil a + xb")
    pp.add_argument("--region", choices=["hurwitz", "schur"], default="hurwitz")
    pp.add_argument("--a-re", type=float, default=0.0)
    pp.add_argument("--a-im", type=float, default=0.0)
    pp.add_argument("--b-re", type=float, default=0.0)
    pp.add_argument("--b-im", type=float, default=0.0)

    pg = sub.add_parser("generate", help="emit a PencilFile")
    pg.add_argument("--kind", choices=["grcar", "oscillator", "gaussian"], required=True)
    pg.add_argument("--n", type=int, required=True)
    pg.add_argument("--eps", type=float, default=0.1, help="oscillator damping")
    pg.add_argument("--field", choices=["complex", "real"], default="real",
                    help="gaussian pencil field")
    pg.add_argument("--seed", type=int, default=0)
    pg.add_argument("--rank", type=int, default=None,
                    help="truncate B to this rank after generation")
    pg.add_argument("--output", required=True)

    pe = sub.add_parser("experiment", help="statistical sweeps")
    pe.add_argument("what", choices=["size-sweep", "rank-sweep", "jordan"])
    pe.add_argument("--region", choices=["hurwitz", "schur"], default="hurwitz")
    pe.add_argument("--sizes", default="4,8,12,16,20,24,30",
                    help="comma-separated sizes for size-sweep")
    pe.add_argument("--ranks", default=None, help="comma-separated ranks for rank-sweep")
    pe.add_argument("--n", type=int, default=20)
    pe.add_argument("--samples", type=int, default=10)
    pe.add_argument("--budget", type=float, default=10.0, help="seconds per solve")
    pe.add_argument("--seed", type=int, default=0)
    pe.add_argument("--output", default=None, help=".dat output path for sweeps")
    return parser


def _solve_payload(region, field, P, report, result, jordan, verdict, args,
                   regularized, delta_used) -> dict:
    payload = {
        "region": region.value,
        "field": field.value,
        "input": pencilio.pencil_to_dict(P),
        "squared_distance": report.objective_value,
        "distance": float(np.sqrt(max(report.objective_value, 0.0))),
        "pencil": pencilio.pencil_to_dict(result.pencil),
        "triangular": pencilio.pencil_to_dict(result.triangular),
        "transforms": {},
        "eigenvalues": [pencilio.eigenvalue_to_dict(e) for e in result.eigenvalues],
        "is_singular": result.is_singular,
        "stability": verdict.value,
        "jordan": {
            "clusters": [
                {
                    "eigenvalue": pencilio.eigenvalue_to_dict(c.eigenvalue),
                    "algebraic_multiplicity": c.algebraic_multiplicity,
                    "geometric_multiplicity": c.geometric_multiplicity,
                }
                for c in jordan.clusters
            ],
            "has_nontrivial_chain": jordan.has_nontrivial_chain,
            "tol": jordan.tol,
        },
        "stop_reason": report.stop_reason.value,
        "iterations": report.iterations,
        "grad_norm": report.grad_norm,
        "wall_time": report.wall_time,
        "trace": [[r.iteration, r.f, r.grad_norm, r.radius, bool(r.step_accepted)]
                  for r in report.trace],
        "restarts": args.restarts,
        "seed": args.seed,
    }
    real = field is Field.REAL
    payload["transforms"].update(
        pencilio.matrix_to_fields(result.transforms.Q, "Q", real))
    payload["transforms"].update(
        pencilio.matrix_to_fields(result.transforms.Z, "Z", real))
    if regularized is not None:
        payload["regularized"] = pencilio.pencil_to_dict(regularized)
        payload["regularization_delta"] = delta_used
    return payload


def _cmd_solve(args) -> int:
    P = pencilio.read_pencil(args.input)
    field = Field(args.field) if args.field else P.field
    if field is Field.REAL and P.field is Field.COMPLEX:
        print("error: --field real requires a real pencil file", file=sys.stderr)
        return EXIT_INVALID
    if field is Field.COMPLEX and P.field is Field.REAL:
        P = Pencil(P.A.astype(complex), P.B.astype(complex), Field.COMPLEX)
    region = StabilityRegion(args.region)
    opts = SolveOptions(
        max_iter=args.max_iter,
        max_time=args.max_time,
        grad_tol=args.grad_tol,
        seed=args.seed,
        init=args.init,
    )
    report, _ = solve_restarts(region, P, opts, args.restarts)
    result = recover_minimizer(region, P, report.minimizer, tol=args.tol)
    import warnings as _warnings

    with _warnings.catch_warnings():
        _warnings.simplefilter("ignore")
        jordan = jordan_structure(result, tol=args.tol)
    verdict = verify_stability(region, result, tol=args.tol)
    regularized = None
    delta_used = None
    if result.is_singular:
        delta_used = args.delta if args.delta is not None else 1e-10 * float(
            np.sqrt(norm_sq(P)))
        regularized = regularize_singular(region, result, delta_used)
    payload = _solve_payload(region, field, P, report, result, jordan, verdict,
                             args, regularized, delta_used)
    if args.output:
        pencilio.write_result(args.output, payload)
    print(f"squared distance {report.objective_value:.12e} "
          f"({verdict.value}, stop: {report.stop_reason.value}, "
          f"iterations {report.iterations})")
    return EXIT_OK


def _cmd_project(args) -> int:
    region = StabilityRegion(args.region)
    s = ScalarPencil(complex(args.a_re, args.a_im), complex(args.b_re, args.b_im))
    res = project(region, s)
    out = {
        "projected": {
            "a_re": res.projected.a.real,
            "a_im": res.projected.a.imag,
            "b_re": res.projected.b.real,
            "b_im": res.projected.b.imag,
        },
        "residual_distance": res.residual_distance,
        "on_medial_axis": res.on_medial_axis,
        "lambda": res.lam,
        "alpha": res.alpha,
    }
    print(json.dumps(out))
    return EXIT_OK


def _cmd_generate(args) -> int:
    if args.kind == "grcar":
        P = gen_grcar(args.n)
    elif args.kind == "oscillator":
        P = gen_oscillator(args.n, args.eps)
    else:
        rng = np.random.default_rng(args.seed)
        P = gen_gaussian(args.n, Field(args.field), rng)
    if args.rank is not None:
        P = truncate_rank(P, args.rank)
    pencilio.write_pencil(args.output, P)
    print(f"wrote {args.kind} pencil of size {P.n} to {args.output}")
    return EXIT_OK


def _parse_int_list(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise ValueError(f"bad integer list {text!r}") from exc


def _cmd_experiment(args) -> int:
    region = StabilityRegion(args.region)
    if args.what == "jordan":
        fraction = experiment_jordan_stats(
            args.n, args.samples, args.budget, seed=args.seed, region=region)
        print(f"nontrivial Jordan chain fraction: {fraction:.4f} "
              f"({args.samples} samples, n={args.n})")
        return EXIT_OK
    if args.what == "size-sweep":
        rows = experiment_size_sweep(
            _parse_int_list(args.sizes), args.samples, args.budget,
            seed=args.seed, region=region)
    else:
        ranks = _parse_int_list(args.ranks) if args.ranks else list(range(1, args.n))
        rows = experiment_rank_sweep(
            args.n, ranks, args.samples, args.budget, seed=args.seed, region=region)
    pairs = [(row.index, row.mean_distance) for row in rows]
    if args.output:
        pencilio.write_dat(args.output, pairs)
    for index, value in pairs:
        print(f"{index} {value:.17g}")
    return EXIT_OK


def run_command(argv) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_INVALID
    try:
        if args.command == "solve":
            return _cmd_solve(args)
        if args.command == "project":
            return _cmd_project(args)
        if args.command == "generate":
            return _cmd_generate(args)
        return _cmd_experiment(args)
    except PencilParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


def main():
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
