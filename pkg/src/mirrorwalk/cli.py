"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 invalid input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from typing import List, Optional, Sequence

import numpy as np

from . import counting, kernels, montecarlo
from .errors import CostGuardError, InvalidInputError, MirrorWalkError, NoSurvivorError
from .suites import SUITES, run_suites
from .walk import IntervalSet, WalkConfig, exact

SEED_ENV = "MIRRORWALK_SEED"
EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None or raw == "":
        return 0
    try:
        return int(raw)
    except ValueError:
        raise InvalidInputError(f"{SEED_ENV}={raw!r} is not an integer") from None


def _u64(text: str) -> int:
    v = int(text)
    if not 0 <= v < 1 << 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _n_list(text: str) -> List[int]:
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _cell(v):
    if isinstance(v, float):
        return repr(v)
    return str(v)


def emit(columns: Sequence[str], rows, fmt: str, out: Optional[str]) -> None:
    if fmt == "json":
        doc = {"columns": list(columns), "rows": [dict(zip(columns, (_json_value(v) for v in r))) for r in rows]}
        text = json.dumps(doc, indent=2) + "\n"
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([_cell(v) for v in r])
        text = buf.getvalue()
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json_value(v):
    if isinstance(v, float) and not math.isfinite(v):
        return repr(v)
    if isinstance(v, (bool, int, float, str)) or v is None:
        return v
    return str(v)


def _walk(args, n: Optional[int] = None) -> WalkConfig:
    n = args.n if n is None else n
    if args.mode == "box":
        if args.L is None:
            raise InvalidInputError("--L is required in box mode")
        return WalkConfig(args.x, args.t, n, args.L)
    return WalkConfig(args.x, args.t, n)


# -- subcommands ------------------------------------------------------------


def cmd_kernel(args) -> int:
    spec = kernels.KernelSpec(args.kind, float(exact(args.t)), float(exact(args.x)),
                              None if args.L is None else float(exact(args.L)), args.M, args.convention, args.tol)
    if (args.a is None) != (args.b is None):
        raise InvalidInputError("--a and --b must be given together")
    if args.a is not None:
        a, b = float(exact(args.a, True)), float(exact(args.b, True))
        if spec.kind is kernels.KernelKind.GAUSS:
            p = kernels.kernel_cdf(spec, a, b)
        else:
            p = kernels.kernel_cdf(spec, a, b) / kernels.kernel_cdf(spec, *spec.domain)
        emit(("a", "b", "probability"), [(a, b, p)], args.format, args.out)
        return EXIT_OK
    if args.grid < 2:
        raise InvalidInputError("--grid must be >= 2")
    lo, hi = spec.domain
    width = 8 * math.sqrt(spec.t)
    lo = spec.x - width if lo == -math.inf else lo
    hi = spec.x + width if hi == math.inf else hi
    ys = np.linspace(lo, hi, args.grid)
    vals = np.atleast_1d(kernels.evaluate(spec, ys))
    emit(("y", "value"), [(float(y), float(v)) for y, v in zip(ys, vals)], args.format, args.out)
    return EXIT_OK


def cmd_exact(args) -> int:
    cfg = _walk(args)
    p = counting.exact_probability(cfg, args.a, args.b, method=args.method, closed=args.closed)
    row = (cfg.n, args.a, args.b, p.numerator, p.denominator, float(p))
    emit(("n", "a", "b", "numerator", "denominator", "probability"), [row], args.format, args.out)
    return EXIT_OK


def cmd_count(args) -> int:
    cfg = _walk(args)
    U = IntervalSet.of((args.a, args.b))
    constrained = not args.unconstrained
    if args.method == "brute":
        c = counting.brute_force_count(cfg, U, constrained).count
    elif args.method == "dp":
        c = counting.dp_count(cfg, U, constrained).count
    elif args.method == "unconstrained":
        c, constrained = counting.unconstrained_count(cfg, U).count, False
    elif args.method == "images":
        c = counting.image_sum_count(cfg, U).count
    else:
        c = counting.nominal_image_sum(cfg, U)
    row = (cfg.n, args.a, args.b, args.method, constrained, c, c / (1 << cfg.n))
    emit(("n", "a", "b", "method", "constrained", "count", "normalized"), [row], args.format, args.out)
    return EXIT_OK


def cmd_simulate(args) -> int:
    cfg = _walk(args)
    batch = montecarlo.run_trials(cfg, args.trials, args.seed, args.sampler, workers=args.workers)
    if batch.accepted == 0:
        raise NoSurvivorError("no trial survived")
    rows = montecarlo.histogram_table(batch, cfg)
    emit(("endpoint", "count", "p_hat", "exact_p", "z_score"), rows, args.format, args.out)
    return EXIT_OK


def cmd_converge(args) -> int:
    if args.mode == "box" and args.L is None:
        raise InvalidInputError("--L is required in box mode")
    limit = kernels.limit_probability(
        args.mode, float(exact(args.x)), float(exact(args.t)), float(exact(args.a)), float(exact(args.b, True)),
        L=None if args.L is None else float(exact(args.L)),
    )
    rows = []
    for n in args.n:
        p = float(counting.exact_probability(_walk(args, n), args.a, args.b, closed=args.closed))
        rows.append((n, p, limit, abs(p - limit)))
    emit(("n", "exact", "limit", "abs_error"), rows, args.format, args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    checks = run_suites(names, n_max=args.n_max, seed=args.seed, tol=args.tol)
    rows = [(c.suite, c.name, "pass" if c.passed else "FAIL", c.detail) for c in checks]
    emit(("suite", "check", "status", "detail"), rows, args.format, args.out)
    return EXIT_OK if all(c.passed for c in checks) else EXIT_FAIL


# -- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", default=None, help="write to PATH instead of stdout")
    common.add_argument("--seed", type=_u64, default=None, help=f"RNG seed (default ${SEED_ENV} or 0)")
    common.add_argument("--tol", type=float, default=1e-10)

    walk = argparse.ArgumentParser(add_help=False)
    walk.add_argument("--mode", choices=("half-line", "box"), default="half-line")
    walk.add_argument("--x", required=True)
    walk.add_argument("--t", required=True)
    walk.add_argument("--L", default=None)

    p = argparse.ArgumentParser(prog="mirrorwalk", description="Constrained coin-toss walks and their heat-kernel limits.")
    sub = p.add_subparsers(dest="command", required=True)

    k = sub.add_parser("kernel", parents=[common], help="evaluate G, H or K on a grid, or integrate over (a, b)")
    k.add_argument("--kind", choices=[kk.value for kk in kernels.KernelKind], required=True)
    k.add_argument("--t", required=True)
    k.add_argument("--x", required=True)
    k.add_argument("--L", default=None)
    k.add_argument("--grid", type=int, default=101)
    k.add_argument("--M", type=int, default=None, help="truncation (default: chosen from --tol)")
    k.add_argument("--convention", choices=kernels.CONVENTIONS, default="half")
    k.add_argument("--a", default=None)
    k.add_argument("--b", default=None)
    k.set_defaults(func=cmd_kernel)

    e = sub.add_parser("exact", parents=[common, walk], help="exact survivor probability of (a, b)")
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--a", required=True)
    e.add_argument("--b", required=True)
    e.add_argument("--method", choices=("images", "dp"), default="images")
    e.add_argument("--closed", action="store_true", help="use a <= S_n <= b")
    e.set_defaults(func=cmd_exact)

    c = sub.add_parser("count", parents=[common, walk], help="exact path counts")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--a", required=True)
    c.add_argument("--b", required=True)
    c.add_argument("--method", choices=("brute", "dp", "images", "unconstrained", "nominal"), default="dp")
    c.add_argument("--unconstrained", action="store_true", help="ignore the path constraint (brute/dp)")
    c.set_defaults(func=cmd_count)

    s = sub.add_parser("simulate", parents=[common, walk], help="Monte Carlo endpoint histogram")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--trials", type=int, default=100_000)
    s.add_argument("--sampler", choices=montecarlo.SAMPLERS, default="rejection")
    s.add_argument("--workers", type=int, default=1)
    s.set_defaults(func=cmd_simulate)

    v = sub.add_parser("converge", parents=[common, walk], help="exact probability vs limit over a list of n")
    v.add_argument("--a", required=True)
    v.add_argument("--b", required=True)
    v.add_argument("--n", type=_n_list, required=True, help="comma-separated toss counts")
    v.add_argument("--closed", action="store_true")
    v.set_defaults(func=cmd_converge)

    r = sub.add_parser("verify", parents=[common], help="run self-verification suites")
    r.add_argument("--suite", choices=("all", *SUITES), default="all")
    r.add_argument("--n-max", type=int, default=12)
    r.set_defaults(func=cmd_verify)
    return p


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_INPUT
    try:
        if args.seed is None:
            args.seed = _default_seed()
        return args.func(args)
    except (InvalidInputError, CostGuardError, NoSurvivorError, MirrorWalkError) as exc:
        print(f"mirrorwalk: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main() -> None:
    sys.exit(run())
