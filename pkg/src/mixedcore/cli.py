"""Command-line front end.

Exit codes: 0 success, 1 invalid arguments, 2 numerical failure (degenerate
fit, failed retrieval build). Results go to stdout, diagnostics to stderr.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .experiment import SweepConfig, density_grid, emit_csv, estimate_threshold, run_sweep
from .numerics import DegenerateFit
from .optimizer import CaseLabel, general_threshold, optimize_pair, table_scan
from .retrieval import BuildFailed, build, query, space_report
from .threshold import EdgeMix, InvalidSizes

SEED_ENV = "MIXEDCORE_SEED"
EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV, "0")
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{SEED_ENV}={raw!r} is not an integer")


def _fmt(x: Optional[float], prec: int) -> str:
    return "n/a" if x is None else f"{x:.{prec}f}"


def cmd_optimize(args) -> int:
    if args.a < 3 or args.b < args.a:
        raise UsageError(f"need 3 <= a <= b, got a={args.a}, b={args.b}")
    o = optimize_pair(args.a, args.b)
    p = args.precision
    if args.format == "json":
        out = {
            "a": o.a,
            "b": o.b,
            "case": o.case_label.value,
            "z_star": round(o.z_star, p),
            "lambda_star": round(o.lambda_star, p),
            "alpha_star": round(o.alpha_star, p),
            "c_star": round(o.c_star, p),
            "avg_edge_size": round(o.avg_edge_size, p),
            "z_star_second": None if o.z_star_second is None else round(o.z_star_second, p),
        }
        print(json.dumps(out))
    else:
        fields = [
            f"case={o.case_label.value}",
            f"z*={_fmt(o.z_star, p)}",
            f"lambda*={_fmt(o.lambda_star, p)}",
            f"alpha*={_fmt(o.alpha_star, p)}",
            f"c*={_fmt(o.c_star, p)}",
            f"kbar={_fmt(o.avg_edge_size, p)}",
        ]
        if o.case_label is CaseLabel.BINARY_SEARCH:
            fields.append(f"z**={_fmt(o.z_star_second, p)}")
        print(" ".join(fields))
    return EXIT_OK


def cmd_table(args) -> int:
    if args.a < 3 or args.b_max < args.a:
        raise UsageError(f"need 3 <= a <= b_max, got a={args.a}, b_max={args.b_max}")
    p = args.precision
    rows = table_scan(args.a, args.b_max)
    print("b,z*,lambda*,alpha*,kbar,c*")
    for o in rows:
        print(",".join([str(o.b)] + [_fmt(v, p) for v in
                                     (o.z_star, o.lambda_star, o.alpha_star, o.avg_edge_size, o.c_star)]))
    best = max(rows, key=lambda o: o.c_star)
    print(f"# max c*={_fmt(best.c_star, p)} at b={best.b}")
    return EXIT_OK


def _simulation_mix(args) -> tuple[EdgeMix, float]:
    if args.k2 is None or args.k2 == args.k1:
        if args.k1 < 3:
            raise UsageError("edge sizes must be >= 3")
        o = optimize_pair(args.k1, args.k1)
        return o.mix, o.c_star
    if args.k1 < 3 or args.k2 < args.k1:
        raise UsageError(f"need 3 <= k1 <= k2, got k1={args.k1}, k2={args.k2}")
    if args.alpha is None:
        o = optimize_pair(args.k1, args.k2)
        return o.mix, o.c_star
    if not 0.0 < args.alpha <= 1.0:
        raise UsageError("--alpha must lie in (0, 1]")
    mix = EdgeMix.pair(args.k1, args.k2, args.alpha)
    return mix, general_threshold(mix)


def cmd_simulate(args) -> int:
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    if args.steps < 3:
        raise UsageError("--steps must be >= 3 for a fit")
    if args.jobs < 1:
        raise UsageError("--jobs must be >= 1")
    mix, center = _simulation_mix(args)
    span = args.span if args.span is not None else (0.02 if args.n <= 100_000 else 0.008)
    if not span > 0:
        raise UsageError("--span must be positive")
    seed = args.seed if args.seed is not None else _default_seed()
    cfg = SweepConfig(mix, args.n, density_grid(center, span, args.steps), args.trials, seed, args.jobs)
    sweep = run_sweep(cfg)
    print(f"sweep finished in {sweep.wall_time:.1f}s", file=sys.stderr)
    mix_desc = " ".join(f"{k}:{a:.6f}" for k, a in zip(mix.sizes, mix.fractions))
    extra = f"# c_star={center:.6f}\n# mix={mix_desc}\n# n={args.n}\n"
    try:
        fit = estimate_threshold(sweep)
    except DegenerateFit as exc:
        sys.stdout.write(emit_csv(sweep) + extra)
        print(f"fit failed: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    sys.stdout.write(emit_csv(sweep, fit) + extra)
    if not fit.converged:
        print("warning: sigmoid fit did not converge", file=sys.stderr)
    return EXIT_OK


def demo_pairs(m: int, r: int, seed: int) -> list[tuple[bytes, int]]:
    rng = np.random.default_rng(seed)
    salts = rng.bit_generator.random_raw(m)
    values = rng.bit_generator.random_raw(m) & np.uint64((1 << r) - 1)
    return [(i.to_bytes(8, "little") + int(s).to_bytes(8, "little"), int(v))
            for i, (s, v) in enumerate(zip(salts, values))]


def cmd_retrieval_demo(args) -> int:
    if args.m < 0:
        raise UsageError("--m must be >= 0")
    if not 1 <= args.r <= 64:
        raise UsageError("--r must lie in [1, 64]")
    if not 0.0 < args.c < 1.0:
        raise UsageError("--c must lie in (0, 1)")
    seed = args.seed if args.seed is not None else _default_seed()
    mix = optimize_pair(3, 16).mix
    pairs = demo_pairs(args.m, args.r, seed)
    try:
        s = build(pairs, args.c, mix, args.r, seed, args.max_retries)
    except BuildFailed as exc:
        print(f"build failed: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    ok = sum(query(s, k) == v for k, v in pairs)
    bits, overhead = space_report(s) if s.m else (None, None)
    if args.output:
        with open(args.output, "wb") as fh:
            fh.write(s.to_bytes())
    p = args.precision
    if args.format == "json":
        print(json.dumps({
            "m": s.m, "n": s.n, "r": s.r, "c": args.c,
            "verified": ok, "seed": s.seed, "attempts": s.seed - seed + 1,
            "bits_per_key": None if bits is None else round(bits, p),
            "overhead_factor": None if overhead is None else round(overhead, p),
        }))
    else:
        print(f"verified {ok}/{s.m} bits_per_key={_fmt(bits, p)} overhead={_fmt(overhead, p)} "
              f"n={s.n} m={s.m} r={s.r} seed={s.seed}")
    return EXIT_OK if ok == s.m else EXIT_NUMERIC


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mixedcore", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("optimize", help="optimal fraction and threshold for edge sizes (a, b)")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b", type=int, required=True)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--precision", type=int, default=5)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("table", help="optimal values for b = a .. b_max as CSV")
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--b-max", type=int, required=True)
    p.add_argument("--precision", type=int, default=5)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("simulate", help="Monte-Carlo failure-rate sweep around the theoretical threshold")
    p.add_argument("--k1", type=int, required=True)
    p.add_argument("--k2", type=int)
    p.add_argument("--alpha", type=float, help="fraction of k1 edges (default: optimal)")
    p.add_argument("--n", type=int, default=100_000)
    p.add_argument("--span", type=float, help="density span (default 0.02 for n <= 1e5, else 0.008)")
    p.add_argument("--steps", type=int, default=9)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, help=f"base seed (default ${SEED_ENV} or 0)")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("retrieval-demo", help="build and verify a retrieval structure on random keys")
    p.add_argument("--m", type=int, default=10_000)
    p.add_argument("--r", type=int, default=16)
    p.add_argument("--c", type=float, default=0.906)
    p.add_argument("--seed", type=int, help=f"seed (default ${SEED_ENV} or 0)")
    p.add_argument("--max-retries", type=int, default=3)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--precision", type=int, default=5)
    p.add_argument("--output", help="write the serialized structure here")
    p.set_defaults(func=cmd_retrieval_demo)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, InvalidSizes, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
