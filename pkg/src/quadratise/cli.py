"""Command-line front end.

Subcommands: reduce (the default when the first argument is an input file),
generate, bench, verify and scaling.  ``QUADRATISE_LOG`` controls log
verbosity (debug/info/warning/error).
"""

from __future__ import annotations

import argparse
import logging
import math
import os
import random
import sys
from pathlib import Path

from .baseline import SelectionVariant, quadratise_baseline
from .bench import load_config, run_sweep, terms_scaling_report, write_scaling_csv
from .generator import GeneratorSpec, generate
from .lsr import ReductionResult, lsr
from .pbf import PBF, parse_pbf, serialize_pbf
from .verify import (
    check_penalty_property,
    check_quadratisation,
    check_variable_bounds,
    sufficient_scale,
)

log = logging.getLogger(__name__)

_SUBCOMMANDS = ("reduce", "generate", "bench", "verify", "scaling")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quadratise", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    reduce_p = sub.add_parser("reduce", help="quadratise a PBF file")
    reduce_p.add_argument("input", help="input PBF JSON file")
    reduce_p.add_argument("--algo", choices=("lsr", "baseline"), default="lsr")
    reduce_p.add_argument("--q", type=float, default=1.0, help="LSR multiplicity percentile in [0, 1]")
    reduce_p.add_argument(
        "--variant", choices=[v.value for v in SelectionVariant], default="dense", help="baseline selection"
    )
    reduce_p.add_argument("--seed", type=int, default=0)
    reduce_p.add_argument("--out", required=True, help="output ReductionResult JSON path")

    gen_p = sub.add_parser("generate", help="generate a random PBF instance")
    gen_p.add_argument("--n", type=int, required=True)
    gen_p.add_argument("--degree", type=int, required=True)
    gen_p.add_argument("--density", type=float, required=True)
    gen_p.add_argument("--seed", type=int, default=0)
    gen_p.add_argument("--coeff-lo", type=float, default=-10.0)
    gen_p.add_argument("--coeff-hi", type=float, default=10.0)
    gen_p.add_argument("--out", required=True)

    bench_p = sub.add_parser("bench", help="run a benchmark sweep")
    bench_p.add_argument("--config", required=True, help="sweep config (JSON or TOML)")
    bench_p.add_argument("--csv", required=True, help="output CSV path")
    bench_p.add_argument("--plots", default=None, help="directory for rendered figures (optional)")

    verify_p = sub.add_parser("verify", help="reduce and verify against the brute-force oracle")
    verify_p.add_argument("--input", required=True)
    verify_p.add_argument("--algo", choices=("lsr", "baseline"), default="lsr")
    verify_p.add_argument("--q", type=float, default=1.0)
    verify_p.add_argument("--variant", choices=[v.value for v in SelectionVariant], default="dense")
    verify_p.add_argument("--seed", type=int, default=0)
    verify_p.add_argument("--max-bits", type=int, default=22, help="exhaustive enumeration cap (total bits)")

    scaling_p = sub.add_parser("scaling", help="emit the term-count scaling table")
    scaling_p.add_argument("--n-max", type=int, required=True)
    scaling_p.add_argument("--deg-max", type=int, required=True)
    scaling_p.add_argument("--csv", required=True)
    scaling_p.add_argument("--plot", default=None, help="optional figure path")

    return parser


def _read_pbf(path: str) -> PBF:
    return parse_pbf(Path(path).read_text())


def _run_reduction(f: PBF, algo: str, q: float, variant: str, seed: int) -> ReductionResult:
    if algo == "lsr":
        return lsr(f, q, random.Random(seed), meta={"algorithm": "lsr", "q": q, "seed": seed})
    return quadratise_baseline(f, SelectionVariant(variant))


def _cmd_reduce(args: argparse.Namespace) -> int:
    f = _read_pbf(args.input)
    result = _run_reduction(f, args.algo, args.q, args.variant, args.seed)
    Path(args.out).write_text(result.serialize() + "\n")
    vars_after = result.vars_after
    merged_d2 = len(
        {m.vars for g in (result.reduced, result.penalty) for m in g.terms.values() if len(m.vars) == 2}
    )
    print(f"variables: {f.n_original} -> {vars_after}")
    print(f"degree: {f.degree()} -> {result.reduced.degree()}")
    print(f"terms: {len(f.terms)} -> {len(result.reduced.terms)} (+{len(result.penalty.terms)} penalty)")
    if vars_after >= 2:
        print(f"d2 (with penalty): {merged_d2 / math.comb(vars_after, 2):.6f}")
    print(f"iterations: stage1={result.iterations_stage1} stage2={result.iterations_stage2}")
    return 0


def _cmd_generate(args: argparse.Namespace) -> int:
    spec = GeneratorSpec(
        n=args.n,
        degree=args.degree,
        density=args.density,
        seed=args.seed,
        coeff_lo=args.coeff_lo,
        coeff_hi=args.coeff_hi,
    )
    f = generate(spec)
    Path(args.out).write_text(serialize_pbf(f) + "\n")
    print(f"wrote {args.out}: n={f.n_original}, terms={len(f.terms)}, degree={f.degree()}")
    return 0


def _cmd_bench(args: argparse.Namespace) -> int:
    cfg = load_config(args.config)
    with open(args.csv, "w", newline="") as out:
        records = run_sweep(cfg, out)
    print(f"wrote {args.csv}: {len(records)} records")
    if args.plots:
        from .plotting import render_bench_figures

        for path in render_bench_figures(records, args.plots):
            print(f"wrote {path}")
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    f = _read_pbf(args.input)
    result = _run_reduction(f, args.algo, args.q, args.variant, args.seed)
    c = sufficient_scale(f)
    reports = [check_penalty_property()]
    reports.append(check_quadratisation(f, result, c, max_bits=args.max_bits, instance_id=args.input))
    reports.append(check_variable_bounds(f, result, instance_id=args.input))
    ok = all(r.passed for r in reports)
    print("[" + ",\n".join(r.serialize() for r in reports) + "]")
    return 0 if ok else 1


def _cmd_scaling(args: argparse.Namespace) -> int:
    rows = terms_scaling_report(range(1, args.n_max + 1), range(1, args.deg_max + 1))
    with open(args.csv, "w", newline="") as out:
        write_scaling_csv(rows, out)
    print(f"wrote {args.csv}: {len(rows)} rows")
    if args.plot:
        from .plotting import render_scaling_figure

        print(f"wrote {render_scaling_figure(rows, args.plot)}")
    return 0


_HANDLERS = {
    "reduce": _cmd_reduce,
    "generate": _cmd_generate,
    "bench": _cmd_bench,
    "verify": _cmd_verify,
    "scaling": _cmd_scaling,
}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    level = os.environ.get("QUADRATISE_LOG", "warning").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), stream=sys.stderr)

    # `quadratise <file> ...` is shorthand for `quadratise reduce <file> ...`.
    if argv and argv[0] not in _SUBCOMMANDS and not argv[0].startswith("-"):
        argv.insert(0, "reduce")

    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
