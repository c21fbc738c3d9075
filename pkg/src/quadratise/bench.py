"""Benchmark sweeps over random instances, emitting canonical CSV.

A sweep runs every configured algorithm on every generated instance and
writes one record per (instance, algorithm) cell.  Only the reduction call
itself is timed; generation, parsing and any verification hooks stay outside
the clock.  Runs that exceed the per-run timeout are recorded with the
timeout value as their wall time and a timed-out flag instead of structural
metrics.  Records are emitted in configuration order, never completion
order, so reruns differ at most in the wall-time column.
"""

from __future__ import annotations

import csv
import json
import logging
import math
import random
import time
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Callable, Iterable, Sequence, TextIO

from .baseline import SelectionVariant, quadratise_baseline
from .generator import GeneratorSpec, generate
from .lsr import ReductionResult, ReductionTimeout, lsr
from .pbf import PBF
from .verify import variable_bounds

log = logging.getLogger(__name__)

ALGORITHMS = (
    "lsr-q0.0",
    "lsr-q0.5",
    "lsr-q0.8",
    "lsr-q1.0",
    "base-sparse",
    "base-medium",
    "base-dense",
)

CSV_VERSION_LINE = "# quadratise-bench-csv v1"
SCALING_VERSION_LINE = "# quadratise-scaling-csv v1"


@dataclass(frozen=True, slots=True)
class BenchRecord:
    """One benchmark cell; field order is the frozen CSV column order."""

    algorithm: str
    n: int
    terms_before: int
    density_in: float
    wall_time_s: float
    vars_after: int | None
    d2_out_with_penalty: float | None
    d2_out_without_penalty: float | None
    d1_out: float | None
    iterations: int | None
    seed: int
    timed_out: bool = False


BENCH_COLUMNS = tuple(f.name for f in fields(BenchRecord))


@dataclass
class SweepConfig:
    n_values: list[int]
    densities: list[float]
    algorithms: list[str]
    seeds: list[int]
    degree: int = 4
    timeout_s: float = 120.0
    coeff_lo: float = -10.0
    coeff_hi: float = 10.0

    def __post_init__(self) -> None:
        for name in self.algorithms:
            make_runner(name)  # validates the name


@dataclass(frozen=True, slots=True)
class RunSpec:
    n: int
    density: float
    seed: int
    algorithm: str


def load_config(path: str | Path) -> SweepConfig:
    """Read a sweep configuration from a JSON or TOML file."""
    path = Path(path)
    if path.suffix.lower() == ".toml":
        try:
            import tomllib  # type: ignore[import-not-found]
        except ModuleNotFoundError:
            import tomli as tomllib
        data = tomllib.loads(path.read_text())
    else:
        data = json.loads(path.read_text())
    seeds = data.get("seeds", [0])
    if isinstance(seeds, int):
        seeds = list(range(seeds))
    return SweepConfig(
        n_values=[int(n) for n in data["n_values"]],
        densities=[float(d) for d in data["densities"]],
        algorithms=[str(a) for a in data["algorithms"]],
        seeds=[int(s) for s in seeds],
        degree=int(data.get("degree", 4)),
        timeout_s=float(data.get("timeout_s", 120.0)),
        coeff_lo=float(data.get("coeff_lo", -10.0)),
        coeff_hi=float(data.get("coeff_hi", 10.0)),
    )


def make_runner(algorithm: str) -> Callable[[PBF, int, float | None], ReductionResult]:
    """Map an algorithm name to a callable (instance, seed, time_limit) -> result."""
    if algorithm.startswith("lsr-q"):
        try:
            q = float(algorithm[5:])
        except ValueError:
            raise ValueError(f"bad LSR percentile in algorithm name {algorithm!r}") from None
        if not 0.0 <= q <= 1.0:
            raise ValueError(f"LSR percentile out of range in {algorithm!r}")

        def run_lsr(f: PBF, seed: int, time_limit: float | None) -> ReductionResult:
            return lsr(f, q, random.Random(seed), time_limit=time_limit, meta={"algorithm": "lsr", "q": q})

        return run_lsr
    if algorithm.startswith("base-"):
        variant = SelectionVariant(algorithm[5:])

        def run_base(f: PBF, seed: int, time_limit: float | None) -> ReductionResult:
            return quadratise_baseline(f, variant, time_limit=time_limit)

        return run_base
    raise ValueError(f"unknown algorithm {algorithm!r}; expected lsr-q<float> or base-<variant>")


def plan_runs(cfg: SweepConfig) -> list[RunSpec]:
    """The full (instance, algorithm) matrix in stable configuration order."""
    return [
        RunSpec(n, density, seed, algorithm)
        for n in sorted(cfg.n_values)
        for density in sorted(cfg.densities)
        for seed in sorted(cfg.seeds)
        for algorithm in cfg.algorithms
    ]


def support_density(pbfs: Iterable[PBF], k: int, n: int) -> float:
    """Density of degree-k variable sets present in the union of the given functions."""
    sets = {m.vars for f in pbfs for m in f.terms.values() if len(m.vars) == k}
    return len(sets) / math.comb(n, k)


def summarize_run(
    instance: PBF, density_in: float, seed: int, algorithm: str, result: ReductionResult, wall: float
) -> BenchRecord:
    vars_after = result.vars_after
    merged = (result.reduced, result.penalty)
    return BenchRecord(
        algorithm=algorithm,
        n=instance.n_original,
        terms_before=len(instance.terms),
        density_in=density_in,
        wall_time_s=wall,
        vars_after=vars_after,
        d2_out_with_penalty=support_density(merged, 2, vars_after),
        d2_out_without_penalty=result.reduced.density(2, vars_after),
        d1_out=support_density(merged, 1, vars_after),
        iterations=result.iterations_stage1 + result.iterations_stage2,
        seed=seed,
    )


def run_one(instance: PBF, density_in: float, seed: int, algorithm: str, timeout_s: float | None) -> BenchRecord:
    runner = make_runner(algorithm)
    start = time.perf_counter()
    try:
        result = runner(instance, seed, timeout_s)
    except ReductionTimeout:
        log.info("timeout: %s n=%d d=%s seed=%d", algorithm, instance.n_original, density_in, seed)
        return BenchRecord(
            algorithm=algorithm,
            n=instance.n_original,
            terms_before=len(instance.terms),
            density_in=density_in,
            wall_time_s=timeout_s if timeout_s is not None else float("nan"),
            vars_after=None,
            d2_out_with_penalty=None,
            d2_out_without_penalty=None,
            d1_out=None,
            iterations=None,
            seed=seed,
            timed_out=True,
        )
    wall = time.perf_counter() - start
    lo, hi = variable_bounds(instance)
    if not lo <= result.introduced <= hi:
        raise AssertionError(
            f"{algorithm} introduced {result.introduced} variables outside bounds [{lo}, {hi}]"
        )
    return summarize_run(instance, density_in, seed, algorithm, result, wall)


def _format_cell(value: object) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.6f}"
    return str(value)


def write_records(records: Iterable[BenchRecord], out: TextIO) -> None:
    out.write(CSV_VERSION_LINE + "\n")
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(BENCH_COLUMNS)
    for rec in records:
        writer.writerow([_format_cell(getattr(rec, col)) for col in BENCH_COLUMNS])


def run_sweep(cfg: SweepConfig, out: TextIO | None = None) -> list[BenchRecord]:
    """Execute the sweep; streams CSV rows to ``out`` as cells finish."""
    runs = plan_runs(cfg)
    writer = None
    if out is not None:
        out.write(CSV_VERSION_LINE + "\n")
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(BENCH_COLUMNS)

    records: list[BenchRecord] = []
    instances: dict[tuple[int, float, int], PBF] = {}
    for spec in runs:
        key = (spec.n, spec.density, spec.seed)
        if key not in instances:
            instances[key] = generate(
                GeneratorSpec(
                    n=spec.n,
                    degree=cfg.degree,
                    density=spec.density,
                    seed=spec.seed,
                    coeff_lo=cfg.coeff_lo,
                    coeff_hi=cfg.coeff_hi,
                )
            )
        instance = instances[key]
        log.debug("run: %s n=%d d=%s seed=%d", spec.algorithm, spec.n, spec.density, spec.seed)
        rec = run_one(instance, spec.density, spec.seed, spec.algorithm, cfg.timeout_s)
        records.append(rec)
        if writer is not None:
            writer.writerow([_format_cell(getattr(rec, col)) for col in BENCH_COLUMNS])
    return records


# ----------------------------------------------------------------------
# Term-count scaling report
# ----------------------------------------------------------------------


def terms_scaling_report(n_range: Sequence[int], degree_range: Sequence[int]) -> list[tuple[int, int, int]]:
    """Rows (n, degree, terms) with terms = sum over k=1..degree of C(n, k).

    The number of monomials of a full-density function; at degree = n this
    is 2^n - 1, the exponential blow-up that makes dense high-degree
    formulations impractical.
    """
    rows = []
    for n in n_range:
        for deg in degree_range:
            if deg > n or deg < 1:
                continue
            rows.append((n, deg, sum(math.comb(n, k) for k in range(1, deg + 1))))
    return rows


def write_scaling_csv(rows: Iterable[tuple[int, int, int]], out: TextIO) -> None:
    out.write(SCALING_VERSION_LINE + "\n")
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(("n", "degree", "terms"))
    for row in rows:
        writer.writerow(row)
