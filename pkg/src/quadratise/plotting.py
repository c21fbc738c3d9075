"""Render benchmark figures to files, next to the CSV output.

One PNG per trend: wall time vs problem size, degree-2 density of the
result, and variable counts before/after reduction, each faceted by input
density; plus the term-count scaling curve per degree on a log axis.
Figures are optional (the report path emits data by default) and read the
same records the CSV is written from.
"""

from __future__ import annotations

from collections import defaultdict
from pathlib import Path
from typing import Iterable, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .bench import BenchRecord

_MARKERS = ("o", "s", "^", "v", "D", "x", "+", "*")


def _facet_axes(n_facets: int, title: str):
    fig, axes = plt.subplots(1, n_facets, figsize=(4.2 * n_facets, 3.4), squeeze=False, sharey=True)
    fig.suptitle(title)
    return fig, axes[0]


def _series_by_algorithm(records: Iterable[BenchRecord], metric: str):
    series: dict[str, dict[int, list[float]]] = defaultdict(lambda: defaultdict(list))
    for rec in records:
        value = getattr(rec, metric)
        if value is None:
            continue
        series[rec.algorithm][rec.n].append(float(value))
    return series


def _plot_metric(records: Sequence[BenchRecord], metric: str, ylabel: str, title: str, path: Path, logy: bool):
    densities = sorted({rec.density_in for rec in records})
    fig, axes = _facet_axes(max(len(densities), 1), title)
    for ax, density in zip(axes, densities):
        facet = [rec for rec in records if rec.density_in == density]
        for k, (algo, by_n) in enumerate(sorted(_series_by_algorithm(facet, metric).items())):
            ns = sorted(by_n)
            means = [sum(by_n[n]) / len(by_n[n]) for n in ns]
            ax.plot(ns, means, marker=_MARKERS[k % len(_MARKERS)], label=algo, linewidth=1.2, markersize=4)
        ax.set_title(f"density {density:g}")
        ax.set_xlabel("variables before reduction")
        if logy:
            ax.set_yscale("log")
    axes[0].set_ylabel(ylabel)
    axes[-1].legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_bench_figures(records: Sequence[BenchRecord], outdir: str | Path) -> list[Path]:
    """Write the three sweep figures; returns the created paths."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    done = [rec for rec in records if not rec.timed_out]
    created = []
    for metric, ylabel, name, logy in (
        ("wall_time_s", "wall time [s]", "runtime_vs_n.png", True),
        ("d2_out_with_penalty", "degree-2 density (with penalty)", "d2_density_vs_n.png", False),
        ("vars_after", "variables after reduction", "vars_after_vs_n.png", False),
    ):
        path = outdir / name
        _plot_metric(done, metric, ylabel, f"{ylabel} vs problem size", path, logy)
        created.append(path)
    return created


def render_scaling_figure(rows: Sequence[tuple[int, int, int]], path: str | Path) -> Path:
    """Term count vs variable count, one curve per degree, log-scale y."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    by_degree: dict[int, list[tuple[int, int]]] = defaultdict(list)
    for n, deg, terms in rows:
        by_degree[deg].append((n, terms))
    fig, ax = plt.subplots(figsize=(5.2, 3.8))
    for k, deg in enumerate(sorted(by_degree)):
        pts = sorted(by_degree[deg])
        ax.plot(
            [p[0] for p in pts],
            [p[1] for p in pts],
            marker=_MARKERS[k % len(_MARKERS)],
            markersize=3,
            linewidth=1.0,
            label=f"degree {deg}",
        )
    ax.set_yscale("log")
    ax.set_xlabel("number of variables")
    ax.set_ylabel("number of terms (full density)")
    ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
