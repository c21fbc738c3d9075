"""Local structure reduction: two-stage graph-driven quadratisation.

Stage 1 repeatedly picks a node pair with multiplicity >= 2 (percentile q
over the sorted distinct multiplicities), replaces that variable pair with a
fresh variable in every monomial carrying it, and evolves graph and index
incrementally.  The total number of edges in multi-edges strictly decreases
each iteration, so stage 1 terminates with no pair shared by two monomials.

Stage 2 then quadratises the surviving high-degree monomials independently:
one pass pairs consecutive variables left-to-right (ascending id), roughly
halving the degree, and passes repeat until the target degree is reached.

The penalty function accumulates one gadget per substitution and is kept
strictly outside the working polynomial and the graph; it is returned
unscaled, choosing the scale constant is the caller's job.
"""

from __future__ import annotations

import json
import math
import random
import time
from dataclasses import dataclass, field
from typing import Iterator

from .graph import MultiGraph, MultiplicityIndex, build_graph, build_index, select_pair, update_graph_data
from .pbf import PBF, penalty_term


class ReductionTimeout(Exception):
    """Raised when a reduction exceeds its wall-clock budget."""


@dataclass(frozen=True, slots=True)
class IterationLogEntry:
    """One reduction step: which pair was replaced and how much it touched."""

    stage: int
    pair: tuple[int, int]
    fresh: int
    beta_selected: int
    touched_monomials: int


@dataclass
class ReductionResult:
    """Output of a reduction run.

    ``reduced`` has degree <= the target (2 for plain quadratisation) and
    ``penalty`` holds the unscaled sum of all substitution gadgets.
    ``substitutions`` lists (h, i, j) in introduction order: auxiliary y_h
    stands for the product x_i * x_j.  ``multi_edge_mass_trace`` records the
    stage-1 termination measure before the first and after every iteration.
    """

    reduced: PBF
    penalty: PBF
    substitutions: list[tuple[int, int, int]]
    iterations_stage1: int
    iterations_stage2: int
    log: list[IterationLogEntry] = field(default_factory=list)
    multi_edge_mass_trace: list[int] = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    @property
    def introduced(self) -> int:
        return len(self.substitutions)

    @property
    def vars_after(self) -> int:
        return self.reduced.n_original + len(self.substitutions)

    def to_json_dict(self) -> dict:
        return {
            "reduced": self.reduced.to_json_dict(),
            "penalty": self.penalty.to_json_dict(),
            "substitutions": [list(s) for s in self.substitutions],
            "iterations_stage1": self.iterations_stage1,
            "iterations_stage2": self.iterations_stage2,
            "meta": self.meta,
        }

    def serialize(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, sort_keys=True)


class StageOneObserver:
    """Verification hook points around each stage-1 iteration; default no-ops."""

    def on_start(self, g: MultiGraph, idx: MultiplicityIndex, f: PBF) -> None:
        pass

    def before_step(self, g: MultiGraph, idx: MultiplicityIndex, f: PBF, i: int, j: int, h: int) -> None:
        pass

    def after_step(
        self,
        g: MultiGraph,
        idx: MultiplicityIndex,
        f: PBF,
        i: int,
        j: int,
        h: int,
        labels: frozenset[int],
    ) -> None:
        pass


def replace_var_pair(
    g: MultiGraph, f: PBF, i: int, j: int, h: int, labels: frozenset[int] | None = None
) -> tuple[int, ...]:
    """Replace x_i * x_j by y_h in exactly the monomials labelled on the (i, j) edges.

    The affected monomials are identified by the edge labels between i and j;
    inside a reduction iteration the graph has already been evolved, so the
    caller passes the label snapshot taken beforehand via ``labels``.
    Coefficients are unchanged and all other monomials stay untouched.
    Returns the touched running indices.
    """
    zs = sorted(labels if labels is not None else g.labels(i, j))
    for z in zs:
        m = f.terms.get(z)
        if m is None or i not in m.vars or j not in m.vars:
            raise ValueError(f"label {z} does not index a monomial containing x{i} and x{j}")
        new_vars = tuple(sorted((set(m.vars) - {i, j}) | {h}))
        f.rewrite_term(z, new_vars)
    if h >= f.next_var:
        f.next_var = h + 1
    return tuple(zs)


def multi_reduce(f: PBF, p: PBF, z: int, fresh: Iterator[int]) -> list[tuple[int, int, int]]:
    """One halving pass over monomial z: pair consecutive variables left-to-right.

    Each consecutive pair (ascending variable id) is replaced by a fresh
    variable drawn from ``fresh`` and a penalty gadget is appended to p; an
    odd trailing variable is left unpaired, so degree d becomes ceil(d/2).
    Requires deg > 2.  Returns the substitutions made in this pass.
    """
    m = f.terms.get(z)
    if m is None:
        raise ValueError(f"no term with running index {z}")
    if len(m.vars) <= 2:
        raise ValueError(f"multi_reduce requires degree > 2, got {len(m.vars)}")
    vs = m.vars
    new_vars: list[int] = []
    subs: list[tuple[int, int, int]] = []
    k = 0
    while k + 1 < len(vs):
        i, j = vs[k], vs[k + 1]
        h = next(fresh)
        subs.append((h, i, j))
        for pm in penalty_term(i, j, h).terms.values():
            p.add_term(pm.vars, pm.coeff)
        new_vars.append(h)
        k += 2
    if k < len(vs):
        new_vars.append(vs[k])
    f.rewrite_term(z, tuple(sorted(new_vars)))
    top = max(s[0] for s in subs) + 1
    if top > f.next_var:
        f.next_var = top
    if top > p.next_var:
        p.next_var = top
    return subs


def _final_size(d: int, k: int) -> int:
    # Repeated halving passes: size s -> ceil(s/2) until the target is met.
    s = d
    while s > k:
        s = math.ceil(s / 2)
    return s


def reduce_to_degree_k(
    f: PBF,
    q: float,
    k: int = 2,
    rng: random.Random | None = None,
    *,
    time_limit: float | None = None,
    observer: StageOneObserver | None = None,
    meta: dict | None = None,
) -> ReductionResult:
    """Reduce f to degree <= k; k=2 is plain quadratisation (see :func:`lsr`)."""
    if k < 2:
        raise ValueError(f"target degree must be >= 2, got {k}")
    if not 0.0 <= q <= 1.0:
        raise ValueError(f"percentile q must lie in [0, 1], got {q}")
    if rng is None:
        rng = random.Random(0)
    deadline = time.perf_counter() + time_limit if time_limit is not None else None

    work = f.copy()
    penalty = PBF(n_original=work.n_original)
    penalty.next_var = work.next_var
    subs: list[tuple[int, int, int]] = []
    log: list[IterationLogEntry] = []

    # Stage 1: graph-based reduction of shared pairs.
    g = build_graph(work)
    idx = build_index(g)
    mass_trace = [idx.total_mass()]
    if observer is not None:
        observer.on_start(g, idx, work)
    h = work.next_var
    iterations_stage1 = 0
    while idx and work.degree() > k:
        if deadline is not None and time.perf_counter() > deadline:
            raise ReductionTimeout(f"stage 1 exceeded {time_limit} s after {iterations_stage1} iterations")
        i, j = select_pair(idx, q, rng)
        beta = g.beta(i, j)
        if observer is not None:
            observer.before_step(g, idx, work, i, j, h)
        labels = update_graph_data(g, idx, work, i, j, h)
        replace_var_pair(g, work, i, j, h, labels=labels)
        for pm in penalty_term(i, j, h).terms.values():
            penalty.add_term(pm.vars, pm.coeff)
        penalty.next_var = work.next_var
        subs.append((h, i, j))
        log.append(IterationLogEntry(1, (i, j), h, beta, len(labels)))
        mass_trace.append(idx.total_mass())
        if observer is not None:
            observer.after_step(g, idx, work, i, j, h, labels)
        iterations_stage1 += 1
        h = work.next_var

    # Stage 2: no pair is shared any more, so leftover high-degree monomials
    # reduce independently.  Fresh ids are pre-assigned per monomial in
    # ascending variable-tuple order, which makes the processing order
    # immaterial and runs reproducible.
    leftovers = sorted(
        (z for z, m in work.terms.items() if len(m.vars) > k),
        key=lambda z: work.terms[z].vars,
    )
    ranges: list[tuple[int, range]] = []
    for z in leftovers:
        need = len(work.terms[z].vars) - _final_size(len(work.terms[z].vars), k)
        ranges.append((z, range(h, h + need)))
        h += need

    iterations_stage2 = 0
    for z, id_range in ranges:
        fresh = iter(id_range)
        while len(work.terms[z].vars) > k:
            if deadline is not None and time.perf_counter() > deadline:
                raise ReductionTimeout(f"stage 2 exceeded {time_limit} s")
            pass_subs = multi_reduce(work, penalty, z, fresh)
            subs.extend(pass_subs)
            for (fh, fi, fj) in pass_subs:
                log.append(IterationLogEntry(2, (fi, fj), fh, 1, 1))
            iterations_stage2 += 1

    work.next_var = max(work.next_var, h)
    penalty.next_var = work.next_var
    return ReductionResult(
        reduced=work,
        penalty=penalty,
        substitutions=subs,
        iterations_stage1=iterations_stage1,
        iterations_stage2=iterations_stage2,
        log=log,
        multi_edge_mass_trace=mass_trace,
        meta=dict(meta) if meta else {},
    )


def lsr(
    f: PBF,
    q: float,
    rng: random.Random | None = None,
    *,
    time_limit: float | None = None,
    observer: StageOneObserver | None = None,
    meta: dict | None = None,
) -> ReductionResult:
    """Quadratise f: stage-1 shared-pair replacement, then stage-2 halving.

    Inputs that are already quadratic pass through unchanged with an empty
    penalty.  The result together with ``c * penalty`` for a large enough
    scale c preserves f pointwise under minimisation of the auxiliaries.
    """
    return reduce_to_degree_k(f, q, 2, rng, time_limit=time_limit, observer=observer, meta=meta)
