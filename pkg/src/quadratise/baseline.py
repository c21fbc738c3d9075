"""Monomial-scan quadratisation baseline with three pair-selection variants.

This is the classical iterative scheme: pick a variable pair, replace it in
every monomial by a fresh variable, add a penalty gadget, repeat while the
degree exceeds two.  Selection and replacement both rescan the whole
monomial dictionary every iteration; that cost profile is deliberate, the
baseline exists as a correctness cross-check and as the slow reference for
benchmarks.  It shares the PBF types but never touches the graph machinery.
"""

from __future__ import annotations

import time
from enum import Enum
from itertools import combinations
from typing import Callable, Sequence

from .lsr import IterationLogEntry, ReductionResult, ReductionTimeout
from .pbf import PBF, penalty_term


class SelectionVariant(str, Enum):
    """How the next variable pair is chosen.

    SPARSE takes the first pair of the lexicographically first monomial of
    maximum degree; MEDIUM the pair occurring most often among the maximum
    degree monomials; DENSE the pair occurring most often among all
    monomials.  Ties always break lexicographically by (i, j).
    """

    SPARSE = "sparse"
    MEDIUM = "medium"
    DENSE = "dense"


def _count_by_rescan(f: PBF, candidates: set[tuple[int, int]], degree: int | None) -> tuple[int, int]:
    # Each candidate pair rescans the whole monomial dictionary for its
    # occurrence count.  Deliberately NOT a shared counting pass: the point
    # of this baseline is the repeated-search cost profile of the
    # monomial-based implementation, which is what makes it day-scale on
    # dense inputs while the graph-based reducer stays local.
    counts: list[tuple[int, tuple[int, int]]] = []
    for i, j in candidates:
        occ = 0
        for m in f.terms.values():
            if degree is not None and len(m.vars) != degree:
                continue
            if i in m.vars and j in m.vars:
                occ += 1
        counts.append((occ, (i, j)))
    counts.sort(key=lambda item: (-item[0], item[1]))
    return counts[0][1]


def get_next_var_pair(f: PBF, variant: SelectionVariant) -> tuple[int, int]:
    """Select the next pair to replace; requires deg(f) > 2.

    DENSE counts occurrences over all monomials, MEDIUM only within the
    maximum-degree monomials; ties break lexicographically.  A pair is only
    a candidate if it occurs in at least one monomial of degree > 2:
    replacing a pair that lives solely in quadratic monomials would burn an
    auxiliary variable without reducing the degree.
    """
    max_deg = f.degree()
    if max_deg <= 2:
        raise ValueError("no monomial of degree > 2 to reduce")
    variant = SelectionVariant(variant)

    if variant is SelectionVariant.SPARSE:
        first = min(m.vars for m in f.terms.values() if len(m.vars) == max_deg)
        return first[0], first[1]

    candidates: set[tuple[int, int]] = set()
    if variant is SelectionVariant.MEDIUM:
        for m in f.terms.values():
            if len(m.vars) == max_deg:
                candidates.update(combinations(m.vars, 2))
        return _count_by_rescan(f, candidates, max_deg)
    for m in f.terms.values():
        if len(m.vars) > 2:
            candidates.update(combinations(m.vars, 2))
    return _count_by_rescan(f, candidates, None)


def scripted_selection(pairs: Sequence[tuple[int, int]]) -> Callable[[PBF], tuple[int, int]]:
    """Selection override replaying a fixed pair sequence (for regressions)."""
    queue = list(pairs)

    def select(f: PBF) -> tuple[int, int]:
        if not queue:
            raise ValueError("scripted selection exhausted before the function became quadratic")
        return queue.pop(0)

    return select


def quadratise_baseline(
    f: PBF,
    variant: SelectionVariant = SelectionVariant.DENSE,
    *,
    select: Callable[[PBF], tuple[int, int]] | None = None,
    time_limit: float | None = None,
    meta: dict | None = None,
) -> ReductionResult:
    """Iterative quadratisation by full-scan pair replacement.

    Already-quadratic inputs pass through unchanged.  ``select`` overrides
    the variant's pair choice when given.  The replacement step scans every
    monomial per iteration.
    """
    variant = SelectionVariant(variant)
    deadline = time.perf_counter() + time_limit if time_limit is not None else None

    work = f.copy()
    penalty = PBF(n_original=work.n_original)
    penalty.next_var = work.next_var
    subs: list[tuple[int, int, int]] = []
    log: list[IterationLogEntry] = []
    h = work.next_var
    iterations = 0

    while work.degree() > 2:
        if deadline is not None and time.perf_counter() > deadline:
            raise ReductionTimeout(f"baseline exceeded {time_limit} s after {iterations} iterations")
        if select is not None:
            i, j = select(work)
            if i > j:
                i, j = j, i
        else:
            i, j = get_next_var_pair(work, variant)

        touched = [z for z, m in work.terms.items() if i in m.vars and j in m.vars]
        if not touched:
            raise ValueError(f"selected pair ({i}, {j}) occurs in no monomial")
        for z in sorted(touched):
            m = work.terms[z]
            work.rewrite_term(z, tuple(sorted((set(m.vars) - {i, j}) | {h})))
        for pm in penalty_term(i, j, h).terms.values():
            penalty.add_term(pm.vars, pm.coeff)
        penalty.next_var = work.next_var
        subs.append((h, i, j))
        log.append(IterationLogEntry(1, (i, j), h, len(touched), len(touched)))
        iterations += 1
        h = work.next_var

    result_meta = {"algorithm": "baseline", "variant": variant.value}
    if meta:
        result_meta.update(meta)
    return ReductionResult(
        reduced=work,
        penalty=penalty,
        substitutions=subs,
        iterations_stage1=iterations,
        iterations_stage2=0,
        log=log,
        multi_edge_mass_trace=[],
        meta=result_meta,
    )
