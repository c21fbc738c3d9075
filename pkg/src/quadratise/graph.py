"""Labelled multigraph over variable pairs, with a sorted multiplicity index.

Every monomial of degree >= 2 contributes one edge per variable pair it
contains, labelled with the monomial's running index.  The multiplicity
beta(i, j) of a node pair is the number of parallel edges between i and j,
i.e. the number of monomials containing both variables.  The index buckets
node pairs by multiplicity (only beta >= 2 is stored) so that the reducer
can pick its next pair by percentile rank over the distinct multiplicities.

The graph is maintained incrementally under reduction steps: replacing the
pair (i, j) with a fresh variable h only touches edges incident to i or j
whose label sits on an edge between i and j, so an update is linear in the
size of the affected monomials rather than in the whole function.
"""

from __future__ import annotations

import json
import math
import random
from itertools import combinations
from typing import Iterator

from sortedcontainers import SortedDict

from .pbf import PBF

Pair = tuple[int, int]


def _ordered(a: int, b: int) -> Pair:
    if a == b:
        raise ValueError(f"self-edge on node {a} (x^2 = x)")
    return (a, b) if a < b else (b, a)


class MultiGraph:
    """Undirected multigraph; adjacency maps each node pair to its label set."""

    __slots__ = ("_adj",)

    def __init__(self) -> None:
        self._adj: dict[Pair, set[int]] = {}

    def add_edge(self, a: int, b: int, z: int) -> None:
        self._adj.setdefault(_ordered(a, b), set()).add(z)

    def remove_edge(self, a: int, b: int, z: int) -> None:
        pair = _ordered(a, b)
        labels = self._adj.get(pair)
        if labels is None or z not in labels:
            raise ValueError(f"edge ({pair[0]}, {pair[1]}, {z}) not present")
        labels.remove(z)
        if not labels:
            del self._adj[pair]

    def remove_pair(self, a: int, b: int) -> frozenset[int]:
        """Drop all edges between a and b, returning their labels."""
        return frozenset(self._adj.pop(_ordered(a, b), ()))

    def labels(self, a: int, b: int) -> frozenset[int]:
        return frozenset(self._adj.get(_ordered(a, b), ()))

    def has_edge(self, a: int, b: int, z: int) -> bool:
        return z in self._adj.get(_ordered(a, b), ())

    def beta(self, a: int, b: int) -> int:
        return len(self._adj.get(_ordered(a, b), ()))

    def pairs(self) -> Iterator[Pair]:
        return iter(self._adj)

    def edges(self) -> Iterator[tuple[int, int, int]]:
        for (i, j), labels in self._adj.items():
            for z in labels:
                yield (i, j, z)

    def edge_count(self) -> int:
        return sum(len(s) for s in self._adj.values())

    def multi_edge_mass(self) -> int:
        """Total number of edges lying in multi-edges (beta >= 2)."""
        return sum(len(s) for s in self._adj.values() if len(s) >= 2)

    def neighbours(self, a: int) -> set[int]:
        out = set()
        for i, j in self._adj:
            if i == a:
                out.add(j)
            elif j == a:
                out.add(i)
        return out

    def edge_dump(self) -> str:
        """Canonical debug dump: JSON array of [i, j, z] sorted lexicographically."""
        return json.dumps(sorted([i, j, z] for (i, j, z) in self.edges()), separators=(",", ":"))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MultiGraph):
            return NotImplemented
        return self._adj == other._adj

    def __repr__(self) -> str:
        return f"MultiGraph(pairs={len(self._adj)}, edges={self.edge_count()})"


def build_graph(f: PBF) -> MultiGraph:
    """Graph of f: each monomial with >= 2 variables labels all its C(|m|, 2) pairs."""
    g = MultiGraph()
    for z, m in f.terms.items():
        if len(m.vars) < 2:
            continue
        for a, b in combinations(m.vars, 2):
            g.add_edge(a, b, z)
    return g


class MultiplicityIndex:
    """Sorted buckets multiplicity -> node pairs; multiplicities 0 and 1 are never stored.

    Pairs connected by at most one edge are of no interest to the reducer
    (a single edge may stem from a plain quadratic monomial), so keeping
    them out of the index keeps both updates and percentile lookups small.
    """

    __slots__ = ("_buckets",)

    def __init__(self) -> None:
        self._buckets: SortedDict = SortedDict()

    def add_pair(self, pair: Pair, beta: int) -> None:
        if beta >= 2:
            self._buckets.setdefault(beta, set()).add(pair)

    def discard_pair(self, pair: Pair, beta: int) -> None:
        if beta < 2:
            return
        bucket = self._buckets.get(beta)
        if bucket is None or pair not in bucket:
            raise ValueError(f"pair {pair} not indexed at multiplicity {beta}")
        bucket.remove(pair)
        if not bucket:
            del self._buckets[beta]

    def move_pair(self, pair: Pair, old_beta: int, new_beta: int) -> None:
        if old_beta == new_beta:
            return
        self.discard_pair(pair, old_beta)
        self.add_pair(pair, new_beta)

    def multiplicities(self) -> tuple[int, ...]:
        """Distinct stored multiplicities in ascending order."""
        return tuple(self._buckets.keys())

    def bucket(self, beta: int) -> frozenset[Pair]:
        return frozenset(self._buckets.get(beta, ()))

    def pair_count(self) -> int:
        return sum(len(s) for s in self._buckets.values())

    def total_mass(self) -> int:
        """Sum of beta over all indexed pairs; the stage-1 termination measure."""
        return sum(beta * len(pairs) for beta, pairs in self._buckets.items())

    def __bool__(self) -> bool:
        return bool(self._buckets)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MultiplicityIndex):
            return NotImplemented
        return dict(self._buckets) == dict(other._buckets)

    def __repr__(self) -> str:
        return f"MultiplicityIndex(buckets={dict(self._buckets)!r})"


def build_index(g: MultiGraph) -> MultiplicityIndex:
    idx = MultiplicityIndex()
    for pair in g.pairs():
        idx.add_pair(pair, g.beta(*pair))
    return idx


def select_pair(idx: MultiplicityIndex, q: float, rng: random.Random) -> Pair:
    """Pick a uniformly random pair from the percentile-q multiplicity bucket.

    With B the ascending distinct multiplicities, the bucket is the
    ceil(q*|B|)-th smallest; q=0 clamps to the smallest stored multiplicity
    (a pair occurring in at least two monomials).  The tiny epsilon guards
    against float products like 0.8*5 overshooting the exact integer rank.
    """
    if not 0.0 <= q <= 1.0:
        raise ValueError(f"percentile q must lie in [0, 1], got {q}")
    betas = idx.multiplicities()
    if not betas:
        raise ValueError("cannot select from an empty multiplicity index")
    rank = math.ceil(q * len(betas) - 1e-12)
    rank = min(max(rank, 1), len(betas))
    candidates = sorted(idx.bucket(betas[rank - 1]))
    return candidates[rng.randrange(len(candidates))]


def update_graph_data(
    g: MultiGraph, idx: MultiplicityIndex, f: PBF, i: int, j: int, h: int
) -> frozenset[int]:
    """Evolve graph and index for the replacement of pair (i, j) by fresh h.

    Must run while f still holds the pre-replacement monomials: the labels Z
    on the (i, j) edges identify every affected monomial, and for each other
    variable k of such a monomial the edges (k,i,z) and (k,j,z) are remapped
    to (k,h,z).  All (i, j) edges disappear; the penalty term contributes no
    edges.  Only buckets of touched pairs are reallocated.  Returns Z.
    """
    i, j = _ordered(i, j)
    zs = g.labels(i, j)
    if len(zs) < 2:
        raise ValueError(f"pair ({i}, {j}) has multiplicity {len(zs)} < 2")
    if h < f.next_var:
        raise ValueError(f"auxiliary variable {h} is not fresh (next_var={f.next_var})")

    touched: dict[Pair, int] = {}

    def note(a: int, b: int) -> None:
        pair = _ordered(a, b)
        if pair not in touched:
            touched[pair] = g.beta(a, b)

    note(i, j)
    plans: list[tuple[int, tuple[int, ...]]] = []
    for z in sorted(zs):
        m = f.terms.get(z)
        if m is None or i not in m.vars or j not in m.vars:
            raise ValueError(f"label {z} on pair ({i}, {j}) does not match a monomial containing both")
        others = tuple(k for k in m.vars if k != i and k != j)
        plans.append((z, others))
        for k in others:
            note(k, i)
            note(k, j)
            note(k, h)

    for z, others in plans:
        for k in others:
            g.remove_edge(k, i, z)
            g.remove_edge(k, j, z)
            g.add_edge(k, h, z)
    g.remove_pair(i, j)

    for pair, old_beta in touched.items():
        idx.move_pair(pair, old_beta, g.beta(*pair))
    return zs


def rebuild_equals(g: MultiGraph, f: PBF) -> bool:
    """Oracle for incremental maintenance: does g equal a from-scratch rebuild?

    f must exclude penalty monomials (reducers keep the penalty in a
    separate function, so the working polynomial always qualifies).
    """
    return build_graph(f) == g


def graph_diff(g: MultiGraph, f: PBF) -> tuple[list[list[int]], list[list[int]]]:
    """(missing, extra) edges of g relative to build_graph(f), in dump order."""
    expected = build_graph(f)
    have = set(g.edges())
    want = set(expected.edges())
    missing = sorted([i, j, z] for (i, j, z) in want - have)
    extra = sorted([i, j, z] for (i, j, z) in have - want)
    return missing, extra
