"""Independent brute-force oracles for reduction correctness.

Everything here re-derives its expected values from first principles:
exhaustive enumeration of assignments for the quadratisation criterion,
from-scratch graph rebuilds for incremental maintenance, and closed-form
counting for the variable bounds.  None of it shares code paths with the
reducers it checks.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field

import numpy as np

from .graph import build_graph, build_index, graph_diff, rebuild_equals
from .lsr import ReductionResult, StageOneObserver, lsr
from .pbf import PBF, penalty_term


@dataclass(frozen=True, slots=True)
class CheckResult:
    name: str
    passed: bool
    witness: dict | None = None
    detail: str = ""


@dataclass
class VerificationReport:
    """Outcome of one verification run; failing checks carry a counterexample."""

    instance_id: str
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, witness: dict | None = None, detail: str = "") -> None:
        self.checks.append(CheckResult(name, passed, witness, detail))

    def to_json_dict(self) -> dict:
        return {
            "instance_id": self.instance_id,
            "passed": self.passed,
            "totals": {
                "checks": len(self.checks),
                "failed": sum(not c.passed for c in self.checks),
            },
            "checks": [
                {"name": c.name, "passed": c.passed, "witness": c.witness, "detail": c.detail}
                for c in self.checks
            ],
        }

    def serialize(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, sort_keys=True)


# ----------------------------------------------------------------------
# Exhaustive quadratisation oracle
# ----------------------------------------------------------------------


def sufficient_scale(f: PBF) -> float:
    """A penalty scale that provably preserves minima for any input signs.

    Every inconsistent auxiliary contributes at least 1 to the penalty
    function, while flipping auxiliaries can move the objective by at most
    the total coefficient magnitude of f.  So any c above sum(|coeff|)
    makes cheating strictly unprofitable.  (The sum of positive coefficients
    alone is not enough once negative coefficients dominate: activating a
    large negative term by one inconsistent auxiliary would gain more than
    the penalty costs.)
    """
    return 1.0 + sum(abs(m.coeff) for m in f.terms.values())


def _bit_matrix(bits: int) -> np.ndarray:
    """All 2^bits assignments as an int8 matrix; column p is the bit of var p+1."""
    rows = 1 << bits
    r = np.arange(rows, dtype=np.uint32)
    x = np.empty((rows, bits), dtype=np.int8)
    for p in range(bits):
        x[:, p] = (r >> p) & 1
    return x


def _eval_columns(f: PBF, cols: dict[int, np.ndarray], rows: int) -> np.ndarray:
    out = np.zeros(rows, dtype=np.float64)
    for m in f.terms.values():
        if not m.vars:
            out += m.coeff
            continue
        prod = cols[m.vars[0]].astype(np.float64)
        for v in m.vars[1:]:
            prod = prod * cols[v]
        out += m.coeff * prod
    return out


def _eval_table(f: PBF, x: np.ndarray) -> np.ndarray:
    cols = {p + 1: x[:, p] for p in range(x.shape[1])}
    return _eval_columns(f, cols, x.shape[0])


def check_quadratisation(
    original: PBF,
    result: ReductionResult,
    c: float,
    *,
    max_bits: int = 22,
    tol: float = 1e-9,
    instance_id: str = "",
) -> VerificationReport:
    """Exhaustively verify that min over auxiliaries recovers the original.

    For every x in {0,1}^n the minimum of reduced + c*penalty over all
    auxiliary assignments must equal original(x) within ``tol``, and the
    assignment obtained by propagating y_h = x_i * x_j through the
    substitution chain must attain that minimum with zero penalty.  Refuses
    instances above ``max_bits`` total bits rather than sampling silently.
    """
    n = original.n_original
    n_aux = len(result.substitutions)
    total = n + n_aux
    if total > max_bits:
        raise ValueError(
            f"exhaustive check needs {total} bits (n={n}, introduced={n_aux}) "
            f"but the cap is {max_bits}; raise max_bits explicitly to allow it"
        )
    top_var = max(original.n_original, result.reduced.next_var - 1)
    if top_var > total:
        raise ValueError(f"result references variable x{top_var} beyond n + introduced = {total}")

    report = VerificationReport(instance_id or f"quadratisation-n{n}-aux{n_aux}")
    x_full = _bit_matrix(total)
    f_prime = _eval_table(result.reduced, x_full) + c * _eval_table(result.penalty, x_full)
    # Assignment r has the x-bits low and the y-bits high, so reshaping by
    # rows of 2^n groups equal-y slices; the min over axis 0 is min over y.
    min_table = f_prime.reshape(-1, 1 << n).min(axis=0)

    x_orig = _bit_matrix(n)
    f_table = _eval_table(original, x_orig)

    def witness_at(r: int) -> dict:
        return {f"x{v}": int(x_orig[r, v - 1]) for v in range(1, n + 1)}

    gap = np.abs(min_table - f_table)
    worst = int(gap.argmax()) if n else 0
    report.add(
        "min_over_aux_matches_original",
        bool(gap.max() <= tol) if gap.size else True,
        None
        if gap.size == 0 or gap.max() <= tol
        else {
            "assignment": witness_at(worst),
            "original": float(f_table[worst]),
            "min_reduced": float(min_table[worst]),
        },
        detail=f"checked {1 << n} assignments x {1 << n_aux} auxiliary states, scale c={c}",
    )

    # Propagate the consistent auxiliary values through the substitution chain.
    cols: dict[int, np.ndarray] = {v: x_orig[:, v - 1].astype(np.float64) for v in range(1, n + 1)}
    for (h, i, j) in result.substitutions:
        cols[h] = cols[i] * cols[j]
    rows = x_orig.shape[0]
    val_consistent = _eval_columns(result.reduced, cols, rows) + c * _eval_columns(
        result.penalty, cols, rows
    )
    pen_consistent = _eval_columns(result.penalty, cols, rows)

    gap2 = np.abs(val_consistent - min_table)
    worst2 = int(gap2.argmax()) if gap2.size else 0
    report.add(
        "consistent_assignment_attains_minimum",
        bool(gap2.max() <= tol) if gap2.size else True,
        None
        if gap2.size == 0 or gap2.max() <= tol
        else {
            "assignment": witness_at(worst2),
            "value_at_consistent": float(val_consistent[worst2]),
            "min_reduced": float(min_table[worst2]),
        },
    )
    gap3 = np.abs(pen_consistent)
    worst3 = int(gap3.argmax()) if gap3.size else 0
    report.add(
        "penalty_zero_at_consistent_assignment",
        bool(gap3.max() <= tol) if gap3.size else True,
        None
        if gap3.size == 0 or gap3.max() <= tol
        else {"assignment": witness_at(worst3), "penalty": float(pen_consistent[worst3])},
    )
    return report


# ----------------------------------------------------------------------
# Penalty gadget property
# ----------------------------------------------------------------------


def check_penalty_property() -> VerificationReport:
    """Enumerate all 8 assignments of the gadget: 0 when consistent, else 1 or 3."""
    report = VerificationReport("penalty-gadget")
    p = penalty_term(1, 2, 3)
    for xi in (0, 1):
        for xj in (0, 1):
            for y in (0, 1):
                value = p.evaluate({1: xi, 2: xj, 3: y})
                consistent = xi * xj == y
                ok = value == 0.0 if consistent else (value > 0 and value in (1.0, 3.0))
                report.add(
                    f"p({xi},{xj},{y})",
                    ok,
                    None if ok else {"x_i": xi, "x_j": xj, "y_h": y, "value": value},
                    detail=f"value={value}",
                )
    return report


# ----------------------------------------------------------------------
# Introduced-variable bounds
# ----------------------------------------------------------------------


def variable_bounds(f: PBF) -> tuple[int, int]:
    """(min, max) possible introduced variables for quadratising f.

    The largest monomial needs at least degree-2 substitutions; at most,
    every monomial of degree >= 2 is reduced on its own, one variable per
    excess degree.  Degree-2 monomials contribute zero to both.
    """
    lo = 0
    hi = 0
    for m in f.terms.values():
        d = len(m.vars)
        if d >= 2:
            lo = max(lo, d - 2)
            hi += d - 2
    return lo, hi


def check_variable_bounds(original: PBF, result: ReductionResult, instance_id: str = "") -> VerificationReport:
    report = VerificationReport(instance_id or "variable-bounds")
    lo, hi = variable_bounds(original)
    introduced = len(result.substitutions)
    report.add(
        "introduced_within_bounds",
        lo <= introduced <= hi,
        None if lo <= introduced <= hi else {"introduced": introduced, "min": lo, "max": hi},
        detail=f"bounds [{lo}, {hi}], introduced {introduced}",
    )
    aux = [h for (h, _, _) in result.substitutions]
    distinct = len(set(aux)) == len(aux) and all(h > original.n_original for h in aux)
    report.add(
        "auxiliaries_distinct_and_fresh",
        distinct,
        None if distinct else {"auxiliaries": aux, "n_original": original.n_original},
    )
    return report


# ----------------------------------------------------------------------
# Incremental graph coherence
# ----------------------------------------------------------------------


class GraphCoherenceError(Exception):
    def __init__(self, name: str, detail: str, witness: dict | None = None):
        super().__init__(f"{name}: {detail}")
        self.name = name
        self.detail = detail
        self.witness = witness


class _CoherenceObserver(StageOneObserver):
    """Asserts the structural theorems around every stage-1 iteration."""

    def __init__(self) -> None:
        self.iterations = 0
        self._pre_edges: set[tuple[int, int, int]] = set()
        self._half_nodes: set[int] = set()

    def on_start(self, g, idx, f):
        # Multiplicity can never exceed the number of monomials that could
        # contain a given pair.
        n = max(f.n_original, f.next_var - 1)
        deg = f.degree()
        cap = sum(_comb(n - 2, k) for k in range(0, max(deg - 2, 0) + 1))
        for pair in g.pairs():
            if g.beta(*pair) > cap:
                raise GraphCoherenceError(
                    "multiplicity_bound",
                    f"beta{pair} = {g.beta(*pair)} exceeds bound {cap}",
                    {"pair": list(pair)},
                )

    def before_step(self, g, idx, f, i, j, h):
        labels = set(g.labels(i, j))
        containing = {z for z, m in f.terms.items() if i in m.vars and j in m.vars}
        if labels != containing:
            raise GraphCoherenceError(
                "labels_identify_containing_monomials",
                f"edge labels between {i} and {j} disagree with the polynomial",
                {"labels": sorted(labels), "containing": sorted(containing)},
            )
        if not any(len(f.terms[z].vars) > 2 for z in labels):
            raise GraphCoherenceError(
                "multi_edge_implies_high_degree",
                f"pair ({i}, {j}) has multiplicity {len(labels)} but no monomial of degree > 2",
                {"labels": sorted(labels)},
            )
        self._pre_edges = set(g.edges())
        nbr_i = g.neighbours(i)
        nbr_j = g.neighbours(j)
        self._half_nodes = (nbr_i ^ nbr_j) - {i, j}

    def after_step(self, g, idx, f, i, j, h, z_labels):
        self.iterations += 1
        post = set(g.edges())
        for (a, b, z) in self._pre_edges:
            untouched = i not in (a, b) and j not in (a, b)
            half = a in self._half_nodes or b in self._half_nodes
            if (untouched or half) and (a, b, z) not in post:
                raise GraphCoherenceError(
                    "invariant_edges_survive",
                    f"edge ({a}, {b}, {z}) should be invariant under reduction of ({i}, {j})",
                    {"edge": [a, b, z], "reduced_pair": [i, j]},
                )
        if not rebuild_equals(g, f):
            missing, extra = graph_diff(g, f)
            raise GraphCoherenceError(
                "rebuild_equals",
                "incrementally maintained graph deviates from a from-scratch rebuild",
                {"missing": missing, "extra": extra},
            )
        if build_index(g) != idx:
            raise GraphCoherenceError(
                "index_matches_graph",
                "multiplicity index deviates from a rebuild off the graph",
                None,
            )


def _comb(n: int, k: int) -> int:
    return math.comb(n, k) if 0 <= k <= n else 0


def check_incremental_graph(
    f: PBF,
    q: float,
    seed: int,
    *,
    max_monomials: int = 200,
    instance_id: str = "",
) -> VerificationReport:
    """Run LSR with per-iteration graph verification hooks.

    After every stage-1 iteration the incrementally maintained graph must
    equal a from-scratch rebuild, edges not incident to the reduced pair
    (and edges of nodes touching only one endpoint) must survive unchanged,
    and every selected pair must be backed by a monomial of degree > 2.
    """
    if len(f.terms) > max_monomials:
        raise ValueError(
            f"instance has {len(f.terms)} monomials; per-iteration rebuilds are capped at {max_monomials}"
        )
    report = VerificationReport(instance_id or f"graph-coherence-q{q}-seed{seed}")
    observer = _CoherenceObserver()
    try:
        result = lsr(f, q, random.Random(seed), observer=observer)
    except GraphCoherenceError as exc:
        report.add(exc.name, False, exc.witness, exc.detail)
        return report
    report.add(
        "graph_coherent_every_iteration",
        True,
        None,
        detail=f"{observer.iterations} stage-1 iterations verified",
    )
    mass = result.multi_edge_mass_trace
    decreasing = all(a > b for a, b in zip(mass, mass[1:]))
    report.add(
        "multi_edge_mass_strictly_decreasing",
        decreasing,
        None if decreasing else {"trace": mass},
        detail=f"trace length {len(mass)}",
    )
    quadratic = result.reduced.degree() <= 2
    report.add("reduced_is_quadratic", quadratic, None if quadratic else {"degree": result.reduced.degree()})
    return report
