"""Pseudo-Boolean functions in multilinear form.

A pseudo-Boolean function (PBF) maps {0,1}^n to the reals and has a unique
multilinear polynomial representation: a sum of monomials, each a real
coefficient times a product of distinct binary variables.  This module holds
the canonical in-memory representation plus parsing, arithmetic, evaluation
and the structural metrics everything else is built on.

Variables are 1-based integers.  Original variables occupy 1..n; auxiliary
variables introduced by reducers are assigned n+1, n+2, ... in introduction
order.  Every monomial gets a running index z (starting at 1, never reused)
so that external references to a monomial stay stable while its variable set
mutates during reduction.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence


class ParseError(ValueError):
    """Raised when serialized PBF input is malformed."""


@dataclass(frozen=True, slots=True)
class Monomial:
    """A coefficient times a product of distinct variables.

    ``vars`` is strictly increasing (x^2 = x means no variable repeats) and
    the coefficient is finite and nonzero.  An empty variable tuple denotes
    the constant term.
    """

    vars: tuple[int, ...]
    coeff: float

    def __post_init__(self) -> None:
        vs = self.vars
        for k, v in enumerate(vs):
            if not isinstance(v, int) or v < 1:
                raise ValueError(f"variable ids must be positive integers, got {v!r}")
            if k and vs[k - 1] >= v:
                raise ValueError(f"variables must be strictly increasing, got {vs}")
        c = self.coeff
        if not isinstance(c, (int, float)) or isinstance(c, bool) or not math.isfinite(c):
            raise ValueError(f"coefficient must be a finite real, got {c!r}")
        if c == 0:
            raise ValueError("zero-coefficient monomials are not stored")

    @property
    def degree(self) -> int:
        return len(self.vars)

    def contains_pair(self, i: int, j: int) -> bool:
        return i in self.vars and j in self.vars


class PBF:
    """A pseudo-Boolean function as a dictionary of indexed monomials.

    ``terms`` maps each running index z to its monomial and ``index_of`` is
    the exact inverse on variable sets; no two monomials ever share a
    variable set.  ``n_original`` is the declared count of original
    variables and ``next_var`` the next fresh variable id, so auxiliary ids
    never collide with originals.
    """

    __slots__ = ("terms", "index_of", "n_original", "next_var", "_next_index", "_deg_hist")

    def __init__(self, n_original: int = 0) -> None:
        if n_original < 0:
            raise ValueError("n_original must be nonnegative")
        self.terms: dict[int, Monomial] = {}
        self.index_of: dict[tuple[int, ...], int] = {}
        self.n_original = n_original
        self.next_var = n_original + 1
        self._next_index = 1
        self._deg_hist: dict[int, int] = {}

    # ------------------------------------------------------------------
    # Construction
    # ------------------------------------------------------------------

    @classmethod
    def from_terms(cls, terms: Iterable[tuple[Sequence[int], float]], n: int | None = None) -> "PBF":
        """Build from (vars, coeff) pairs; duplicate variable sets are summed."""
        entries = [(tuple(vs), float(c)) for vs, c in terms]
        if n is None:
            n = max((max(vs) for vs, _ in entries if vs), default=0)
        f = cls(n_original=n)
        for vs, c in entries:
            f.add_term(vs, c)
        return f

    def copy(self) -> "PBF":
        new = PBF.__new__(PBF)
        new.terms = dict(self.terms)
        new.index_of = dict(self.index_of)
        new.n_original = self.n_original
        new.next_var = self.next_var
        new._next_index = self._next_index
        new._deg_hist = dict(self._deg_hist)
        return new

    # ------------------------------------------------------------------
    # Mutation
    # ------------------------------------------------------------------

    def add_term(self, vars: Sequence[int], coeff: float) -> None:
        """Merge a monomial into the function.

        If the variable set already exists the coefficients are summed and
        the term is dropped when the sum is exactly zero.  Adding a zero
        coefficient is a no-op.
        """
        if coeff == 0:
            return
        vs = tuple(sorted(vars))
        if len(set(vs)) != len(vs):
            raise ValueError(f"duplicate variable in term {vs}")
        z = self.index_of.get(vs)
        if z is None:
            self._insert(Monomial(vs, float(coeff)))
            return
        merged = self.terms[z].coeff + coeff
        if merged == 0:
            self._remove(z)
        else:
            self.terms[z] = Monomial(vs, merged)

    def add_monomial(self, m: Monomial) -> None:
        self.add_term(m.vars, m.coeff)

    def rewrite_term(self, z: int, new_vars: tuple[int, ...]) -> None:
        """Replace the variable set of term z, keeping its coefficient and index.

        The new set must not collide with any existing term; reducers
        guarantee this because every rewrite introduces a fresh variable.
        """
        m = self.terms[z]
        if new_vars in self.index_of:
            raise ValueError(f"rewrite of term {z} collides with existing variable set {new_vars}")
        del self.index_of[m.vars]
        self._hist_dec(len(m.vars))
        replacement = Monomial(new_vars, m.coeff)
        self.terms[z] = replacement
        self.index_of[new_vars] = z
        self._hist_inc(len(new_vars))
        top = new_vars[-1] if new_vars else 0
        if top >= self.next_var:
            self.next_var = top + 1

    def _insert(self, m: Monomial) -> None:
        z = self._next_index
        self._next_index += 1
        self.terms[z] = m
        self.index_of[m.vars] = z
        self._hist_inc(len(m.vars))
        top = m.vars[-1] if m.vars else 0
        if top >= self.next_var:
            self.next_var = top + 1

    def _remove(self, z: int) -> None:
        m = self.terms.pop(z)
        del self.index_of[m.vars]
        self._hist_dec(len(m.vars))

    def _hist_inc(self, d: int) -> None:
        self._deg_hist[d] = self._deg_hist.get(d, 0) + 1

    def _hist_dec(self, d: int) -> None:
        c = self._deg_hist[d] - 1
        if c:
            self._deg_hist[d] = c
        else:
            del self._deg_hist[d]

    # ------------------------------------------------------------------
    # Queries
    # ------------------------------------------------------------------

    def degree(self) -> int:
        """Maximum monomial degree; 0 for the empty function."""
        return max(self._deg_hist, default=0)

    def degree_count(self, k: int) -> int:
        """Number of monomials of degree exactly k."""
        return self._deg_hist.get(k, 0)

    def density(self, k: int, n: int | None = None) -> float:
        """Degree-k density: present degree-k monomials over C(n, k)."""
        if n is None:
            n = max(self.n_original, self.next_var - 1)
        if k < 1:
            raise ValueError("k must be positive")
        if n < k:
            raise ValueError(f"k={k} exceeds variable count n={n}")
        return self.degree_count(k) / math.comb(n, k)

    def evaluate(self, assignment: Mapping[int, int]) -> float:
        """Evaluate at a 0/1 assignment covering every variable of the function."""
        total = 0.0
        for m in self.terms.values():
            prod = 1
            for v in m.vars:
                try:
                    x = assignment[v]
                except KeyError:
                    raise ValueError(f"assignment is missing variable x{v}") from None
                if x not in (0, 1):
                    raise ValueError(f"assignment value for x{v} must be 0 or 1, got {x!r}")
                prod *= x
            if prod:
                total += m.coeff
        return total

    def variables(self) -> set[int]:
        out: set[int] = set()
        for m in self.terms.values():
            out.update(m.vars)
        return out

    def monomials(self) -> Iterator[Monomial]:
        return iter(self.terms.values())

    def __len__(self) -> int:
        return len(self.terms)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PBF):
            return NotImplemented
        return (
            self.n_original == other.n_original
            and {m.vars: m.coeff for m in self.terms.values()}
            == {m.vars: m.coeff for m in other.terms.values()}
        )

    def __repr__(self) -> str:
        return f"PBF(n={self.n_original}, terms={len(self.terms)}, degree={self.degree()})"

    # ------------------------------------------------------------------
    # Serialization
    # ------------------------------------------------------------------

    def to_json_dict(self) -> dict:
        n = max(self.n_original, self.next_var - 1)
        ordered = sorted(self.terms.values(), key=lambda m: m.vars)
        return {"n": n, "terms": [{"vars": list(m.vars), "coeff": m.coeff} for m in ordered]}


def parse_pbf(text: str) -> PBF:
    """Parse the JSON wire format ``{"n": int, "terms": [{"vars": [...], "coeff": ...}]}``.

    Variable ids are 1-based and must not exceed n.  Duplicate variable sets
    are summed; terms whose summed coefficient is zero are dropped.  A
    duplicate variable inside one term and non-finite coefficients are
    rejected.
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc}") from exc
    if not isinstance(data, dict) or "n" not in data or "terms" not in data:
        raise ParseError("expected an object with 'n' and 'terms'")
    n = data["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise ParseError(f"'n' must be a nonnegative integer, got {n!r}")
    raw_terms = data["terms"]
    if not isinstance(raw_terms, list):
        raise ParseError("'terms' must be a list")

    merged: dict[tuple[int, ...], float] = {}
    order: list[tuple[int, ...]] = []
    for k, entry in enumerate(raw_terms):
        if not isinstance(entry, dict) or "vars" not in entry or "coeff" not in entry:
            raise ParseError(f"term {k}: expected an object with 'vars' and 'coeff'")
        raw_vars = entry["vars"]
        if not isinstance(raw_vars, list) or not all(
            isinstance(v, int) and not isinstance(v, bool) for v in raw_vars
        ):
            raise ParseError(f"term {k}: 'vars' must be a list of integers")
        if len(set(raw_vars)) != len(raw_vars):
            raise ParseError(f"term {k}: duplicate variable in {raw_vars}")
        for v in raw_vars:
            if v < 1:
                raise ParseError(f"term {k}: variable ids are 1-based, got {v}")
            if v > n:
                raise ParseError(f"term {k}: variable x{v} exceeds declared n={n}")
        coeff = entry["coeff"]
        if isinstance(coeff, bool) or not isinstance(coeff, (int, float)) or not math.isfinite(coeff):
            raise ParseError(f"term {k}: coefficient must be a finite number, got {coeff!r}")
        vs = tuple(sorted(raw_vars))
        if vs not in merged:
            order.append(vs)
            merged[vs] = 0.0
        merged[vs] += float(coeff)

    f = PBF(n_original=n)
    for vs in order:
        f.add_term(vs, merged[vs])
    return f


def serialize_pbf(f: PBF) -> str:
    """Canonical JSON form: vars ascending, terms sorted lexicographically by vars."""
    return json.dumps(f.to_json_dict(), indent=2, sort_keys=True)


def penalty_term(i: int, j: int, h: int) -> PBF:
    """The quadratic gadget 3*y_h + x_i*x_j - 2*x_i*y_h - 2*x_j*y_h.

    It is zero exactly when y_h = x_i * x_j and strictly positive otherwise,
    which is what makes pair substitution value-preserving under
    minimisation of y_h.
    """
    if i == j:
        raise ValueError("penalty term requires two distinct variables")
    if i > j:
        raise ValueError(f"penalty term requires i < j, got ({i}, {j})")
    if h in (i, j):
        raise ValueError("auxiliary variable must be fresh")
    p = PBF(n_original=max(i, j, h))
    p.add_term((h,), 3.0)
    p.add_term((i, j), 1.0)
    p.add_term(tuple(sorted((i, h))), -2.0)
    p.add_term(tuple(sorted((j, h))), -2.0)
    return p


def scale_heuristic(f: PBF) -> float:
    """Sum of the positive coefficients of f, or 1.0 when none exist.

    A conservative magnitude for scaling the penalty function; it is never
    applied automatically, callers choose their own scale.
    """
    s = sum(m.coeff for m in f.terms.values() if m.coeff > 0)
    return s if s > 0 else 1.0
