"""Seeded random PBF instances with uniform per-degree density."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from itertools import combinations

from .pbf import PBF


@dataclass(frozen=True, slots=True)
class GeneratorSpec:
    """Parameters for one random instance.

    The same density applies to every degree class 1..degree: class k gets
    ceil(density * C(n, k)) distinct monomials sampled uniformly without
    replacement.  Coefficients are uniform over [coeff_lo, coeff_hi] with
    exact zero excluded.  Identical specs always produce identical PBFs.
    """

    n: int
    degree: int
    density: float
    seed: int = 0
    coeff_lo: float = -10.0
    coeff_hi: float = 10.0

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"n must be positive, got {self.n}")
        if not 1 <= self.degree <= self.n:
            raise ValueError(f"degree must lie in [1, n], got {self.degree} with n={self.n}")
        if not 0.0 < self.density <= 1.0:
            raise ValueError(f"density must lie in (0, 1], got {self.density}")
        if self.coeff_lo >= self.coeff_hi:
            raise ValueError("coefficient range must be a nonempty interval")


def term_count(n: int, k: int, density: float) -> int:
    """ceil(density * C(n, k)); the rounding guard absorbs float noise like 0.2*20."""
    total = math.comb(n, k)
    return math.ceil(round(density * total, 9))


# Above this population size, enumerate-and-sample would allocate too much;
# rejection sampling is cheap there because the draw fraction is tiny.
_ENUMERATE_LIMIT = 500_000


def _sample_monomials(rng: random.Random, n: int, k: int, count: int) -> list[tuple[int, ...]]:
    population = math.comb(n, k)
    if count > population:
        raise ValueError(f"cannot draw {count} distinct degree-{k} monomials from C({n},{k})={population}")
    if population <= _ENUMERATE_LIMIT or count * 4 >= population:
        pool = list(combinations(range(1, n + 1), k))
        return rng.sample(pool, count)
    seen: set[tuple[int, ...]] = set()
    out: list[tuple[int, ...]] = []
    while len(out) < count:
        candidate = tuple(sorted(rng.sample(range(1, n + 1), k)))
        if candidate not in seen:
            seen.add(candidate)
            out.append(candidate)
    return out


def generate(spec: GeneratorSpec) -> PBF:
    """Draw the instance described by ``spec``; deterministic for a fixed seed."""
    rng = random.Random(spec.seed)
    f = PBF(n_original=spec.n)
    for k in range(1, spec.degree + 1):
        count = term_count(spec.n, k, spec.density)
        for vs in _sample_monomials(rng, spec.n, k, count):
            coeff = 0.0
            while coeff == 0.0:
                coeff = rng.uniform(spec.coeff_lo, spec.coeff_hi)
            f.add_term(vs, coeff)
    return f
