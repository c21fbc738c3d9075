import math

import pytest

from quadratise.pbf import PBF


@pytest.fixture
def eq3() -> PBF:
    """The running example: pi*x1*x2*x3 - 13*x2*x4*x5*x6 + 7*x1*x3 over 6 variables."""
    return PBF.from_terms(
        [((1, 2, 3), math.pi), ((2, 4, 5, 6), -13.0), ((1, 3), 7.0)],
        n=6,
    )


@pytest.fixture
def chained() -> PBF:
    """x1*x2 + x1*x2*x3 + x1*x2*x3*x4: every term shares the pair (1, 2)."""
    return PBF.from_terms(
        [((1, 2), 1.0), ((1, 2, 3), 1.0), ((1, 2, 3, 4), 1.0)],
        n=4,
    )
