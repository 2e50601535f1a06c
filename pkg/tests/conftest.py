"""Shared fixtures: the four-ballot worked example and its reference flow."""

from fractions import Fraction as F

import pytest

from pluveto import Election, WeightVector

# Four voters over four candidates; this election exercises every layer:
# plurality scores (2, 1, 0, 1), veto sequence 3, 1, 0, 0, winner 0.
DEMO_RANKINGS = (
    (0, 1, 2, 3),
    (0, 2, 3, 1),
    (1, 2, 3, 0),
    (3, 1, 0, 2),
)

# A hand-checked certifying flow on the demo election for the distribution
# (2/3, 1/3, 0, 0) absorbing in column 3.  Nodes are (voter, candidate).
# Expected per-voter costs: 4/3, 3, 8/3, 1; overall cost 3.
REFERENCE_FLOW = {
    ((0, 0), (0, 1)): F(2, 3),
    ((0, 1), (0, 2)): F(7, 6),
    ((0, 2), (0, 3)): F(7, 6),
    ((1, 0), (1, 2)): F(5, 3),
    ((1, 2), (1, 3)): F(5, 3),
    ((1, 1), (0, 1)): F(1, 6),
    ((1, 1), (2, 1)): F(1, 6),
    ((2, 0), (1, 0)): F(2, 3),
    ((2, 1), (2, 2)): F(5, 6),
    ((2, 2), (2, 3)): F(7, 6),
    ((3, 0), (1, 0)): F(1, 3),
    ((3, 0), (3, 2)): F(1, 3),
    ((3, 1), (2, 1)): F(1, 3),
    ((3, 2), (2, 2)): F(1, 3),
}

REFERENCE_FLOW_W = (F(2, 3), F(1, 3), F(0), F(0))
REFERENCE_FLOW_CSTAR = 3
REFERENCE_FLOW_COSTS = (F(4, 3), F(3), F(8, 3), F(1))


@pytest.fixture
def demo():
    return Election(DEMO_RANKINGS)


@pytest.fixture
def demo_w():
    return WeightVector(REFERENCE_FLOW_W)


def random_election(rng, n, m) -> Election:
    return Election(tuple(tuple(rng.sample(range(m), m)) for _ in range(n)))


def random_simplex(rng, size, max_denominator=24):
    """A random rational point of the probability simplex (exact)."""
    denom = rng.randint(1, max_denominator)
    cuts = sorted(rng.randint(0, denom) for _ in range(size - 1))
    parts = []
    prev = 0
    for cut in cuts:
        parts.append(cut - prev)
        prev = cut
    parts.append(denom - prev)
    return WeightVector(tuple(F(p, denom) for p in parts))
