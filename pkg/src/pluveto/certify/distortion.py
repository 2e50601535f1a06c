"""Exact worst-case distortion of a winner distribution, by linear program.

The adversary chooses a pseudo-metric consistent with the ballots that
maximizes the expected winner cost while pinning a reference candidate's
cost to 1.  Maximizing over reference candidates gives the distortion of
the distribution.  The optimizer's variable values form a witness distance
matrix, returned alongside the value.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ..core import Election, WeightVector
from .metric import Metric
from .simplex import LPStatus, linprog_max

__all__ = ["DistortionResult", "LPInternalError", "worst_case_distortion", "distortion"]

DEFAULT_MAX_VARIABLES = 64


class LPInternalError(RuntimeError):
    """The solver reported a state that valid inputs cannot produce."""


@dataclass(frozen=True)
class DistortionResult:
    value: float
    witness: Metric
    cstar: int


@lru_cache(maxsize=256)
def _ballot_constraints(rankings: tuple[tuple[int, ...], ...]):
    """Inequality rows shared by every distortion LP over one election.

    Variables are indexed x[c * n + v].  Rows: the four-point triangle
    inequality for every (c != c', v != v'), and ranking consistency for
    adjacent pairs of each ballot (the full pairwise family follows by
    transitivity).
    """
    e = Election(rankings)
    n, m = e.n, e.m
    nv = n * m
    rows = []
    for c in range(m):
        for c2 in range(m):
            if c == c2:
                continue
            for v in range(n):
                for v2 in range(n):
                    if v == v2:
                        continue
                    row = np.zeros(nv)
                    row[c * n + v] += 1.0
                    row[c * n + v2] -= 1.0
                    row[c2 * n + v2] -= 1.0
                    row[c2 * n + v] -= 1.0
                    rows.append(row)
    for v in range(n):
        ranking = e.rankings[v]
        for better, worse in zip(ranking, ranking[1:]):
            row = np.zeros(nv)
            row[better * n + v] += 1.0
            row[worse * n + v] -= 1.0
            rows.append(row)
    if rows:
        A_ub = np.array(rows)
    else:
        A_ub = np.zeros((0, nv))
    return A_ub, np.zeros(len(rows))


def worst_case_distortion(
    e: Election,
    w: WeightVector,
    cstar: int,
    *,
    tol: float = 1e-9,
    max_variables: int = DEFAULT_MAX_VARIABLES,
) -> DistortionResult:
    """Largest expected cost of the distribution w over ballot-consistent
    pseudo-metrics in which candidate ``cstar`` has total cost exactly 1.

    Returns the LP optimum and the maximizing distance matrix.  Instances
    are capped at ``max_variables`` = n * m variables because the constraint
    count grows as n^2 m^2; raise the cap explicitly for bigger desks.
    """
    if len(w) != e.m:
        raise ValueError(f"w must have one entry per candidate ({e.m})")
    if not 0 <= cstar < e.m:
        raise ValueError(f"cstar out of range 0..{e.m - 1}")
    n, m = e.n, e.m
    if n * m > max_variables:
        raise ValueError(
            f"instance has {n * m} variables, over the cap of {max_variables}"
        )
    A_ub, b_ub = _ballot_constraints(e.rankings)
    A_eq = np.zeros((1, n * m))
    A_eq[0, cstar * n : (cstar + 1) * n] = 1.0
    objective = np.zeros(n * m)
    for c in range(m):
        objective[c * n : (c + 1) * n] = float(w[c])
    result = linprog_max(objective, A_ub, b_ub, A_eq, [1.0], tol=tol)
    if result.status is LPStatus.UNBOUNDED:
        # reachable only when w puts weight on a candidate that no voter
        # ranks first: such a candidate can sit arbitrarily far from every
        # voter, so the distortion is infinite.  The veto rules never
        # produce such distributions.
        raise LPInternalError(
            "distortion LP is unbounded: the distribution has infinite "
            "worst-case distortion (weight on a candidate with no "
            "first-place votes)"
        )
    if result.status is not LPStatus.OPTIMAL:
        raise LPInternalError(f"distortion LP did not converge: {result.status.value}")
    d = tuple(
        tuple(float(result.x[c * n + v]) for c in range(m)) for v in range(n)
    )
    return DistortionResult(result.value, Metric(d), cstar)


def distortion(
    e: Election,
    w: WeightVector,
    *,
    tol: float = 1e-9,
    max_variables: int = DEFAULT_MAX_VARIABLES,
) -> DistortionResult:
    """Worst-case expected distortion of w: the maximum over all reference
    candidates of :func:`worst_case_distortion`."""
    best: DistortionResult | None = None
    for cstar in range(e.m):
        r = worst_case_distortion(
            e, w, cstar, tol=tol, max_variables=max_variables
        )
        if best is None or r.value > best.value:
            best = r
    assert best is not None
    return best
