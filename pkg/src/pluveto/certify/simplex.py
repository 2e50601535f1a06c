"""A self-contained dense simplex solver.

Two-phase tableau method over numpy float64.  Pivoting uses Dantzig's rule
for speed and falls back to Bland's smallest-index rule permanently once the
objective stalls, which guarantees termination on the highly degenerate
programs this package produces (most right-hand sides are zero).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

__all__ = ["LPStatus", "LPResult", "linprog_max"]

_STALL_LIMIT = 64


class LPStatus(Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"
    ITERATION_LIMIT = "iteration_limit"


@dataclass
class LPResult:
    status: LPStatus
    x: np.ndarray | None
    value: float | None
    iterations: int


def linprog_max(
    c,
    A_ub=None,
    b_ub=None,
    A_eq=None,
    b_eq=None,
    *,
    tol: float = 1e-9,
    max_iter: int | None = None,
) -> LPResult:
    """Maximize c @ x subject to A_ub @ x <= b_ub, A_eq @ x = b_eq, x >= 0."""
    c = np.asarray(c, dtype=float)
    nvars = c.size
    rows: list[np.ndarray] = []
    rhs: list[float] = []
    kinds: list[str] = []  # "le" or "eq" after sign normalization
    if A_ub is not None and len(A_ub):
        for a, b in zip(np.asarray(A_ub, dtype=float), np.asarray(b_ub, dtype=float)):
            if b < 0:
                rows.append(-a)
                rhs.append(-b)
                kinds.append("ge")
            else:
                rows.append(a)
                rhs.append(b)
                kinds.append("le")
    if A_eq is not None and len(A_eq):
        for a, b in zip(np.asarray(A_eq, dtype=float), np.asarray(b_eq, dtype=float)):
            if b < 0:
                rows.append(-a)
                rhs.append(-b)
            else:
                rows.append(a)
                rhs.append(b)
            kinds.append("eq")

    nrows = len(rows)
    n_slack = sum(k != "eq" for k in kinds)
    n_art = sum(k != "le" for k in kinds)
    ncols = nvars + n_slack + n_art
    T = np.zeros((nrows + 1, ncols + 1))
    basis = np.empty(nrows, dtype=int)
    s = nvars
    a = nvars + n_slack
    for i, (row, b, kind) in enumerate(zip(rows, rhs, kinds)):
        T[i, :nvars] = row
        T[i, -1] = b
        if kind == "le":
            T[i, s] = 1.0
            basis[i] = s
            s += 1
        elif kind == "ge":
            T[i, s] = -1.0
            s += 1
            T[i, a] = 1.0
            basis[i] = a
            a += 1
        else:
            T[i, a] = 1.0
            basis[i] = a
            a += 1

    art_start = nvars + n_slack
    iterations = 0
    budget = max_iter if max_iter is not None else 500 * (nrows + ncols + 1)

    if n_art:
        # phase 1: maximize -(artificial total); bottom row holds z_j - c_j
        T[-1, :] = 0.0
        T[-1, art_start:ncols] = 1.0
        for i in range(nrows):
            if basis[i] >= art_start:
                T[-1] -= T[i]
        status, iterations = _pivot_loop(
            T, basis, np.arange(ncols), tol, budget, iterations
        )
        if status is not LPStatus.OPTIMAL:
            return LPResult(status, None, None, iterations)
        if T[-1, -1] < -tol:
            return LPResult(LPStatus.INFEASIBLE, None, None, iterations)
        _evict_artificials(T, basis, art_start, tol)
        # rows whose artificial could not be evicted are redundant; blank them
        keep = np.array([basis[i] < art_start for i in range(nrows)])
        if not keep.all():
            T = np.vstack([T[:-1][keep], T[-1:]])
            basis = basis[keep]
            nrows = len(basis)

    # phase 2 objective: maximize c @ x  ->  bottom row holds -reduced costs
    T[-1, :] = 0.0
    T[-1, :nvars] = -c
    for i in range(nrows):
        if abs(T[-1, basis[i]]) > 0:
            T[-1] -= T[-1, basis[i]] * T[i]
    allowed = np.arange(art_start)  # artificials may never re-enter
    status, iterations = _pivot_loop(T, basis, allowed, tol, budget, iterations)
    if status is not LPStatus.OPTIMAL:
        return LPResult(status, None, None, iterations)
    x = np.zeros(ncols)
    x[basis] = T[:-1, -1]
    x = x[:nvars]
    np.clip(x, 0.0, None, out=x)
    return LPResult(LPStatus.OPTIMAL, x, float(c @ x), iterations)


def _pivot_loop(T, basis, allowed, tol, budget, iterations):
    """Run simplex pivots to optimality on the maximization tableau in place."""
    use_bland = False
    stall = 0
    while True:
        reduced = T[-1, allowed]
        if use_bland:
            negatives = np.flatnonzero(reduced < -tol)
            if negatives.size == 0:
                return LPStatus.OPTIMAL, iterations
            pc = allowed[negatives[0]]
        else:
            j = int(np.argmin(reduced))
            if reduced[j] >= -tol:
                return LPStatus.OPTIMAL, iterations
            pc = allowed[j]
        col = T[:-1, pc]
        positive = col > tol
        if not positive.any():
            return LPStatus.UNBOUNDED, iterations
        ratios = np.full(col.shape, np.inf)
        ratios[positive] = T[:-1, -1][positive] / col[positive]
        best = ratios.min()
        ties = np.flatnonzero(ratios <= best + tol * max(1.0, abs(best)))
        pr = int(ties[np.argmin(basis[ties])])  # smallest basic index on ties

        before = T[-1, -1]
        pivot = T[pr, pc]
        T[pr] /= pivot
        column = T[:, pc].copy()
        column[pr] = 0.0
        T -= np.outer(column, T[pr])
        T[:, pc] = 0.0
        T[pr, pc] = 1.0
        basis[pr] = pc

        iterations += 1
        if iterations > budget:
            return LPStatus.ITERATION_LIMIT, iterations
        if not use_bland:
            if T[-1, -1] - before <= tol:
                stall += 1
                if stall >= _STALL_LIMIT:
                    use_bland = True
            else:
                stall = 0


def _evict_artificials(T, basis, art_start, tol):
    """Pivot basic artificial variables out on any usable structural column."""
    for i in range(len(basis)):
        if basis[i] < art_start:
            continue
        row = T[i, :art_start]
        candidates = np.flatnonzero(np.abs(row) > max(tol, 1e-7))
        if candidates.size == 0:
            continue  # redundant row, dropped by the caller
        pc = int(candidates[np.argmax(np.abs(row[candidates]))])
        pivot = T[i, pc]
        T[i] /= pivot
        column = T[:, pc].copy()
        column[i] = 0.0
        T -= np.outer(column, T[i])
        T[:, pc] = 0.0
        T[i, pc] = 1.0
        basis[i] = pc
