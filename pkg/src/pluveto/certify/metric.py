"""Voter-candidate distance matrices and their validity checks.

Only voter-to-candidate distances matter, so a metric is an n x m matrix.
The triangle requirement takes the four-point form
``d(v, c) <= d(v, c') + d(v', c') + d(v', c)``.  Zero distances between
distinct points are allowed throughout: every guarantee in this package
holds for pseudo-metrics.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from ..core import Election

__all__ = ["Metric", "social_cost", "metric_to_csv", "metric_from_csv"]

DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class Metric:
    """d[v][c] = distance between voter v and candidate c."""

    d: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "d", tuple(tuple(row) for row in self.d))
        if not self.d or not self.d[0]:
            raise ValueError("a metric needs at least one voter and candidate")
        width = len(self.d[0])
        if any(len(row) != width for row in self.d):
            raise ValueError("all metric rows must have equal length")

    @property
    def n(self) -> int:
        return len(self.d)

    @property
    def m(self) -> int:
        return len(self.d[0])

    def __getitem__(self, v: int) -> tuple[float, ...]:
        return self.d[v]

    def validate(self, tol: float = DEFAULT_TOL) -> None:
        """Raise ValueError on a negative entry or a four-point triangle
        violation beyond ``tol``."""
        d = self.d
        for v in range(self.n):
            for c in range(self.m):
                if d[v][c] < -tol:
                    raise ValueError(f"negative distance d({v},{c}) = {d[v][c]}")
        for v in range(self.n):
            for v2 in range(self.n):
                for c in range(self.m):
                    for c2 in range(self.m):
                        bound = d[v][c2] + d[v2][c2] + d[v2][c]
                        if d[v][c] > bound + tol:
                            raise ValueError(
                                f"triangle violation: d({v},{c}) = {d[v][c]} > "
                                f"d({v},{c2}) + d({v2},{c2}) + d({v2},{c}) = {bound}"
                            )

    def is_valid(self, tol: float = DEFAULT_TOL) -> bool:
        try:
            self.validate(tol)
        except ValueError:
            return False
        return True

    def consistent_with(self, e: Election, tol: float = DEFAULT_TOL) -> bool:
        """True iff every voter's ranking is non-decreasing in distance."""
        if e.n != self.n or e.m != self.m:
            return False
        for v, ranking in enumerate(e.rankings):
            row = self.d[v]
            for a, b in zip(ranking, ranking[1:]):
                if row[a] > row[b] + tol:
                    return False
        return True

    def all_positive(self) -> bool:
        return all(x > 0 for row in self.d for x in row)


def social_cost(c: int, d: Metric | Sequence[Sequence[float]]):
    """Total distance from candidate c to all voters."""
    rows = d.d if isinstance(d, Metric) else d
    return sum(row[c] for row in rows)


def metric_to_csv(metric: Metric) -> str:
    """n rows x m columns, one voter per row."""
    return "\n".join(",".join(repr(x) for x in row) for row in metric.d) + "\n"


def metric_from_csv(text: str) -> Metric:
    rows = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        rows.append(tuple(float(tok) for tok in line.split(",")))
    return Metric(tuple(rows))
