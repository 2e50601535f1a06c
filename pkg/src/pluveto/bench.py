"""Random metric elections, peer selection, potential winners, experiments.

Instances are generated with the standard library RNG so a seed fixes every
byte of an experiment report.  Distance ties in generated rankings are
broken by candidate index: they have probability zero under the continuous
distributions used, but determinism must not depend on that.
"""

from __future__ import annotations

import math
import random
import re
from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Sequence

from .core import Election, WeightVector, top
from .certify.domination import domination_graph, has_perfect_matching
from .certify.metric import Metric, social_cost
from .rules import (
    bottom_among,
    committee_select,
    plurality_veto,
    q_social_cost,
    randomized_veto,
)

__all__ = [
    "EuclideanPopulation",
    "sample_population",
    "generate_euclidean",
    "peer_selection",
    "adaptive_peer_veto",
    "adaptive_winner_set",
    "potential_winners",
    "convex_hull_vertices",
    "ExperimentConfig",
    "ExperimentRecord",
    "ExperimentReport",
    "parse_config",
    "run_experiment",
    "report_to_csv",
]

EXACT_ORDER_CAP = 8  # 8! orders; beyond this only the superset mode is offered


def _sample_points(count: int, dim: int, distribution: str, rng: random.Random):
    if distribution == "uniform":
        return [tuple(rng.random() for _ in range(dim)) for _ in range(count)]
    if distribution == "gaussian":
        return [tuple(rng.gauss(0.0, 1.0) for _ in range(dim)) for _ in range(count)]
    raise ValueError(f"unknown distribution {distribution!r}")


def _rankings_from_distances(rows: Sequence[Sequence[float]]) -> Election:
    rankings = []
    for row in rows:
        order = sorted(range(len(row)), key=lambda c: (row[c], c))
        rankings.append(tuple(order))
    return Election(tuple(rankings))


@dataclass(frozen=True)
class EuclideanPopulation:
    """A sampled embedding of voters and candidates in R^dimension."""

    dimension: int
    voters: tuple[tuple[float, ...], ...]
    candidates: tuple[tuple[float, ...], ...]
    seed: int

    def metric(self) -> Metric:
        return Metric(
            tuple(
                tuple(math.dist(v, c) for c in self.candidates)
                for v in self.voters
            )
        )

    def election(self) -> Election:
        return _rankings_from_distances(self.metric().d)


def sample_population(
    n: int,
    m: int,
    dim: int = 2,
    distribution: str = "gaussian",
    seed: int = 0,
) -> EuclideanPopulation:
    if n < 1 or m < 1 or dim < 1:
        raise ValueError("n, m and dim must all be at least 1")
    rng = random.Random(seed)
    voters = tuple(_sample_points(n, dim, distribution, rng))
    candidates = tuple(_sample_points(m, dim, distribution, rng))
    return EuclideanPopulation(dim, voters, candidates, seed)


def generate_euclidean(
    n: int,
    m: int,
    dim: int = 2,
    distribution: str = "gaussian",
    seed: int = 0,
) -> tuple[Election, Metric]:
    """Sample voter and candidate points i.i.d. and derive the election whose
    rankings sort candidates by distance (candidate index breaks ties)."""
    population = sample_population(n, m, dim, distribution, seed)
    metric = population.metric()
    return _rankings_from_distances(metric.d), metric


def peer_selection(
    points: Sequence[Sequence[float]] | int,
    seed: int = 0,
    dim: int = 2,
    distribution: str = "gaussian",
) -> tuple[Election, Metric, tuple[tuple[float, ...], ...]]:
    """An election whose voters and candidates are the same point set, so
    every agent ranks herself first.  ``points`` is either explicit
    coordinates (scalars are accepted for one dimension) or an agent count
    to sample.  Returns the election, its metric, and the points."""
    if isinstance(points, int):
        if points < 1:
            raise ValueError("need at least one agent")
        pts = _sample_points(points, dim, distribution, random.Random(seed))
    else:
        pts = [
            tuple(p) if isinstance(p, (tuple, list)) else (float(p),)
            for p in points
        ]
        if not pts:
            raise ValueError("need at least one agent")
    rows = tuple(tuple(math.dist(a, b) for b in pts) for a in pts)
    return _rankings_from_distances(rows), Metric(rows), tuple(pts)


def adaptive_peer_veto(e: Election, start: int) -> tuple[int, tuple[int, ...]]:
    """Peer-selection veto with adaptively chosen voters.

    The start agent's own vote is canceled up front (eliminating her, since
    every agent tops herself), then each acting voter eliminates her bottom
    choice among the survivors and that eliminated agent votes next.  The
    last eliminated agent wins.  Returns (winner, elimination order).  This
    is deliberately a separate procedure: canceling the start vote by fiat
    puts it outside the plain veto rule.
    """
    if any(top(e, v) != v for v in range(e.n)):
        raise ValueError("adaptive mode requires a peer-selection election "
                         "(every agent ranks herself first)")
    if not 0 <= start < e.n:
        raise ValueError(f"start agent {start} out of range")
    alive = set(range(e.n))
    alive.discard(start)
    eliminated = [start]
    voter = start
    while alive:
        victim = bottom_among(e, voter, alive)
        alive.discard(victim)
        eliminated.append(victim)
        voter = victim
    return eliminated[-1], tuple(eliminated)


def adaptive_winner_set(e: Election) -> frozenset[int]:
    """Winners of the adaptive peer-selection veto over all start agents."""
    return frozenset(adaptive_peer_veto(e, s)[0] for s in range(e.n))


def potential_winners(e: Election, mode: str = "exact") -> frozenset[int]:
    """Candidates that can win the veto rule under some processing order.

    ``exact`` enumerates every voter order (restricted to n <= 8 because of
    the factorial blow-up); ``superset`` returns the candidates whose
    domination graphs admit perfect matchings, a set that contains every
    potential winner and works at any size.
    """
    if mode == "exact":
        if e.n > EXACT_ORDER_CAP:
            raise ValueError(
                f"exact enumeration is capped at n = {EXACT_ORDER_CAP}; "
                "use mode='superset'"
            )
        return frozenset(
            plurality_veto(e, order).winner for order in permutations(range(e.n))
        )
    if mode == "superset":
        return frozenset(
            c for c in range(e.m) if has_perfect_matching(domination_graph(e, c))[0]
        )
    raise ValueError(f"mode must be 'exact' or 'superset', got {mode!r}")


def _orient(a, b, c) -> float:
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def convex_hull_vertices(points: Sequence[tuple[float, float]]) -> frozenset[int]:
    """Indices of the strict convex-hull vertices of a 2-D point set
    (monotone chain; collinear boundary points are not vertices)."""
    idx = sorted(range(len(points)), key=lambda i: points[i])
    if len(idx) <= 2:
        return frozenset(idx)

    def half(indices):
        chain: list[int] = []
        for i in indices:
            while (
                len(chain) >= 2
                and _orient(points[chain[-2]], points[chain[-1]], points[i]) <= 0
            ):
                chain.pop()
            chain.append(i)
        return chain

    lower = half(idx)
    upper = half(list(reversed(idx)))
    return frozenset(lower[:-1] + upper[:-1])


# --- experiments -----------------------------------------------------------

_RULE_RE = re.compile(r"^randomized_veto\((\d+)\)$")
_KNOWN_RULES = {"plurality_veto", "random_dictatorship", "committee_select"}


@dataclass(frozen=True)
class ExperimentConfig:
    rules: tuple[str, ...]
    instances: int
    voters: int
    candidates: int
    dim: int = 2
    distribution: str = "gaussian"
    seed: int = 0
    committee_size: int = 2
    committee_rank: int = 2

    def __post_init__(self):
        for rule in self.rules:
            if rule not in _KNOWN_RULES and not _RULE_RE.match(rule):
                raise ValueError(f"unknown rule name {rule!r}")
        if self.instances < 1 or self.voters < 1 or self.candidates < 1:
            raise ValueError("instances, voters and candidates must be positive")
        if "committee_select" in self.rules:
            k, q = self.committee_size, self.committee_rank
            if not 1 <= k <= self.candidates:
                raise ValueError("committee_size must be in 1..candidates")
            if not (1 <= q <= k and 2 * q > k):
                raise ValueError("committee_rank must be in 1..k and exceed k/2")


@dataclass(frozen=True)
class ExperimentRecord:
    seed: int
    rule: str
    winner: str
    cost: float
    opt_cost: float

    @property
    def ratio(self) -> float:
        return self.cost / self.opt_cost if self.opt_cost else 1.0


@dataclass(frozen=True)
class ExperimentReport:
    config: ExperimentConfig
    records: tuple[ExperimentRecord, ...]

    def max_ratio(self, rule: str) -> float:
        return max(r.ratio for r in self.records if r.rule == rule)

    def mean_ratio(self, rule: str) -> float:
        ratios = [r.ratio for r in self.records if r.rule == rule]
        return sum(ratios) / len(ratios)

    def summary(self) -> str:
        lines = []
        for rule in self.config.rules:
            lines.append(
                f"{rule}: instances={self.config.instances} "
                f"mean_ratio={self.mean_ratio(rule):.6f} "
                f"max_ratio={self.max_ratio(rule):.6f}"
            )
        return "\n".join(lines) + "\n"


_CONFIG_KEYS = {
    "rules": lambda s: tuple(tok.strip() for tok in s.split(",") if tok.strip()),
    "instances": int,
    "voters": int,
    "candidates": int,
    "dim": int,
    "distribution": str,
    "seed": int,
    "committee_size": int,
    "committee_rank": int,
}


def parse_config(text: str) -> ExperimentConfig:
    """Flat ``key = value`` lines; ``#`` starts a comment."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected key = value, got {line!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        if key not in _CONFIG_KEYS:
            raise ValueError(f"line {lineno}: unknown config key {key!r}")
        values[key] = _CONFIG_KEYS[key](value.strip())
    missing = {"rules", "instances", "voters", "candidates"} - values.keys()
    if missing:
        raise ValueError(f"config is missing keys: {sorted(missing)}")
    return ExperimentConfig(**values)


def _expected_cost(w: WeightVector, d: Metric) -> float:
    return float(sum(float(x) * social_cost(c, d) for c, x in enumerate(w)))


def _format_distribution(w: WeightVector) -> str:
    return " ".join(f"{x.numerator}/{x.denominator}" for x in w)


def run_experiment(config: ExperimentConfig) -> ExperimentReport:
    """Evaluate the configured rules on freshly generated instances.

    Each rule's realized cost is measured against the hindsight optimum
    under the generated metric (for randomized rules: the exact expected
    cost of the returned distribution).  Instance i uses the derived seed
    ``config.seed * 1_000_003 + i``, so reports are reproducible bit for
    bit.
    """
    records: list[ExperimentRecord] = []
    for i in range(config.instances):
        inst_seed = config.seed * 1_000_003 + i
        e, d = generate_euclidean(
            config.voters, config.candidates, config.dim,
            config.distribution, inst_seed,
        )
        opt = min(social_cost(c, d) for c in range(e.m))
        for rule in config.rules:
            records.append(_evaluate_rule(rule, e, d, opt, inst_seed, config))
    return ExperimentReport(config, tuple(records))


def _evaluate_rule(
    rule: str,
    e: Election,
    d: Metric,
    opt: float,
    inst_seed: int,
    config: ExperimentConfig,
) -> ExperimentRecord:
    if rule == "plurality_veto":
        winner = plurality_veto(e).winner
        return ExperimentRecord(inst_seed, rule, str(winner), social_cost(winner, d), opt)
    if rule == "random_dictatorship":
        w = randomized_veto(e, 0)
        return ExperimentRecord(
            inst_seed, rule, _format_distribution(w), _expected_cost(w, d), opt
        )
    match = _RULE_RE.match(rule)
    if match:
        k = min(int(match.group(1)), e.n - 1)
        w = randomized_veto(e, k)
        return ExperimentRecord(
            inst_seed, rule, _format_distribution(w), _expected_cost(w, d), opt
        )
    # committee_select
    k, q = config.committee_size, config.committee_rank
    committee = committee_select(e, k, q)
    cost = float(q_social_cost(committee, d, q, e.n))
    opt_committee = min(
        float(q_social_cost(members, d, q, e.n))
        for members in combinations(range(e.m), k)
    )
    label = "+".join(str(c) for c in committee)
    return ExperimentRecord(inst_seed, rule, label, cost, opt_committee)


def report_to_csv(report: ExperimentReport) -> str:
    lines = ["seed,rule,winner,cost,opt_cost,ratio"]
    for r in report.records:
        lines.append(
            f"{r.seed},{r.rule},{r.winner},{r.cost!r},{r.opt_cost!r},{r.ratio!r}"
        )
    return "\n".join(lines) + "\n"
