"""The veto-based voting rules and the committee rule built on top of them.

All rules are pure functions of (election, processing order / selection
policy).  There is no canonical voter order: callers pass one explicitly,
defaulting to ballot-file order, because the winner may depend on it.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .core import Election, WeightVector, bottom_among, plurality_scores, top

__all__ = [
    "VetoRound",
    "VetoTrace",
    "FractionalStep",
    "FractionalTrace",
    "Committee",
    "plurality_veto",
    "fractional_veto",
    "randomized_veto",
    "validate_trace",
    "scores_after",
    "format_trace",
    "q_cost",
    "q_social_cost",
    "committee_rank_key",
    "committee_compare",
    "committee_select",
    "top_prefix_committees",
    "induced_committee_election",
    "lowest_index_policy",
]


@dataclass(frozen=True)
class VetoRound:
    """One round of the veto stage.

    ``index`` is 1-based.  ``active`` is the candidate set with positive score
    at the start of the round, ``vetoed`` the round voter's bottom choice in
    it, and ``paired_voter`` the distinct voter whose first-place vote this
    veto cancels (their top choice equals ``vetoed``).
    """

    index: int
    voter: int
    active: frozenset[int]
    vetoed: int
    paired_voter: int


@dataclass(frozen=True)
class VetoTrace:
    rounds: tuple[VetoRound, ...]
    final_scores: tuple[int, ...]
    winner: int

    @property
    def order(self) -> tuple[int, ...]:
        return tuple(r.voter for r in self.rounds)

    @property
    def pairing(self) -> tuple[int, ...]:
        """paired voter per round, i.e. the matching round-voter -> canceled voter."""
        return tuple(r.paired_voter for r in self.rounds)


def _check_order(order: Sequence[int] | None, n: int) -> tuple[int, ...]:
    if order is None:
        return tuple(range(n))
    order = tuple(order)
    if sorted(order) != list(range(n)):
        raise ValueError(f"order must be a permutation of 0..{n - 1}, got {order!r}")
    return order


def plurality_veto(e: Election, order: Sequence[int] | None = None) -> VetoTrace:
    """Run the plurality-then-multi-round-veto rule and record a full trace.

    Every candidate starts with a score equal to his first-place vote count.
    Voters act once each, in ``order``; each decrements the score of her
    bottom choice among candidates whose score is still positive.  The last
    candidate whose score reaches zero wins.

    The paired voter recorded per round is taken from a FIFO queue per
    candidate of the voters whose top choice is that candidate (queued in
    voter-index order).  This makes the cancellation pairing deterministic
    and auditable; it is always a bijection on voters.
    """
    order = _check_order(order, e.n)
    scores = list(plurality_scores(e))
    queues: dict[int, deque[int]] = {c: deque() for c in range(e.m)}
    for v in range(e.n):
        queues[top(e, v)].append(v)

    rounds: list[VetoRound] = []
    for i, v in enumerate(order, start=1):
        active = frozenset(c for c in range(e.m) if scores[c] > 0)
        c = bottom_among(e, v, active)
        scores[c] -= 1
        paired = queues[c].popleft()
        rounds.append(VetoRound(i, v, active, c, paired))
    winner = rounds[-1].vetoed
    return VetoTrace(tuple(rounds), tuple(scores), winner)


def validate_trace(e: Election, trace: VetoTrace) -> None:
    """Replay a recorded veto run against its election and raise ValueError
    on the first divergence: wrong active set, wrong bottom choice, a paired
    voter whose top choice is not the vetoed candidate, a non-bijective
    pairing, or leftover score."""
    if len(trace.rounds) != e.n:
        raise ValueError(
            f"trace has {len(trace.rounds)} rounds for {e.n} voters"
        )
    scores = list(plurality_scores(e))
    seen_voters: set[int] = set()
    seen_paired: set[int] = set()
    for i, r in enumerate(trace.rounds, start=1):
        if r.index != i:
            raise ValueError(f"round {i} is labeled {r.index}")
        active = frozenset(c for c in range(e.m) if scores[c] > 0)
        if r.active != active:
            raise ValueError(f"round {i}: recorded active set {sorted(r.active)} "
                             f"differs from replay {sorted(active)}")
        if r.vetoed != bottom_among(e, r.voter, active):
            raise ValueError(f"round {i}: vetoed candidate is not voter "
                             f"{r.voter}'s bottom choice among the active set")
        if top(e, r.paired_voter) != r.vetoed:
            raise ValueError(f"round {i}: paired voter {r.paired_voter} does not "
                             f"top the vetoed candidate {r.vetoed}")
        scores[r.vetoed] -= 1
        seen_voters.add(r.voter)
        seen_paired.add(r.paired_voter)
    if len(seen_voters) != e.n or len(seen_paired) != e.n:
        raise ValueError("trace pairing is not a bijection on voters")
    if any(scores):
        raise ValueError(f"scores nonzero after a full run: {tuple(scores)}")
    if trace.winner != trace.rounds[-1].vetoed:
        raise ValueError("recorded winner is not the last vetoed candidate")
    if tuple(trace.final_scores) != tuple(scores):
        raise ValueError("recorded final scores differ from replay")


def scores_after(e: Election, trace: VetoTrace, k: int) -> tuple[int, ...]:
    """Residual scores after the first k rounds of a recorded veto run."""
    if not 0 <= k <= e.n:
        raise ValueError(f"k must be in 0..{e.n}, got {k}")
    scores = list(plurality_scores(e))
    for r in trace.rounds[:k]:
        scores[r.vetoed] -= 1
    return tuple(scores)


def randomized_veto(
    e: Election, k: int, order: Sequence[int] | None = None
) -> WeightVector:
    """Run k veto rounds, then return the distribution proportional to the
    residual scores: w_c = score(c) / (n - k).

    k = 0 gives the top choice of a uniformly random voter; k = n - 1 is a
    point mass on the deterministic veto winner for the same order.
    """
    if not 0 <= k <= e.n - 1:
        raise ValueError(f"k must be in 0..{e.n - 1}, got {k}")
    order = _check_order(order, e.n)
    scores = list(plurality_scores(e))
    for v in order[:k]:
        active = [c for c in range(e.m) if scores[c] > 0]
        scores[bottom_among(e, v, active)] -= 1
    return WeightVector(tuple(Fraction(s, e.n - k) for s in scores))


@dataclass(frozen=True)
class FractionalStep:
    voter: int
    candidate: int
    amount: Fraction


@dataclass(frozen=True)
class FractionalTrace:
    steps: tuple[FractionalStep, ...]
    winner: int

    @property
    def matching(self) -> dict[tuple[int, int], Fraction]:
        """Total weight moved per (voter, candidate) pair across all steps."""
        w: dict[tuple[int, int], Fraction] = {}
        for s in self.steps:
            key = (s.voter, s.candidate)
            w[key] = w.get(key, Fraction(0)) + s.amount
        return w


def lowest_index_policy(weights: Sequence[Fraction]) -> int:
    """Default voter selection for the fractional rule: lowest positive index."""
    for v, w in enumerate(weights):
        if w > 0:
            return v
    raise ValueError("no voter with positive weight")


def fractional_veto(
    e: Election,
    p: WeightVector,
    q: WeightVector,
    voter_policy: Callable[[Sequence[Fraction]], int] = lowest_index_policy,
) -> FractionalTrace:
    """Weight-decrementing generalization of the veto rule over arbitrary
    simplex weights p (voters) and q (candidates).

    Each step picks a voter with positive weight (via ``voter_policy``),
    finds her bottom choice c among positive-weight candidates, and moves
    epsilon = min(weight(voter), weight(c)) off both.  All arithmetic is
    exact, so the run finishes in at most n + m steps and the recorded
    steps form a fractional perfect matching of the winner's weighted
    domination graph.
    """
    if len(p) != e.n:
        raise ValueError(f"p must have one entry per voter ({e.n}), got {len(p)}")
    if len(q) != e.m:
        raise ValueError(f"q must have one entry per candidate ({e.m}), got {len(q)}")
    voter_weight = list(p.entries)
    cand_weight = list(q.entries)
    steps: list[FractionalStep] = []
    winner = -1
    while any(w > 0 for w in voter_weight):
        v = voter_policy(voter_weight)
        if voter_weight[v] <= 0:
            raise ValueError(f"voter policy picked voter {v} with zero weight")
        active = [c for c in range(e.m) if cand_weight[c] > 0]
        c = bottom_among(e, v, active)
        eps = min(voter_weight[v], cand_weight[c])
        voter_weight[v] -= eps
        cand_weight[c] -= eps
        steps.append(FractionalStep(v, c, eps))
        winner = c
    return FractionalTrace(tuple(steps), winner)


def format_trace(trace: VetoTrace) -> str:
    """One round per line: ``i, v_i, {active set}, vetoed, paired voter``."""
    lines = []
    for r in trace.rounds:
        active = " ".join(str(c) for c in sorted(r.active))
        lines.append(f"{r.index}, {r.voter}, {{{active}}}, {r.vetoed}, {r.paired_voter}")
    return "\n".join(lines) + "\n"


# --- committees -----------------------------------------------------------


@dataclass(frozen=True)
class Committee:
    """A fixed-size candidate subset, stored as a sorted tuple."""

    members: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(sorted(self.members)))
        if len(set(self.members)) != len(self.members):
            raise ValueError(f"committee members must be distinct: {self.members!r}")

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, c: int) -> bool:
        return c in self.members


def q_cost(v: int, committee: Committee | Iterable[int], d, q: int) -> float:
    """Distance from voter v to the q-th closest committee member.

    ``d`` is indexable as d[v][c].  q is 1-based; q = 1 is the closest member.
    """
    members = tuple(committee)
    if not 1 <= q <= len(members):
        raise ValueError(f"q must be in 1..{len(members)}, got {q}")
    return sorted(d[v][c] for c in members)[q - 1]


def q_social_cost(committee: Committee | Iterable[int], d, q: int, n: int):
    """Total q-cost over all voters."""
    members = tuple(committee)
    return sum(q_cost(v, members, d, q) for v in range(n))


def committee_rank_key(e: Election, v: int, committee: Committee, q: int):
    """Sort key realizing voter v's strict order over equal-size committees.

    Primary key: the rank (under v) of the committee's q-th favorite member.
    Ties mean the q-th favorites coincide; they are broken lexicographically
    on the sorted member tuples so the order is total and reproducible.
    """
    pos = e.positions[v]
    qth = sorted(pos[c] for c in committee.members)[q - 1]
    return (qth, committee.members)


def committee_compare(
    e: Election, v: int, first: Committee, second: Committee, q: int
) -> Committee:
    """The committee voter v prefers, comparing q-th favorite members and
    breaking ties toward the lexicographically smaller member tuple."""
    if len(first) != len(second):
        raise ValueError("committees must have equal size")
    if not 1 <= q <= len(first):
        raise ValueError(f"q must be in 1..{len(first)}, got {q}")
    ka = committee_rank_key(e, v, first, q)
    kb = committee_rank_key(e, v, second, q)
    return first if ka <= kb else second


def top_prefix_committees(e: Election, k: int) -> tuple[Committee, ...]:
    """The candidate committees: each voter's top-k prefix, deduplicated and
    sorted for a deterministic indexing."""
    seen = {tuple(sorted(e.rankings[v][:k])) for v in range(e.n)}
    return tuple(Committee(members) for members in sorted(seen))


def induced_committee_election(
    e: Election, committees: Sequence[Committee], q: int
) -> Election:
    """Each voter's strict ranking over ``committees`` (indices into that
    sequence), ordered by :func:`committee_rank_key`."""
    rankings = []
    for v in range(e.n):
        idx = sorted(
            range(len(committees)),
            key=lambda i: committee_rank_key(e, v, committees[i], q),
        )
        rankings.append(tuple(idx))
    return Election(tuple(rankings))


def committee_select(
    e: Election, k: int, q: int, order: Sequence[int] | None = None
) -> Committee:
    """Choose a size-k committee by running the veto rule over the voters'
    top-k prefix committees, ranked via q-th favorite members.

    Requires q > k/2: below that threshold the constant-factor guarantee
    breaks down, so such calls are rejected rather than silently degraded.
    Runs in time polynomial in n, m, k because at most n distinct prefix
    committees exist.
    """
    if not 1 <= k <= e.m:
        raise ValueError(f"committee size must be in 1..{e.m}, got {k}")
    if not 1 <= q <= k:
        raise ValueError(f"q must be in 1..{k}, got {q}")
    if 2 * q <= k:
        raise ValueError(f"q must exceed k/2 (got q={q}, k={k})")
    committees = top_prefix_committees(e, k)
    induced = induced_committee_election(e, committees, q)
    trace = plurality_veto(induced, order)
    return committees[trace.winner]
