"""Flow-based distortion certificates.

The network has one node per (voter, candidate) pair.  Within a voter's row,
directed preference edges run from better-ranked to worse-ranked candidates;
within a candidate's column, sideways edges run both ways between distinct
voters.  A certificate for a winner distribution w and reference candidate
c* is a circulation injecting w_c at every node (v, c) and absorbing only in
column c*.  Its cost at a voter is the flow absorbed in her row plus all
sideways flow touching her row outside column c*; the maximum per-voter cost
upper-bounds the distribution's distortion, and translating the flow into
multipliers for the distortion LP's dual makes that bound mechanically
checkable.

All flow arithmetic uses exact rationals.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from ..core import Election, WeightVector
from ..rules import VetoTrace, scores_after, validate_trace

__all__ = [
    "Node",
    "Edge",
    "FlowNetwork",
    "FlowAssignment",
    "FlowError",
    "FlowCheck",
    "DualSolution",
    "DualReport",
    "build_flow_network",
    "construct_flow",
    "verify_flow",
    "dual_from_flow",
    "format_flow",
    "parse_flow",
]

Node = tuple[int, int]  # (voter, candidate)
Edge = tuple[Node, Node]


class FlowError(ValueError):
    """A structural or conservation defect, pinpointed to a node or edge."""


@dataclass(frozen=True)
class FlowNetwork:
    election: Election

    @property
    def n(self) -> int:
        return self.election.n

    @property
    def m(self) -> int:
        return self.election.m

    @property
    def node_count(self) -> int:
        return self.n * self.m

    @property
    def preference_edge_count(self) -> int:
        return self.n * self.m * (self.m - 1) // 2

    @property
    def sideways_edge_count(self) -> int:
        return self.m * self.n * (self.n - 1)

    def is_preference_edge(self, tail: Node, head: Node) -> bool:
        return tail[0] == head[0] and self.election.prefers(tail[0], tail[1], head[1])

    def is_sideways_edge(self, tail: Node, head: Node) -> bool:
        return tail[1] == head[1] and tail[0] != head[0]

    def is_edge(self, tail: Node, head: Node) -> bool:
        return self.is_preference_edge(tail, head) or self.is_sideways_edge(tail, head)

    def preference_edges(self):
        """All (v, c) -> (v, c') pairs with c ranked above c'; no reduction is
        applied even when a longer path exists."""
        for v, ranking in enumerate(self.election.rankings):
            for i, c in enumerate(ranking):
                for c2 in ranking[i + 1 :]:
                    yield (v, c), (v, c2)

    def sideways_edges(self):
        for c in range(self.m):
            for v in range(self.n):
                for v2 in range(self.n):
                    if v != v2:
                        yield (v, c), (v2, c)


def build_flow_network(e: Election) -> FlowNetwork:
    return FlowNetwork(e)


@dataclass(frozen=True)
class FlowAssignment:
    """Edge flows plus the injection distribution and the absorbing column."""

    flows: dict[Edge, Fraction]
    w: WeightVector
    cstar: int

    def amount(self, tail: Node, head: Node) -> Fraction:
        return self.flows.get((tail, head), Fraction(0))


@dataclass(frozen=True)
class FlowCheck:
    per_voter_costs: tuple[Fraction, ...]
    cost: Fraction
    absorbed: tuple[Fraction, ...]


def verify_flow(
    net: FlowNetwork,
    g: FlowAssignment,
    w: WeightVector | None = None,
    cstar: int | None = None,
) -> FlowCheck:
    """Check a claimed certificate and account its per-voter costs.

    Raises :class:`FlowError` naming the offending edge or node when an
    amount is negative, an edge does not exist in the network, or any node
    outside the absorbing column fails conservation (injection + inflow =
    outflow).  Absorption in column c* must be non-negative at every node.
    """
    w = g.w if w is None else w
    cstar = g.cstar if cstar is None else cstar
    n, m = net.n, net.m
    if len(w) != m:
        raise FlowError(f"w has {len(w)} entries for {m} candidates")
    if not 0 <= cstar < m:
        raise FlowError(f"cstar {cstar} out of range 0..{m - 1}")
    inflow: dict[Node, Fraction] = {}
    outflow: dict[Node, Fraction] = {}
    sideways_row = [Fraction(0)] * n
    for (tail, head), amount in g.flows.items():
        if amount < 0:
            raise FlowError(f"negative flow {amount} on edge {tail}->{head}")
        if not (0 <= tail[0] < n and 0 <= head[0] < n and 0 <= tail[1] < m and 0 <= head[1] < m):
            raise FlowError(f"edge {tail}->{head} leaves the node grid")
        if not net.is_edge(tail, head):
            raise FlowError(f"flow on nonexistent edge {tail}->{head}")
        outflow[tail] = outflow.get(tail, Fraction(0)) + amount
        inflow[head] = inflow.get(head, Fraction(0)) + amount
        if net.is_sideways_edge(tail, head) and tail[1] != cstar:
            sideways_row[tail[0]] += amount
            sideways_row[head[0]] += amount
    zero = Fraction(0)
    absorbed = []
    for v in range(n):
        for c in range(m):
            node = (v, c)
            net_in = w[c] + inflow.get(node, zero) - outflow.get(node, zero)
            if c == cstar:
                if net_in < 0:
                    raise FlowError(
                        f"node {node} emits {-net_in} more than it receives"
                    )
            elif net_in != 0:
                raise FlowError(
                    f"conservation violated at node {node}: "
                    f"injection + inflow - outflow = {net_in}"
                )
        absorbed.append(
            w[cstar]
            + inflow.get((v, cstar), zero)
            - outflow.get((v, cstar), zero)
        )
    costs = tuple(absorbed[v] + sideways_row[v] for v in range(n))
    return FlowCheck(costs, max(costs), tuple(absorbed))


def construct_flow(
    e: Election, trace: VetoTrace, k: int, cstar: int
) -> FlowAssignment:
    """Build the certifying flow for the k-round randomized rule's output.

    For each of the first k rounds, the acting voter's whole injection is
    funneled along her row to the candidate she vetoed, moved sideways to the
    voter whose first-place vote that veto canceled, then rides a preference
    edge to column c* and is absorbed.  The residual injections of the
    remaining voters are split evenly, column by column, among the voters
    whose votes the later rounds cancel; each of those receives one unit in
    her top choice's column and forwards it to column c*.  Whenever a unit is
    already in column c*, or source and receiver coincide, it stays put, so
    no sideways flow ever runs inside column c*; that keeps every per-voter
    cost at most 3 and the dual translation tight.
    """
    n = e.n
    if len(trace.rounds) != n:
        raise FlowError(f"trace has {len(trace.rounds)} rounds, need all {n}")
    if not 0 <= k <= n - 1:
        raise FlowError(f"k must be in 0..{n - 1}, got {k}")
    if not 0 <= cstar < e.m:
        raise FlowError(f"cstar {cstar} out of range 0..{e.m - 1}")
    try:
        validate_trace(e, trace)
    except ValueError as exc:
        raise FlowError(f"trace inconsistent with election: {exc}") from exc
    denom = n - k
    residual = scores_after(e, trace, k)
    w = WeightVector(tuple(Fraction(s, denom) for s in residual))
    flows: dict[Edge, Fraction] = {}

    def add(tail: Node, head: Node, amount: Fraction) -> None:
        if tail == head or amount == 0:
            return
        flows[(tail, head)] = flows.get((tail, head), Fraction(0)) + amount

    one = Fraction(1)
    for r in trace.rounds[:k]:
        v, vetoed, receiver = r.voter, r.vetoed, r.paired_voter
        for c in sorted(w.support):
            if c != vetoed:
                add((v, c), (v, vetoed), w[c])
        if vetoed == cstar:
            continue  # the unit is absorbed at (v, cstar) where it arrived
        add((v, vetoed), (receiver, vetoed), one)
        add((receiver, vetoed), (receiver, cstar), one)

    receivers: dict[int, list[int]] = {}
    for r in trace.rounds[k:]:
        receivers.setdefault(r.vetoed, []).append(r.paired_voter)
    share = Fraction(1, denom)
    rest = [r.voter for r in trace.rounds[k:]]
    for c in sorted(w.support):
        if c == cstar:
            continue  # residual injections in column c* absorb in place
        for v in rest:
            for receiver in receivers[c]:
                add((v, c), (receiver, c), share)
        for receiver in receivers[c]:
            add((receiver, c), (receiver, cstar), one)
    return FlowAssignment(flows, w, cstar)


@dataclass(frozen=True)
class DualSolution:
    """Multipliers for the distortion LP's dual, read off a flow.

    ``consistency[(v, c, c')]`` carries the preference-edge flow
    (v, c) -> (v, c'); ``triangle[(v, v', c, cstar)]`` carries the sideways
    flow (v, c) -> (v', c); alpha equals the flow's cost.  Every other
    multiplier is zero.
    """

    alpha: Fraction
    consistency: dict[tuple[int, int, int], Fraction]
    triangle: dict[tuple[int, int, int, int], Fraction]
    cstar: int


@dataclass(frozen=True)
class DualReport:
    feasible: bool
    objective: Fraction
    voter_totals: tuple[Fraction, ...]
    violations: tuple[str, ...]


def dual_from_flow(
    net: FlowNetwork,
    g: FlowAssignment,
    cstar: int | None = None,
) -> tuple[DualSolution, DualReport]:
    """Translate a valid flow into dual multipliers and check feasibility.

    The report evaluates both dual constraint families with exact
    arithmetic: one inequality per voter against alpha, and one per
    (voter, candidate != c*) that reduces to zero net flow at that node.
    An infeasible report signals a defect in the flow or the translation.
    """
    cstar = g.cstar if cstar is None else cstar
    check = verify_flow(net, g, g.w, cstar)
    alpha = check.cost
    w = g.w
    n, m = net.n, net.m
    consistency: dict[tuple[int, int, int], Fraction] = {}
    triangle: dict[tuple[int, int, int, int], Fraction] = {}
    for (tail, head), amount in g.flows.items():
        if amount == 0:
            continue
        if net.is_preference_edge(tail, head):
            consistency[(tail[0], tail[1], head[1])] = amount
        else:
            triangle[(tail[0], head[0], tail[1], cstar)] = amount

    zero = Fraction(0)
    # family-one accumulator per voter, family-two per (voter, candidate)
    s1 = [zero] * n
    s2 = [[zero] * m for _ in range(n)]
    for (v, c, c2), amount in consistency.items():
        if c == cstar:
            s1[v] += amount
        if c2 == cstar:
            s1[v] -= amount
        s2[v][c] += amount
        s2[v][c2] -= amount
    for (v, v2, c, _), amount in triangle.items():
        if c == cstar:
            # the entry matches one positive and one negative pattern for the
            # sender, and two negative patterns for the receiver
            s1[v2] -= 2 * amount
        else:
            s1[v] -= amount
            s1[v2] -= amount
            s2[v][c] += amount
            s2[v2][c] -= amount

    violations: list[str] = []
    voter_totals = []
    for v in range(n):
        lhs = w[cstar] - s1[v]
        voter_totals.append(lhs)
        if alpha + s1[v] < w[cstar]:
            violations.append(
                f"voter {v}: dual load {lhs} exceeds alpha = {alpha}"
            )
    for v in range(n):
        for c in range(m):
            if c == cstar:
                continue
            if s2[v][c] < w[c]:
                violations.append(
                    f"node ({v},{c}): net outflow {s2[v][c]} below injection {w[c]}"
                )
    report = DualReport(
        feasible=not violations,
        objective=alpha,
        voter_totals=tuple(voter_totals),
        violations=tuple(violations),
    )
    return DualSolution(alpha, consistency, triangle, cstar), report


_EDGE_RE = re.compile(
    r"^\((\d+),(\d+)\)->\((\d+),(\d+)\):\s*(\S+)$"
)


def format_flow(g: FlowAssignment) -> str:
    """Edge list, one ``(v,c)->(v',c'): amount`` per line, sorted."""
    lines = []
    for (tail, head), amount in sorted(g.flows.items()):
        lines.append(
            f"({tail[0]},{tail[1]})->({head[0]},{head[1]}): "
            f"{amount.numerator}/{amount.denominator}"
        )
    return "\n".join(lines) + "\n"


def parse_flow(text: str) -> dict[Edge, Fraction]:
    """Parse the edge-list format; amounts may be fractions or decimals."""
    flows: dict[Edge, Fraction] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        match = _EDGE_RE.match(line.replace(" -> ", "->"))
        if not match:
            raise FlowError(f"line {lineno}: cannot parse flow edge {line!r}")
        v, c, v2, c2 = (int(match.group(i)) for i in range(1, 5))
        try:
            amount = Fraction(match.group(5))
        except (ValueError, ZeroDivisionError):
            raise FlowError(f"line {lineno}: bad amount {match.group(5)!r}")
        flows[((v, c), (v2, c2))] = amount
    return flows
