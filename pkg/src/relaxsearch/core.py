"""Best-first state-space search with exact node-expansion accounting.

States are opaque integer keys.  A problem space exposes ``initial``,
``is_goal(state)`` and ``successors(state)`` (a list of ``(state, cost)``
pairs with nonnegative integer costs).  Spaces that can be searched
backwards additionally expose ``goal`` and ``predecessors(state)``.
"""
from __future__ import annotations

import enum
import heapq
import itertools
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Mapping, Protocol

StateId = int


class SearchError(Exception):
    """Base class for search failures."""


class NoGoalReachable(SearchError):
    pass


class LimitExceeded(SearchError):
    pass


class ReopenDetected(SearchError):
    """A closed node was reached again by a cheaper path (heuristic is not monotone)."""


class OracleMissing(SearchError):
    pass


class ProblemSpace(Protocol):
    name: str
    initial: StateId

    def is_goal(self, state: StateId) -> bool: ...

    def successors(self, state: StateId) -> list[tuple[StateId, int]]: ...


class TieBreak(enum.Enum):
    """Order among frontier nodes of equal f."""

    FIFO = "FIFO"
    LIFO = "LIFO"
    HIGH_G = "HIGH_G"
    LOW_H = "LOW_H"
    # goals first, then deeper nodes; with h = 0 this is Dijkstra's expansion order
    GOAL_FIRST = "GOAL_FIRST"


def _priority(tie: TieBreak) -> Callable[[int, int, int, bool, int], tuple]:
    if tie is TieBreak.FIFO:
        return lambda f, g, h, goal, seq: (f, seq)
    if tie is TieBreak.LIFO:
        return lambda f, g, h, goal, seq: (f, -seq)
    if tie is TieBreak.HIGH_G:
        return lambda f, g, h, goal, seq: (f, -g, seq)
    if tie is TieBreak.LOW_H:
        return lambda f, g, h, goal, seq: (f, h, -seq)
    return lambda f, g, h, goal, seq: (f, not goal, -g, seq)


@dataclass
class ExpansionLedger:
    """Expansion counters split between the base search and heuristic sub-searches."""

    base_expansions: int = 0
    secondary_expansions: int = 0
    per_call: list[tuple[StateId, int]] = field(default_factory=list)

    @property
    def total(self) -> int:
        return self.base_expansions + self.secondary_expansions


@dataclass
class SearchOutcome:
    optimal_cost: int
    path: list[StateId]
    # (state, g, f) in expansion order; the goal is the last entry
    expanded: list[tuple[StateId, int, int]]
    max_frontier: int

    @property
    def expansion_count(self) -> int:
        return len(self.expanded)

    @property
    def expanded_states(self) -> set[StateId]:
        return {s for s, _, _ in self.expanded}


def _evaluator(heuristic) -> Callable[[StateId], int]:
    return getattr(heuristic, "evaluate", heuristic)


def astar(
    space: ProblemSpace,
    heuristic,
    tie: TieBreak = TieBreak.FIFO,
    ledger: ExpansionLedger | None = None,
    *,
    start: StateId | None = None,
    budget: int | None = None,
) -> SearchOutcome:
    """A* from ``start`` (default ``space.initial``) to the nearest goal.

    A node counts as expanded when it leaves the frontier; selecting a goal is
    the final expansion.  The heuristic is evaluated once per generated state
    and is never consulted on goal states, where every valid heuristic is 0.

    Raises NoGoalReachable when the frontier empties, LimitExceeded when more
    than ``budget`` expansions would be needed, and ReopenDetected when a
    closed state is improved (the heuristic is not monotone).
    """
    h_of = _evaluator(heuristic)
    is_goal = space.is_goal
    successors = space.successors
    key = _priority(tie)
    seq = itertools.count()

    s0 = space.initial if start is None else start
    goal0 = is_goal(s0)
    h0 = 0 if goal0 else h_of(s0)
    best_g: dict[StateId, int] = {s0: 0}
    h_cache: dict[StateId, tuple[int, bool]] = {s0: (h0, goal0)}
    parent: dict[StateId, StateId | None] = {s0: None}
    closed: dict[StateId, int] = {}
    heap = [(key(h0, 0, h0, goal0, next(seq)), 0, s0)]
    expanded: list[tuple[StateId, int, int]] = []
    max_frontier = 1

    while heap:
        _, g, s = heapq.heappop(heap)
        if s in closed or g > best_g[s]:
            continue
        if budget is not None and len(expanded) >= budget:
            raise LimitExceeded(f"{space.name}: expansion budget {budget} exhausted")
        h, goal = h_cache[s]
        closed[s] = g
        expanded.append((s, g, g + h))
        if ledger is not None:
            ledger.base_expansions += 1
        if goal:
            path = [s]
            while parent[path[-1]] is not None:
                path.append(parent[path[-1]])
            path.reverse()
            return SearchOutcome(g, path, expanded, max_frontier)
        for t, cost in successors(s):
            ng = g + cost
            if t in closed:
                if ng < closed[t]:
                    raise ReopenDetected(f"{space.name}: state {t} reopened")
                continue
            if ng >= best_g.get(t, ng + 1):
                continue
            best_g[t] = ng
            parent[t] = s
            cached = h_cache.get(t)
            if cached is None:
                tgoal = is_goal(t)
                cached = h_cache[t] = (0 if tgoal else h_of(t), tgoal)
            th, tgoal = cached
            heapq.heappush(heap, (key(ng + th, ng, th, tgoal, next(seq)), ng, t))
        if len(heap) > max_frontier:
            max_frontier = len(heap)

    raise NoGoalReachable(f"{space.name}: frontier exhausted without reaching a goal")


def uniform_cost_map(space: ProblemSpace, start: StateId, bound: int) -> dict[StateId, int]:
    """Exact cheapest-path costs g* from ``start`` for every state with g* <= bound."""
    if bound < 0:
        raise ValueError("bound must be nonnegative")
    dist = {start: 0}
    heap = [(0, start)]
    done: set[StateId] = set()
    while heap:
        g, s = heapq.heappop(heap)
        if s in done:
            continue
        done.add(s)
        for t, cost in space.successors(s):
            ng = g + cost
            if ng <= bound and ng < dist.get(t, ng + 1):
                dist[t] = ng
                heapq.heappush(heap, (ng, t))
    return dist


def pruned_cost_map(
    space: ProblemSpace, start: StateId, heuristic, bound: int
) -> dict[StateId, int]:
    """Exact g* for every state n with g*(n) + h(n) <= bound.

    Requires a monotone ``heuristic``: f is then nondecreasing along every
    cheapest path, so no qualifying state is reached only through pruned ones.
    """
    h_of = _evaluator(heuristic)
    if h_of(start) > bound:
        return {}
    dist = {start: 0}
    heap = [(0, start)]
    done: set[StateId] = set()
    h_seen: dict[StateId, int] = {}
    while heap:
        g, s = heapq.heappop(heap)
        if s in done:
            continue
        done.add(s)
        for t, cost in space.successors(s):
            ng = g + cost
            if ng >= dist.get(t, ng + 1):
                continue
            ht = h_seen.get(t)
            if ht is None:
                ht = h_seen[t] = h_of(t)
            if ng + ht <= bound:
                dist[t] = ng
                heapq.heappush(heap, (ng, t))
    return dist


@dataclass(frozen=True)
class ReversedSpace:
    """View of a space with every edge reversed, started at its goal state."""

    inner: ProblemSpace

    @property
    def name(self) -> str:
        return f"reversed({self.inner.name})"

    @property
    def initial(self) -> StateId:
        return self.inner.goal

    def is_goal(self, state: StateId) -> bool:
        return state == self.inner.initial

    def successors(self, state: StateId) -> list[tuple[StateId, int]]:
        return self.inner.predecessors(state)


def goal_distances(space: ProblemSpace, bound: int | None = None) -> dict[StateId, int]:
    """h* for every state that reaches the (single) goal within ``bound``."""
    rev = ReversedSpace(space)
    return uniform_cost_map(rev, rev.initial, 1 << 30 if bound is None else bound)


@dataclass
class PropertyReport:
    checked: int = 0
    edges_checked: int = 0
    # (state, h, h*)
    admissibility_violations: list[tuple[StateId, int, int]] = field(default_factory=list)
    # (state, successor, h, cost, h_successor)
    monotonicity_violations: list[tuple[StateId, StateId, int, int, int]] = field(
        default_factory=list
    )

    @property
    def passed(self) -> bool:
        return not self.admissibility_violations and not self.monotonicity_violations


def verify_heuristic_properties(
    space: ProblemSpace,
    heuristic,
    sample: Iterable[StateId],
    hstar: Mapping[Hashable, int],
) -> PropertyReport:
    """Check h(n) <= h*(n) and h(n) <= c(n, n') + h(n') on every sampled n and edge."""
    h_of = _evaluator(heuristic)
    report = PropertyReport()
    for n in sample:
        if n not in hstar:
            raise OracleMissing(f"no h* entry for state {n}")
        hn = h_of(n)
        report.checked += 1
        if hn > hstar[n]:
            report.admissibility_violations.append((n, hn, hstar[n]))
        for t, cost in space.successors(n):
            report.edges_checked += 1
            ht = h_of(t)
            if hn > cost + ht:
                report.monotonicity_violations.append((n, t, hn, cost, ht))
    return report
