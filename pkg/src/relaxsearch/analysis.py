"""Tie-break-independent expanded-node sets and large-domination checks.

For A* with a monotone heuristic h and optimal cost C*, a node n is surely
expanded when g*(n) + h(n) < C* and possibly expanded when the sum is <= C*.
The sets below are computed from exact g* sweeps, never from a search trace.
"""
from __future__ import annotations

import dataclasses
import enum
import heapq
import statistics
import time
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping

from .core import (
    ExpansionLedger,
    NoGoalReachable,
    ProblemSpace,
    StateId,
    TieBreak,
    _evaluator,
    astar,
    pruned_cost_map,
)
from .puzzle import MD, PuzzleSpace, Variant, XYHeuristic, XYMode
from .relax import HierarchySpec, hierarchical_astar


class BadCstar(ValueError):
    pass


class Label(enum.Enum):
    SURELY = "SURELY"
    POSSIBLY = "POSSIBLY"


class Level(enum.Enum):
    BASE = "BASE"
    SECONDARY = "SECONDARY"
    UNION = "UNION"


@dataclass(frozen=True)
class NodeSet:
    members: frozenset
    label: Label
    level: Level
    # hierarchical sets only: the base-level part and every h1 value they needed
    base_members: frozenset | None = None
    h1_values: Mapping[StateId, int] | None = field(default=None, compare=False)

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, state) -> bool:
        return state in self.members

    def __le__(self, other: NodeSet) -> bool:
        return self.members <= other.members


def _start(space: ProblemSpace, start: StateId | None) -> StateId:
    return space.initial if start is None else start


def _select(dist: Mapping[StateId, int], h_of, bound: int, strict: bool) -> frozenset:
    if strict:
        return frozenset(n for n, g in dist.items() if g + h_of(n) < bound)
    return frozenset(n for n, g in dist.items() if g + h_of(n) <= bound)


def direct_sets(
    space: ProblemSpace,
    h,
    cstar: int,
    strict: bool,
    start: StateId | None = None,
) -> NodeSet:
    """{n : g*(n) + h(n) < cstar} when ``strict``, else the same with <=."""
    if cstar < 0:
        raise BadCstar(f"cstar must be nonnegative, got {cstar}")
    h_of = _evaluator(h)
    dist = pruned_cost_map(space, _start(space, start), h, cstar)
    label = Label.SURELY if strict else Label.POSSIBLY
    return NodeSet(_select(dist, h_of, cstar, strict), label, Level.BASE)


def search_cost_fn(relaxed: ProblemSpace, h2) -> Callable[[StateId], int]:
    """Exact relaxed goal distance by A* with ``h2``, memoised per state."""
    memo: dict[StateId, int] = {}

    def h1(p: StateId) -> int:
        if p not in memo:
            memo[p] = astar(relaxed, h2, start=p).optimal_cost
        return memo[p]

    return h1


def hier_sets(
    base: ProblemSpace,
    relaxed: ProblemSpace,
    h2,
    cstar: int,
    strict: bool,
    *,
    start: StateId | None = None,
    h1: Callable[[StateId], int] | None = None,
) -> NodeSet:
    """Nodes surely (``strict``) or possibly expanded by A* on ``base`` guided by
    h1 = exact cost in ``relaxed``, where each h1 value is itself found by A*
    in ``relaxed`` with ``h2``.

    The union holds the base-level set {p : g*(p) + h1(p) < cstar} and, for each
    state p whose h1 is computed (the start and every successor of a non-goal
    base-level member), the secondary set {m : g'(p, m) + h2(m) < h1(p)} with g'
    the relaxed-space distance from p.  ``strict=False`` uses <= throughout.
    ``h1`` may be supplied (e.g. table-backed) when it is known to be exact.
    """
    if cstar < 0:
        raise BadCstar(f"cstar must be nonnegative, got {cstar}")
    if h1 is None:
        h1 = search_cost_fn(relaxed, h2)
    s0 = _start(base, start)
    dist = pruned_cost_map(base, s0, h1, cstar)
    base_level = _select(dist, h1, cstar, strict)

    evaluated = {s0}
    for p in base_level:
        if not base.is_goal(p):
            evaluated.update(t for t, _ in base.successors(p))

    h1_values = {p: h1(p) for p in evaluated if not base.is_goal(p)}
    union = base_level | secondary_union(relaxed, h1_values, h2, strict)
    label = Label.SURELY if strict else Label.POSSIBLY
    return NodeSet(frozenset(union), label, Level.UNION, base_level, h1_values)


def secondary_set(
    relaxed: ProblemSpace, p: StateId, h2, h1p: int, strict: bool
) -> frozenset:
    """Nodes surely/possibly expanded by A* in ``relaxed`` from ``p`` with ``h2``,
    given that the optimal relaxed cost from ``p`` is ``h1p``."""
    return _select(pruned_cost_map(relaxed, p, h2, h1p), _evaluator(h2), h1p, strict)


def secondary_union(
    relaxed: ProblemSpace, sources: Mapping[StateId, int], h2, strict: bool
) -> frozenset:
    """Union of ``secondary_set`` over every (p, h1(p)) in ``sources``, in one sweep.

    m qualifies iff min_p (g'(p, m) - h1(p)) + h2(m) <= 0 (< 0 when strict), so a
    single Dijkstra seeded at each p with offset -h1(p) finds the union.  With a
    monotone h2, every node on a best path to a qualifying m also qualifies,
    which makes pruning at the threshold exact.
    """
    if not sources:
        return frozenset()
    h_of = _evaluator(h2)
    top = max(sources.values())
    dist: dict[StateId, int] = {}
    hval: dict[StateId, int] = {}
    heap = []
    for p, hp in sources.items():
        hval[p] = h_of(p)
        if top - hp + hval[p] <= top and top - hp < dist.get(p, top + 1):
            dist[p] = top - hp
            heap.append((top - hp, p))
    heapq.heapify(heap)
    done = set()
    while heap:
        d, s = heapq.heappop(heap)
        if s in done:
            continue
        done.add(s)
        for t, cost in relaxed.successors(s):
            nd = d + cost
            if nd >= dist.get(t, nd + 1):
                continue
            ht = hval.get(t)
            if ht is None:
                ht = hval[t] = h_of(t)
            if nd + ht <= top:
                dist[t] = nd
                heapq.heappush(heap, (nd, t))
    if strict:
        return frozenset(m for m, d in dist.items() if d + hval[m] < top)
    return frozenset(dist)


def oracle_cost(space: ProblemSpace, start: StateId | None = None) -> int:
    """Optimal cost to the nearest goal by plain Dijkstra (independent of ``astar``)."""
    s0 = _start(space, start)
    dist = {s0: 0}
    heap = [(0, s0)]
    done = set()
    while heap:
        g, s = heapq.heappop(heap)
        if s in done:
            continue
        if space.is_goal(s):
            return g
        done.add(s)
        for t, cost in space.successors(s):
            if g + cost < dist.get(t, g + cost + 1):
                dist[t] = g + cost
                heapq.heappush(heap, (g + cost, t))
    raise NoGoalReachable(f"{space.name}: no goal reachable")


@dataclass
class DominationReport:
    instance: StateId
    chain: str
    cstar: int
    direct_surely: NodeSet
    direct_possibly: NodeSet
    hier_surely: NodeSet
    hier_possibly: NodeSet
    direct_ledger: ExpansionLedger
    hier_ledger: ExpansionLedger
    direct_expanded: frozenset

    @property
    def theorem1_holds(self) -> bool:
        return self.direct_surely <= self.hier_surely

    @property
    def theorem2_holds(self) -> bool:
        return self.direct_possibly <= self.hier_possibly

    @property
    def sandwich_holds(self) -> bool:
        return (
            self.direct_surely.members
            <= self.direct_expanded
            <= self.direct_possibly.members
        )

    @property
    def direct_total(self) -> int:
        return self.direct_ledger.total

    @property
    def hier_total(self) -> int:
        return self.hier_ledger.total

    @property
    def ratio(self) -> float:
        return self.hier_total / self.direct_total


def check_domination(
    instance: StateId,
    base: ProblemSpace,
    relaxed: ProblemSpace,
    h2,
    tie: TieBreak = TieBreak.GOAL_FIRST,
    *,
    h1: Callable[[StateId], int] | None = None,
    hstar: Mapping[StateId, int] | None = None,
    cache: bool = False,
    budget: int | None = None,
) -> DominationReport:
    """Compare A*(base | h2) against A*(base | relaxed | h2) on one instance.

    Analytic sets decide the theorem verdicts; both algorithms are also run
    for their expansion totals.
    """
    base = dataclasses.replace(base, initial=instance)
    cstar = hstar[instance] if hstar is not None else oracle_cost(base)
    if h1 is None:
        h1 = search_cost_fn(relaxed, h2)

    d_sure = direct_sets(base, h2, cstar, True)
    d_poss = direct_sets(base, h2, cstar, False)
    h_sure = hier_sets(base, relaxed, h2, cstar, True, h1=h1)
    h_poss = hier_sets(base, relaxed, h2, cstar, False, h1=h1)

    d_ledger = ExpansionLedger()
    direct = astar(base, h2, tie, d_ledger, budget=budget)
    h_ledger = ExpansionLedger()
    spec = HierarchySpec([base, relaxed], h2, tie, cache=cache, budget=budget)
    hier = hierarchical_astar(spec, h_ledger)
    if direct.optimal_cost != cstar or hier.optimal_cost != cstar:
        raise AssertionError(
            f"optimal cost mismatch: oracle {cstar}, direct {direct.optimal_cost}, "
            f"hierarchical {hier.optimal_cost}"
        )
    chain = f"{base.name}<={relaxed.name}<={getattr(h2, 'name', 'h2')}"
    return DominationReport(
        instance,
        chain,
        cstar,
        d_sure,
        d_poss,
        h_sure,
        h_poss,
        d_ledger,
        h_ledger,
        frozenset(direct.expanded_states),
    )


# --- X-Y cost benchmark ------------------------------------------------------

XY_NOTE = (
    "X-Y secondary searches run in two small factor spaces (a speedup "
    "transformation), so the large-domination result for relaxation "
    "hierarchies does not predict this comparison."
)


@dataclass
class CostRow:
    instance: StateId
    depth: int
    md_base: int
    md_secondary: int
    xy_base: int
    xy_secondary: int
    md_wall_s: float
    xy_wall_s: float

    @property
    def md_total(self) -> int:
        return self.md_base + self.md_secondary

    @property
    def xy_total(self) -> int:
        return self.xy_base + self.xy_secondary

    @property
    def ratio(self) -> float:
        return self.xy_total / self.md_total


@dataclass
class CostReport:
    rows: list[CostRow]
    note: str = XY_NOTE

    @property
    def median_ratio(self) -> float:
        return statistics.median(r.ratio for r in self.rows)


def xy_row(
    instance: StateId, tie: TieBreak = TieBreak.GOAL_FIRST, budget: int | None = None
) -> CostRow:
    base = PuzzleSpace(Variant.BASE, instance)
    md_ledger = ExpansionLedger()
    t0 = time.perf_counter()
    md_out = astar(base, MD, tie, md_ledger, budget=budget)
    t1 = time.perf_counter()
    xy_ledger = ExpansionLedger()
    h = XYHeuristic(XYMode.PER_CALL_SEARCH, ledger=xy_ledger, tie=tie, budget=budget)
    xy_out = astar(base, h, tie, xy_ledger, budget=budget)
    t2 = time.perf_counter()
    if md_out.optimal_cost != xy_out.optimal_cost:
        raise AssertionError("MD and X-Y searches disagree on the optimal cost")
    return CostRow(
        instance,
        md_out.optimal_cost,
        md_ledger.base_expansions,
        md_ledger.secondary_expansions,
        xy_ledger.base_expansions,
        xy_ledger.secondary_expansions,
        t1 - t0,
        t2 - t1,
    )


def xy_benchmark(
    instances: Iterable[StateId],
    tie: TieBreak = TieBreak.GOAL_FIRST,
    budget: int | None = None,
) -> CostReport:
    """A*(MD) against A* with X-Y computed by per-call factor searches guided by MD."""
    return CostReport([xy_row(s, tie, budget) for s in instances])


