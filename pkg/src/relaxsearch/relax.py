"""Heuristics obtained by solving relaxed problems, directly or by search."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .core import (
    ExpansionLedger,
    ProblemSpace,
    SearchOutcome,
    StateId,
    TieBreak,
    astar,
)


class HeuristicKind(enum.Enum):
    ALGORITHMIC = "ALGORITHMIC"
    SEARCH_BASED = "SEARCH_BASED"


class AlgorithmicHeuristic:
    """A heuristic computed without search in any relaxed space."""

    kind = HeuristicKind.ALGORITHMIC

    def __init__(self, fn: Callable[[StateId], int], name: str | None = None):
        self.evaluate = fn
        self.name = name or getattr(fn, "__name__", "h")

    def __call__(self, state: StateId) -> int:
        return self.evaluate(state)

    def __repr__(self) -> str:
        return f"AlgorithmicHeuristic({self.name})"


def constant_heuristic(c: int = 0) -> AlgorithmicHeuristic:
    """h(s) = c everywhere; c = 0 is the blind heuristic of the most-relaxed model."""
    if c < 0:
        raise ValueError("constant heuristic must be nonnegative")
    return AlgorithmicHeuristic(lambda state: c, name=f"const{c}")


class SearchHeuristic:
    """h(s) = optimal cost from s to a goal in ``relaxed``, found by A* with ``inner``.

    Every sub-search's expansions are charged to ``ledger.secondary_expansions``
    and logged in ``ledger.per_call``.  With ``cache`` on, repeated states are
    answered from memory at no expansion cost; the kind stays SEARCH_BASED.
    """

    kind = HeuristicKind.SEARCH_BASED

    def __init__(
        self,
        relaxed: ProblemSpace,
        inner,
        tie: TieBreak = TieBreak.FIFO,
        ledger: ExpansionLedger | None = None,
        cache: bool = False,
        budget: int | None = None,
    ):
        self.relaxed = relaxed
        self.inner = inner
        self.tie = tie
        self.ledger = ledger if ledger is not None else ExpansionLedger()
        self.cache = cache
        self.budget = budget
        self.name = f"search({relaxed.name}|{getattr(inner, 'name', 'h')})"
        self._memo: dict[StateId, int] = {}

    def evaluate(self, state: StateId) -> int:
        if self.cache and state in self._memo:
            return self._memo[state]
        sub = ExpansionLedger()
        out = astar(
            self.relaxed, self.inner, self.tie, sub, start=state, budget=self.budget
        )
        self.ledger.secondary_expansions += sub.base_expansions
        self.ledger.per_call.append((state, sub.base_expansions))
        if self.cache:
            self._memo[state] = out.optimal_cost
        return out.optimal_cost

    __call__ = evaluate

    def __repr__(self) -> str:
        return f"SearchHeuristic({self.name}, cache={self.cache})"


def make_search_heuristic(
    relaxed: ProblemSpace,
    inner,
    tie: TieBreak = TieBreak.FIFO,
    ledger: ExpansionLedger | None = None,
    cache: bool = False,
    budget: int | None = None,
) -> SearchHeuristic:
    return SearchHeuristic(relaxed, inner, tie, ledger, cache, budget)


@dataclass
class HierarchySpec:
    """A chain [P, P', ..., Pn] of successively relaxed spaces over shared states.

    ``bottom`` is an algorithmic heuristic for the last space.  Only the first
    space's ``initial`` is used; every other level is entered from the states
    whose heuristic value it computes.
    """

    chain: Sequence[ProblemSpace]
    bottom: object
    tie: TieBreak = TieBreak.FIFO
    cache: bool = False
    budget: int | None = None
    levels: list[SearchHeuristic] = field(default_factory=list, init=False)

    def __post_init__(self):
        if not self.chain:
            raise ValueError("hierarchy chain must hold at least the base space")


def build_heuristic(spec: HierarchySpec, ledger: ExpansionLedger):
    """Compose search-based heuristics bottom-up; returns the base-level heuristic."""
    h = spec.bottom
    spec.levels = []
    for space in reversed(spec.chain[1:]):
        h = SearchHeuristic(space, h, spec.tie, ledger, spec.cache, spec.budget)
        spec.levels.insert(0, h)
    return h


def hierarchical_astar(
    spec: HierarchySpec, ledger: ExpansionLedger | None = None
) -> SearchOutcome:
    """A* on ``spec.chain[0]`` guided by search in the rest of the chain.

    Expansions of the base search land in ``ledger.base_expansions``; all
    expansions at lower levels land in ``ledger.secondary_expansions``.
    """
    if ledger is None:
        ledger = ExpansionLedger()
    h = build_heuristic(spec, ledger)
    return astar(spec.chain[0], h, spec.tie, ledger, budget=spec.budget)
