from __future__ import annotations

import random
from dataclasses import dataclass, field

import pytest
from hypothesis import settings
from hypothesis import strategies as st

from relaxsearch.puzzle import Variant, goal_distance_table

settings.register_profile("default", deadline=None)
settings.load_profile("default")


@dataclass(frozen=True)
class GraphSpace:
    """Explicit weighted digraph for engine tests."""

    edges: dict = field(hash=False)
    initial: int = 0
    goals: frozenset = frozenset()
    name: str = "graph"

    def is_goal(self, state):
        return state in self.goals

    def successors(self, state):
        return list(self.edges.get(state, ()))


def bellman_ford(space: GraphSpace, start: int) -> dict[int, int]:
    """Shortest distances by edge relaxation to a fixed point (no priority queue)."""
    dist = {start: 0}
    changed = True
    while changed:
        changed = False
        for u, outs in space.edges.items():
            if u not in dist:
                continue
            for v, c in outs:
                if dist[u] + c < dist.get(v, float("inf")):
                    dist[v] = dist[u] + c
                    changed = True
    return dist


@st.composite
def graphs(draw, max_nodes=9, max_cost=4):
    n = draw(st.integers(2, max_nodes))
    edges = {}
    for u in range(n):
        targets = draw(st.lists(st.integers(0, n - 1), max_size=4, unique=True))
        edges[u] = tuple((v, draw(st.integers(0, max_cost))) for v in targets if v != u)
    goals = draw(st.sets(st.integers(1, n - 1), min_size=1, max_size=2))
    return GraphSpace(edges, 0, frozenset(goals))


@pytest.fixture(scope="session")
def hstar():
    return goal_distance_table(Variant.BASE)


@pytest.fixture(scope="session")
def sample_states(hstar):
    rng = random.Random(2024)
    return rng.sample(sorted(hstar), 120)
