"""The Eight Puzzle, its constraint-deleted relaxations, and their heuristics.

A board is a length-9 row-major tuple of tile numbers with 0 for the blank.
Search code works on packed integer ids: four bits per cell plus the blank's
cell index above bit 36, so moves are a handful of integer operations.
"""
from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Sequence

from .core import ExpansionLedger, StateId, TieBreak, astar, goal_distances
from .relax import AlgorithmicHeuristic, HeuristicKind

GOAL_CELLS: tuple[int, ...] = (1, 2, 3, 8, 0, 4, 7, 6, 5)
GOAL_POS = {tile: pos for pos, tile in enumerate(GOAL_CELLS)}
_GOAL_POS_LIST = [GOAL_POS[tile] for tile in range(9)]

_BLANK_SHIFT = 36


class Variant(enum.Enum):
    BASE = "BASE"
    RA = "RA"
    CHECK_RA = "CHECK_RA"
    X_FACTOR = "X_FACTOR"
    Y_FACTOR = "Y_FACTOR"


class Axis(enum.Enum):
    X = "X"  # lines are columns
    Y = "Y"  # lines are rows


def encode(cells: Sequence[int]) -> StateId:
    if sorted(cells) != list(range(9)):
        raise ValueError(f"not a permutation of 0..8: {list(cells)}")
    key = 0
    for pos, tile in enumerate(cells):
        key |= tile << (4 * pos)
    return key | (list(cells).index(0) << _BLANK_SHIFT)


def decode(state: StateId) -> tuple[int, ...]:
    return tuple((state >> (4 * pos)) & 15 for pos in range(9))


def parse_state(text: str) -> StateId:
    """Read the instance-file form: nine whitespace-separated integers."""
    parts = text.split()
    if len(parts) != 9:
        raise ValueError(f"expected 9 integers, got {len(parts)}: {text!r}")
    return encode([int(p) for p in parts])


def format_state(state: StateId) -> str:
    return " ".join(map(str, decode(state)))


GOAL: StateId = encode(GOAL_CELLS)


def _color(pos: int) -> int:
    r, c = divmod(pos, 3)
    return (r + c) % 2


def _adjacent(a: int, b: int) -> bool:
    (ra, ca), (rb, cb) = divmod(a, 3), divmod(b, 3)
    return abs(ra - rb) + abs(ca - cb) == 1


# cells whose tile may slide into the blank, per blank cell
_NEIGHBOURS = {
    Variant.BASE: tuple(tuple(t for t in range(9) if _adjacent(b, t)) for b in range(9)),
    Variant.RA: tuple(tuple(t for t in range(9) if t != b) for b in range(9)),
    Variant.CHECK_RA: tuple(
        tuple(t for t in range(9) if _color(t) != _color(b)) for b in range(9)
    ),
}


@dataclass(frozen=True)
class PuzzleSpace:
    """Board-level space; ``variant`` fixes which tiles may move into the blank."""

    variant: Variant
    initial: StateId = GOAL
    _moves: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_moves", _NEIGHBOURS[self.variant])

    @property
    def name(self) -> str:
        return self.variant.value

    @property
    def goal(self) -> StateId:
        return GOAL

    def is_goal(self, state: StateId) -> bool:
        return state == GOAL

    def successors(self, state: StateId) -> list[tuple[StateId, int]]:
        b = state >> _BLANK_SHIFT
        out = []
        for t in self._moves[b]:
            v = (state >> (4 * t)) & 15
            out.append(
                (state - (v << (4 * t)) + (v << (4 * b)) + ((t - b) << _BLANK_SHIFT), 1)
            )
        return out

    # every move is undone by the reverse swap
    predecessors = successors

    def with_initial(self, state: StateId) -> PuzzleSpace:
        return PuzzleSpace(self.variant, state)


# --- X-Y factors ---------------------------------------------------------


def _line(pos: int, axis: Axis) -> int:
    return pos % 3 if axis is Axis.X else pos // 3


@dataclass(frozen=True)
class FactorState:
    """Per-axis abstraction of a board.

    ``occupancy[i][j]`` counts tiles sitting in line i whose goal line is j.
    """

    occupancy: tuple[tuple[int, int, int], ...]
    blank_line: int

    @property
    def key(self) -> StateId:
        key = self.blank_line << 18
        for i in range(3):
            for j in range(3):
                key |= self.occupancy[i][j] << (2 * (3 * i + j))
        return key

    @classmethod
    def from_key(cls, key: StateId) -> FactorState:
        occ = tuple(
            tuple((key >> (2 * (3 * i + j))) & 3 for j in range(3)) for i in range(3)
        )
        return cls(occ, key >> 18)


def factor_project(state: StateId, axis: Axis) -> FactorState:
    cells = decode(state)
    occ = [[0, 0, 0] for _ in range(3)]
    blank_line = 0
    for pos, tile in enumerate(cells):
        if tile == 0:
            blank_line = _line(pos, axis)
        else:
            occ[_line(pos, axis)][_line(GOAL_POS[tile], axis)] += 1
    return FactorState(tuple(map(tuple, occ)), blank_line)


_FACTOR_GOAL = {axis: factor_project(GOAL, axis).key for axis in Axis}


@dataclass(frozen=True)
class FactorSpace:
    """One coordinate of the X-Y relaxation.

    A tile in a line adjacent to the blank's line moves into it, and the blank
    takes the tile's former line.  The goal puts every tile in its goal line
    and the blank in its own goal line.
    """

    axis: Axis
    initial: StateId | None = None

    def __post_init__(self):
        if self.initial is None:
            object.__setattr__(self, "initial", _FACTOR_GOAL[self.axis])

    @property
    def name(self) -> str:
        return f"{self.axis.value}_FACTOR"

    @property
    def goal(self) -> StateId:
        return _FACTOR_GOAL[self.axis]

    def is_goal(self, state: StateId) -> bool:
        return state == _FACTOR_GOAL[self.axis]

    def successors(self, state: StateId) -> list[tuple[StateId, int]]:
        b = state >> 18
        out = []
        for i in (b - 1, b + 1):
            if not 0 <= i < 3:
                continue
            for j in range(3):
                src = 2 * (3 * i + j)
                if (state >> src) & 3:
                    moved = state - (1 << src) + (1 << (2 * (3 * b + j)))
                    out.append((moved + ((i - b) << 18), 1))
        return out

    predecessors = successors

    def with_initial(self, state: StateId) -> FactorSpace:
        return FactorSpace(self.axis, state)


def make_space(variant: Variant | str, initial: StateId | None = None):
    variant = Variant(variant)
    if variant is Variant.X_FACTOR:
        return FactorSpace(Axis.X, initial)
    if variant is Variant.Y_FACTOR:
        return FactorSpace(Axis.Y, initial)
    return PuzzleSpace(variant, GOAL if initial is None else initial)


# --- algorithmic heuristics -------------------------------------------------

_MD_TABLE = tuple(
    tuple(
        0
        if tile == 0
        else abs(pos // 3 - GOAL_POS[tile] // 3) + abs(pos % 3 - GOAL_POS[tile] % 3)
        for tile in range(9)
    )
    for pos in range(9)
)


def md(state: StateId) -> int:
    """Manhattan distance of tiles 1-8 from their goal cells; the blank is ignored."""
    total = 0
    for pos in range(9):
        total += _MD_TABLE[pos][(state >> (4 * pos)) & 15]
    return total


def ra_exact(state: StateId) -> int:
    """Exact solution length when any tile may swap with the blank.

    Each misplaced tile needs one move into its goal cell, and each
    permutation cycle that does not pass through the blank costs one extra
    move to bring the blank into it.
    """
    dest = [_GOAL_POS_LIST[(state >> (4 * pos)) & 15] for pos in range(9)]
    blank = state >> _BLANK_SHIFT
    seen = 0
    misplaced = 0
    cycles = 0
    for start in range(9):
        if seen >> start & 1 or dest[start] == start:
            continue
        length = 0
        touches_blank = False
        pos = start
        while not seen >> pos & 1:
            seen |= 1 << pos
            touches_blank = touches_blank or pos == blank
            length += 1
            pos = dest[pos]
        if touches_blank:
            misplaced += length - 1
        else:
            misplaced += length
            cycles += 1
    return misplaced + cycles


def factor_md(key: StateId) -> int:
    """Sum over tiles of the line distance to the goal line, read off an occupancy key."""
    total = 0
    for i in range(3):
        for j in range(3):
            if i != j:
                total += ((key >> (2 * (3 * i + j))) & 3) * abs(i - j)
    return total


MD = AlgorithmicHeuristic(md, "md")
RA_EXACT = AlgorithmicHeuristic(ra_exact, "ra_exact")
FACTOR_MD = AlgorithmicHeuristic(factor_md, "factor_md")


class XYMode(enum.Enum):
    PER_CALL_SEARCH = "PER_CALL_SEARCH"
    # one backward sweep per factor space; a speedup transformation
    PRECOMPUTED_TABLE = "PRECOMPUTED_TABLE"


@lru_cache(maxsize=None)
def factor_table(axis: Axis) -> dict[StateId, int]:
    return goal_distances(FactorSpace(axis))


class XYHeuristic:
    """Sum of the optimal costs of the X and Y factor problems."""

    def __init__(
        self,
        mode: XYMode = XYMode.PER_CALL_SEARCH,
        inner=FACTOR_MD,
        ledger: ExpansionLedger | None = None,
        tie: TieBreak = TieBreak.FIFO,
        budget: int | None = None,
    ):
        self.mode = XYMode(mode)
        self.inner = inner
        self.ledger = ledger if ledger is not None else ExpansionLedger()
        self.tie = tie
        self.budget = budget
        self.kind = (
            HeuristicKind.SEARCH_BASED
            if self.mode is XYMode.PER_CALL_SEARCH
            else HeuristicKind.ALGORITHMIC
        )
        self.name = f"xy_{self.mode.value.lower()}"
        self._spaces = {axis: FactorSpace(axis) for axis in Axis}

    def evaluate(self, state: StateId) -> int:
        keys = {axis: factor_project(state, axis).key for axis in Axis}
        if self.mode is XYMode.PRECOMPUTED_TABLE:
            return sum(factor_table(axis)[keys[axis]] for axis in Axis)
        total = 0
        sub = ExpansionLedger()
        for axis in Axis:
            out = astar(
                self._spaces[axis],
                self.inner,
                self.tie,
                sub,
                start=keys[axis],
                budget=self.budget,
            )
            total += out.optimal_cost
        self.ledger.secondary_expansions += sub.base_expansions
        self.ledger.per_call.append((state, sub.base_expansions))
        return total

    __call__ = evaluate


def xy(
    state: StateId,
    mode: XYMode = XYMode.PER_CALL_SEARCH,
    inner=FACTOR_MD,
    ledger: ExpansionLedger | None = None,
) -> int:
    return XYHeuristic(mode, inner, ledger).evaluate(state)


@lru_cache(maxsize=None)
def goal_distance_table(variant: Variant) -> dict[StateId, int]:
    """h* for every state of a space, by one uniform-cost sweep back from the goal."""
    return goal_distances(make_space(variant))


# --- instances ---------------------------------------------------------------


def scramble(seed: int, walk_length: int) -> tuple[StateId, int]:
    """Random walk of legal moves from the goal, never undoing the previous move.

    Returns the reached state and its exact optimal depth.
    """
    if walk_length < 0:
        raise ValueError("walk_length must be nonnegative")
    rng = random.Random(seed)
    state = GOAL
    prev_blank = None
    for _ in range(walk_length):
        b = state >> _BLANK_SHIFT
        t = rng.choice([t for t in _NEIGHBOURS[Variant.BASE][b] if t != prev_blank])
        v = (state >> (4 * t)) & 15
        state = state - (v << (4 * t)) + (v << (4 * b)) + ((t - b) << _BLANK_SHIFT)
        prev_blank = b
    depth = astar(PuzzleSpace(Variant.BASE, state), MD).optimal_cost
    return state, depth
