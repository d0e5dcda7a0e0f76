"""Agent identities, behavior policies and interaction history.

Policies are pure: given an observation and an RNG they return an
action id.  The built-in evaluable policies are the uniform random
agent and the observer, which chases the positive trail dropper and
avoids the negative one.  Good and Evil share one
:class:`GeneratorBehavior` (random moves or a cycled pattern, possibly
several actions per interaction); giving them different behaviors is
how biased environments are built.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from .session import Observation

GOOD_NAME = "good"
EVIL_NAME = "evil"


class Role(Enum):
    EVALUABLE = "evaluable"
    GOOD = "good"
    EVIL = "evil"


@dataclass(frozen=True)
class AgentIdentity:
    name: str
    role: Role
    display_index: int = 0


@dataclass(frozen=True)
class GeneratorBehavior:
    """Shared behavior of the trail droppers.

    ``mode="random"`` with a single move per interaction picks the next
    cell uniformly among the distinct cells reachable from the current
    one (the own cell is always in that pool through the stay action):
    a dropper heads for an adjacent cell without favoring destinations
    that several actions happen to share.  With several moves per
    interaction the dropper may perform any sequence of actions, so
    each of the k draws ranges uniformly over all action ids instead.
    ``mode="pattern"`` cycles ``pattern`` forever (the stay action 0 is
    allowed there); the cursor advances by ``moves_per_interaction``
    entries each interaction.
    """

    mode: str = "random"
    pattern: tuple[int, ...] = ()
    moves_per_interaction: int = 1

    def __post_init__(self) -> None:
        if self.mode not in ("random", "pattern"):
            raise ValueError(f"unknown generator mode {self.mode!r}")
        if self.mode == "pattern" and not self.pattern:
            raise ValueError("pattern mode needs a non-empty pattern")
        if self.moves_per_interaction < 1:
            raise ValueError("moves_per_interaction must be at least 1")


def reachable_cells(space, from_cell: int) -> tuple[int, ...]:
    """Distinct destination cells from ``from_cell``, ascending.

    Always contains ``from_cell`` itself because action 0 stays.
    """
    return tuple(sorted(set(space.targets[from_cell - 1])))


def generator_next(
    behavior: GeneratorBehavior,
    step: int,
    rng: random.Random,
    action_count: int,
    space=None,
    from_cell: int | None = None,
) -> tuple[int, ...]:
    """Actions a generator performs at interaction ``step``.

    Random mode never looks at ``step``; pattern mode never touches the
    RNG, its cursor is ``step * moves_per_interaction`` into the cycled
    pattern.  Single-move random needs ``space`` and ``from_cell`` to
    enumerate the destination pool; the returned action is the smallest
    id that reaches the drawn destination.
    """
    k = behavior.moves_per_interaction
    rand = rng.random
    if behavior.mode == "random":
        if k > 1:
            return tuple(int(rand() * action_count) for _ in range(k))
        if space is None or from_cell is None:
            raise ValueError("single-move random needs the space and the mover's cell")
        pool = reachable_cells(space, from_cell)
        destination = pool[int(rand() * len(pool))]
        row = space.targets[from_cell - 1]
        return (next(a for a in range(action_count) if row[a] == destination),)
    pattern = behavior.pattern
    for action in pattern:
        if not 0 <= action < action_count:
            raise ValueError(f"pattern action {action} outside 0..{action_count - 1}")
    base = step * k
    return tuple(pattern[(base + j) % len(pattern)] for j in range(k))


def random_choice(observation: "Observation", agent: str, rng: random.Random) -> int:
    """Uniform draw over every available action, the stay action included."""
    return int(rng.random() * observation.space.action_count)


def observer_choice(
    observation: "Observation",
    agent: str,
    good: str,
    evil: str,
    rng: random.Random,
) -> int:
    """Chase the positive dropper, avoid the negative one, stay as last resort.

    Stays put when already sharing a cell with ``good``.  Otherwise, if a
    move reaches the cell of ``good``, pick uniformly among those moves;
    failing that, pick uniformly among moves to cells free of ``evil``;
    and when every move lands on ``evil``, stay.  Decisions use the
    pre-move positions from the current observation.
    """
    return _observer_action(
        observation.space,
        observation.cell_of(agent),
        observation.cell_of(good),
        observation.cell_of(evil),
        rng,
    )


def _observer_action(space, cell: int, good_cell: int, evil_cell: int, rng) -> int:
    if good_cell == cell:
        return 0
    row = space.targets[cell - 1]
    to_good: list[int] = []
    safe: list[int] = []
    for action in range(1, space.action_count):
        target = row[action]
        if target == cell:
            continue
        if target == good_cell:
            to_good.append(action)
        elif target != evil_cell:
            safe.append(action)
    pool = to_good or safe
    if not pool:
        return 0
    if len(pool) == 1:
        return pool[0]
    return pool[int(rng.random() * len(pool))]


@dataclass(frozen=True)
class InteractionRecord:
    """One remembered interaction: what was seen, done and earned."""

    observation: "Observation"
    action: int | tuple[int, ...]
    reward: float
    elapsed_time: float = 0.0


@dataclass
class HistoryBuffer:
    """Bounded memory of past interactions plus an unbounded reward total.

    Evicting old records never touches ``cumulative_reward``; a capacity
    of 0 remembers nothing but still accumulates.
    """

    capacity: int
    records: deque = field(default_factory=deque)
    cumulative_reward: float = 0.0

    def __post_init__(self) -> None:
        if self.capacity < 0:
            raise ValueError("capacity must be non-negative")
        self.records = deque(self.records, maxlen=self.capacity)


def push_interaction(buffer: HistoryBuffer, record: InteractionRecord) -> HistoryBuffer:
    """Append ``record``, evicting the oldest once over capacity."""
    if buffer.capacity > 0:
        buffer.records.append(record)
    buffer.cumulative_reward += record.reward
    return buffer
