"""Session engine: the exact interaction loop of the environment.

Each interaction runs, in order:

1. relocate the trail droppers when the relocation interval divides the
   interaction counter (never at interaction 0);
2. overwrite Good's cell reward with ``max_reward`` and Evil's with
   ``min_reward`` at their pre-move cells;
3. deliver every agent its reward from the previous interaction (0 on
   the first one);
4. take a single occupancy snapshot and hand the same observation to
   every agent;
5. collect one action per evaluable agent and a sequence of
   ``moves_per_interaction`` actions per generator;
6. apply all moves simultaneously (generator sequences stepwise);
7. if Good and Evil land on one cell, whoever did not move wins the
   spot, and a fair coin decides when both moved;
8. set every agent's next reward to its cell's reward divided by the
   number of agents in that cell (generators count as occupants but
   their shares are discarded);
9. halve the reward of every cell;
10. zero the reward of every cell holding an agent.

Rewards live in ``[min_reward, max_reward] = [-1, 1]``, observations
carry no reward information, and the whole trajectory is a pure
function of ``(config, seed)``.
"""

from __future__ import annotations

import random
import time as _time
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .agents import (
    EVIL_NAME,
    GOOD_NAME,
    GeneratorBehavior,
    HistoryBuffer,
    InteractionRecord,
    Role,
    _observer_action,
    generator_next,
    push_interaction,
)
from .generate import GeneratedSpace, GenerationLimits, generate_space
from .space import Space, SpaceObject, parse_space, serialize_space


class SessionError(ValueError):
    """Raised for invalid session configurations or protocol misuse."""


# ---------------------------------------------------------------------------
# Policies


class RandomPolicy:
    """Uniform over all actions, stay included."""

    kind = "random"


class ObserverPolicy:
    """Moves toward Good (staying put when beside it), avoids Evil."""

    kind = "observer"


class ScriptedPolicy:
    """Plays a fixed action sequence; the session must not outlive it."""

    kind = "scripted"

    def __init__(self, actions: Sequence[int]):
        self.actions = tuple(actions)


class ExternalPolicy:
    """Actions arrive from outside (a human or a remote program)."""

    kind = "external"


@dataclass(frozen=True)
class AgentSpec:
    """One evaluable agent: policy, virtual time bounds, memory size."""

    name: str
    policy: object
    min_time: float = 0.0
    max_time: float = 0.0
    history_capacity: int = 0

    def __post_init__(self) -> None:
        if self.name in (GOOD_NAME, EVIL_NAME):
            raise SessionError(f"agent name {self.name!r} is reserved")
        if self.max_time < self.min_time:
            raise SessionError("max_time < min_time")


@dataclass(frozen=True)
class SessionConfig:
    """Complete parameterization of one evaluation session.

    ``space`` may be a description string, a parsed :class:`Space` or
    :class:`GenerationLimits` (a fresh space is generated from the
    session's own stream).  ``relocation_interval`` of 0 disables
    relocation and ``None`` asks for the size-proportional default of
    ``cell_count * action_count``.  Exactly one of ``interactions`` and
    ``time_budget`` must be set.
    """

    space: str | Space | GenerationLimits
    agents: tuple[AgentSpec, ...]
    generator_behavior: GeneratorBehavior = GeneratorBehavior()
    good_behavior: GeneratorBehavior | None = None
    evil_behavior: GeneratorBehavior | None = None
    max_reward: float = 1.0
    min_reward: float = -1.0
    interactions: int | None = None
    time_budget: float | None = None
    relocation_interval: int | None = 0
    seed: int = 0
    debug_rewards_visible: bool = False
    objects: tuple[SpaceObject, ...] = ()
    include_generators: bool = True
    collision_tie_break: str = "random"
    initial_positions: Mapping[str, int] | None = None
    record_trace: bool = False

    def __post_init__(self) -> None:
        if isinstance(self.agents, Sequence) and not isinstance(self.agents, tuple):
            object.__setattr__(self, "agents", tuple(self.agents))
        if not self.agents:
            raise SessionError("at least one evaluable agent is required")
        names = [spec.name for spec in self.agents]
        if len(set(names)) != len(names):
            raise SessionError("agent names must be unique")
        if self.min_reward != -self.max_reward:
            raise SessionError("rewards must be symmetric: min_reward == -max_reward")
        if self.max_reward <= 0:
            raise SessionError("max_reward must be positive")
        if (self.interactions is None) == (self.time_budget is None):
            raise SessionError("set exactly one of interactions and time_budget")
        if self.interactions is not None and self.interactions < 1:
            raise SessionError("interactions must be at least 1")
        if self.time_budget is not None and self.time_budget <= 0:
            raise SessionError("time_budget must be positive")
        if self.relocation_interval is not None and self.relocation_interval < 0:
            raise SessionError("relocation_interval must be >= 0")
        if self.collision_tie_break not in ("random", "good_reverts"):
            raise SessionError(f"unknown tie break {self.collision_tie_break!r}")
        if not self.include_generators:
            for spec in self.agents:
                if spec.policy.kind == "observer":
                    raise SessionError("observer needs the generators present")


# ---------------------------------------------------------------------------
# Observations

GLYPHS = {Role.EVALUABLE: "π", Role.GOOD: "⊕", Role.EVIL: "⊖"}
MASK_GLYPH = "⊙"
OBJECT_GLYPH = "ω"


class Observation:
    """Reward-free snapshot of who stands where.

    Immutable: positions are copied out of the live state, so later
    interactions never alter a stored observation.
    """

    __slots__ = ("space", "names", "roles", "positions", "objects")

    def __init__(self, space, names, roles, positions, objects):
        self.space = space
        self.names = names
        self.roles = roles
        self.positions = positions
        self.objects = objects

    def cell_of(self, name: str) -> int:
        return self.positions[self.names.index(name)]

    def occupants(self, cell: int) -> list[tuple[str, Role]]:
        """Agents in ``cell``, evaluables first, then Good, then Evil."""
        return [
            (name, role)
            for name, role, pos in zip(self.names, self.roles, self.positions)
            if pos == cell
        ]

    def objects_in(self, cell: int) -> list[tuple[int, SpaceObject]]:
        return [(i + 1, obj) for i, obj in enumerate(self.objects) if obj.location == cell]

    def actions_reaching(self, cell: int, from_cell: int) -> list[int]:
        row = self.space.targets[from_cell - 1]
        return [a for a in range(self.space.action_count) if row[a] == cell]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Observation):
            return NotImplemented
        return (
            self.space is other.space
            and self.names == other.names
            and self.positions == other.positions
            and self.objects == other.objects
        )

    def __repr__(self) -> str:
        pairs = ", ".join(f"{n}@{p}" for n, p in zip(self.names, self.positions))
        return f"Observation({pairs})"


def serialize_observation(
    observation: Observation, perspective: str = "evaluable", agent: str | None = None
) -> str:
    """Render an observation as the one-line cell listing.

    Cells are joined by ``:`` (an empty cell is an empty segment, so a
    trailing empty cell leaves a trailing separator).  Occupants appear
    in canonical order, objects by index, then the explicit actions of
    ``agent``'s cell that reach the listed cell, as ``A<i>``.  The
    ``masked`` perspective renders Good and Evil with the same
    indistinct glyph.
    """
    if perspective not in ("evaluable", "masked"):
        raise ValueError(f"unknown perspective {perspective!r}")
    if agent is None:
        agent = next(
            name
            for name, role in zip(observation.names, observation.roles)
            if role is Role.EVALUABLE
        )
    here = observation.cell_of(agent)
    row = observation.space.targets[here - 1]
    segments = []
    for cell in range(1, observation.space.cell_count + 1):
        parts = []
        for name, role in observation.occupants(cell):
            if perspective == "masked" and role in (Role.GOOD, Role.EVIL):
                parts.append(MASK_GLYPH)
            else:
                parts.append(GLYPHS[role])
        for index, _obj in observation.objects_in(cell):
            parts.append(f"{OBJECT_GLYPH}{index}")
        for action in range(1, observation.space.action_count):
            if row[action] == cell:
                parts.append(f"A{action}")
        segments.append("".join(parts))
    return ":".join(segments)


# ---------------------------------------------------------------------------
# Session state

PHASE_READY = 0
PHASE_ACTING = 1


@dataclass
class TraceRow:
    index: int
    actions: tuple
    rewards: tuple
    good_cell: int
    evil_cell: int
    evaluated_cell: int


class SessionState:
    """Mutable state of a running session; create with :func:`init_session`."""

    def __init__(self, config: SessionConfig):
        self.config = config
        self.rng = random.Random(config.seed)

        source = config.space
        if isinstance(source, GenerationLimits):
            generated: GeneratedSpace = generate_space(source, self.rng)
            self.space = generated.space
            self.description = generated.description
            self.rejections = generated.rejections
        elif isinstance(source, Space):
            self.space = source
            self.description = serialize_space(source)
            self.rejections = 0
        else:
            self.space = parse_space(source)
            self.description = source
            self.rejections = 0

        for obj in config.objects:
            if not 1 <= obj.location <= self.space.cell_count:
                raise SessionError(f"object {obj.name!r} placed outside the space")

        self.eval_count = len(config.agents)
        names = [spec.name for spec in config.agents]
        roles = [Role.EVALUABLE] * self.eval_count
        if config.include_generators:
            self.good_slot = self.eval_count
            self.evil_slot = self.eval_count + 1
            names += [GOOD_NAME, EVIL_NAME]
            roles += [Role.GOOD, Role.EVIL]
            shared = config.generator_behavior
            self.good_behavior = config.good_behavior or shared
            self.evil_behavior = config.evil_behavior or shared
            for behavior in (self.good_behavior, self.evil_behavior):
                if behavior.mode == "pattern":
                    for action in behavior.pattern:
                        if not 0 <= action < self.space.action_count:
                            raise SessionError(
                                f"pattern action {action} invalid for this space"
                            )
        else:
            self.good_slot = None
            self.evil_slot = None
            self.good_behavior = None
            self.evil_behavior = None
        self.names = tuple(names)
        self.roles = tuple(roles)
        self.slot_of = {name: slot for slot, name in enumerate(self.names)}

        # Destination pools for randomly moving generators: the distinct
        # cells reachable from each cell, own cell included.
        self._dest_pools: tuple[tuple[int, ...], ...] | None = None
        if config.include_generators and "random" in (
            self.good_behavior.mode,
            self.evil_behavior.mode,
        ):
            self._dest_pools = tuple(
                tuple(sorted(set(row))) for row in self.space.targets
            )

        if config.relocation_interval is None:
            self.relocation_interval = self.space.cell_count * self.space.action_count
        else:
            self.relocation_interval = config.relocation_interval

        # Placement: evaluables first, then the generators, re-rolled
        # until they land on distinct cells.
        n_c = self.space.cell_count
        rng = self.rng
        pinned = dict(config.initial_positions or {})
        for name, cell in pinned.items():
            if name not in self.slot_of:
                raise SessionError(f"initial position for unknown agent {name!r}")
            if not 1 <= cell <= n_c:
                raise SessionError(f"initial position {cell} outside 1..{n_c}")
        self.positions: list[int] = []
        for name in self.names[: self.eval_count]:
            self.positions.append(pinned.get(name) or rng.randrange(n_c) + 1)
        if config.include_generators:
            good_pin = pinned.get(GOOD_NAME)
            evil_pin = pinned.get(EVIL_NAME)
            if good_pin and evil_pin:
                if good_pin == evil_pin:
                    raise SessionError("good and evil cannot start in the same cell")
                good, evil = good_pin, evil_pin
            else:
                while True:
                    good = good_pin or rng.randrange(n_c) + 1
                    evil = evil_pin or rng.randrange(n_c) + 1
                    if good != evil:
                        break
            self.positions += [good, evil]

        self.cell_rewards = [0.0] * (n_c + 1)  # slot 0 unused; all start at 0
        self.pending = [0.0] * self.eval_count
        self.cumulative = [0.0] * self.eval_count
        self.elapsed = [0.0] * self.eval_count
        self.reward_traces: list[list[float]] = [[] for _ in range(self.eval_count)]
        self.histories = [HistoryBuffer(spec.history_capacity) for spec in config.agents]
        self.any_history = any(spec.history_capacity > 0 for spec in config.agents)
        self.interaction_index = 0
        self.phase = PHASE_READY
        self.current_observation: Observation | None = None
        self.trace_rows: list[TraceRow] = []
        self._occupancy = [0] * (n_c + 1)
        self._kinds = tuple(spec.policy.kind for spec in config.agents)
        self._scripts = tuple(
            spec.policy.actions if spec.policy.kind == "scripted" else None
            for spec in config.agents
        )
        self._times = tuple((spec.min_time, spec.max_time) for spec in config.agents)
        self._any_timed = any(t != (0.0, 0.0) for t in self._times)
        self._actions = [0] * self.eval_count
        self.needs_snapshot = (
            self.any_history
            or config.record_trace
            or any(kind == "external" for kind in self._kinds)
        )
        self.started_wall = _time.monotonic()

    # -- queries used by the gateway -------------------------------------

    def delivered_reward(self, name: str) -> float:
        """Reward delivered to ``name`` at the start of the next interaction."""
        return self.pending[self.slot_of[name]]

    def totals(self, name: str) -> tuple[float, int, float]:
        """(cumulative V, interactions n, average v) with all earned rewards credited."""
        slot = self.slot_of[name]
        v = self.cumulative[slot]
        n = self.interaction_index
        return v, n, (v / n if n else 0.0)


def init_session(config: SessionConfig) -> SessionState:
    """Place every agent uniformly at random on a zero-reward board."""
    return SessionState(config)


def snapshot_observation(state: SessionState) -> Observation:
    """Deep copy of the occupancy; later mutation never leaks into it."""
    return Observation(
        state.space,
        state.names,
        state.roles,
        tuple(state.positions),
        state.config.objects,
    )


def relocate_generators(state: SessionState, rng: random.Random) -> SessionState:
    """Move Good and Evil to fresh cells, re-rolled until distinct.

    Cell rewards are untouched: relocation washes out placement luck,
    not the trails.
    """
    if state.good_slot is None:
        return state
    n_c = state.space.cell_count
    while True:
        good = rng.randrange(n_c) + 1
        evil = rng.randrange(n_c) + 1
        if good != evil:
            break
    state.positions[state.good_slot] = good
    state.positions[state.evil_slot] = evil
    return state


def resolve_collision(
    good_before: int,
    good_after: int,
    evil_before: int,
    evil_after: int,
    rng: random.Random,
    tie_break: str = "random",
) -> tuple[int, int]:
    """Undo one generator's move when both would share a cell.

    The one that stayed keeps its cell; if both moved, a fair coin picks
    who reverts (or Good reverts under the deterministic tie break).
    """
    if good_after != evil_after:
        return good_after, evil_after
    if good_after == good_before:
        return good_after, evil_before
    if evil_after == evil_before:
        return good_before, evil_after
    if tie_break == "good_reverts" or rng.random() < 0.5:
        return good_before, evil_after
    return good_after, evil_before


def begin_interaction(
    state: SessionState, config: SessionConfig, build_observation: bool | None = None
) -> Observation | None:
    """Steps 1-4: relocation, trail drops, reward delivery, snapshot.

    The snapshot object is only materialized when something stores or
    transmits it (histories, traces, external agents); the built-in
    policies read the identical pre-move positions directly, so the
    information handed to every agent is the same either way.
    """
    if state.phase != PHASE_READY:
        raise SessionError("interaction already in progress")
    index = state.interaction_index
    interval = state.relocation_interval
    if interval and index and index % interval == 0:
        relocate_generators(state, state.rng)
    good_slot = state.good_slot
    if good_slot is not None:
        positions = state.positions
        cell_rewards = state.cell_rewards
        cell_rewards[positions[good_slot]] = config.max_reward
        cell_rewards[positions[state.evil_slot]] = config.min_reward
    # Delivery of the previous reward: state.pending already holds it
    # per agent, and cumulative totals were credited when it was earned.
    if build_observation is None:
        build_observation = state.needs_snapshot
    observation = snapshot_observation(state) if build_observation else None
    state.current_observation = observation
    state.phase = PHASE_ACTING
    return observation


def complete_interaction(
    state: SessionState,
    config: SessionConfig,
    external_actions: Mapping[str, int] | None = None,
    external_elapsed: Mapping[str, float] | None = None,
) -> None:
    """Steps 5-10: actions, moves, collision, rewards, decay, zeroing."""
    if state.phase != PHASE_ACTING:
        raise SessionError("no interaction awaiting actions")
    rng = state.rng
    rand = rng.random
    space = state.space
    targets = space.targets
    n_a = space.action_count
    positions = state.positions
    index = state.interaction_index
    good_slot = state.good_slot
    evil_slot = state.evil_slot
    eval_count = state.eval_count
    kinds = state._kinds
    actions = state._actions

    # Collect actions from every evaluable on the shared pre-move view.
    for slot in range(eval_count):
        kind = kinds[slot]
        if kind == "random":
            actions[slot] = int(rand() * n_a)
        elif kind == "observer":
            actions[slot] = _observer_action(
                space, positions[slot], positions[good_slot], positions[evil_slot], rng
            )
        elif kind == "scripted":
            script = state._scripts[slot]
            if index >= len(script):
                raise SessionError(f"script for {state.names[slot]!r} exhausted")
            action = script[index]
            if not 0 <= action < n_a:
                raise SessionError(
                    f"agent {state.names[slot]!r} chose invalid action {action!r}"
                )
            actions[slot] = action
        else:  # external
            name = state.names[slot]
            if external_actions is None or name not in external_actions:
                raise SessionError(f"no action supplied for external agent {name!r}")
            action = external_actions[name]
            if not isinstance(action, int) or isinstance(action, bool) or not (
                0 <= action < n_a
            ):
                raise SessionError(f"agent {name!r} chose invalid action {action!r}")
            actions[slot] = action

    elapsed_now = None
    if state._any_timed or external_elapsed:
        elapsed_now = []
        for slot in range(eval_count):
            min_t, max_t = state._times[slot]
            if external_elapsed and state.names[slot] in external_elapsed:
                spent = external_elapsed[state.names[slot]]
            elif max_t > min_t:
                spent = min_t + rand() * (max_t - min_t)
            else:
                spent = min_t
            elapsed_now.append(spent)
            state.elapsed[slot] += spent

    # Generator action sequences for this interaction.
    good_moves = evil_moves = None
    if good_slot is not None:
        good_before = positions[good_slot]
        evil_before = positions[evil_slot]
        behavior = state.good_behavior
        if behavior.moves_per_interaction == 1 and not config.record_trace:
            if behavior.mode == "random":
                pool = state._dest_pools[good_before - 1]
                good_after = pool[int(rand() * len(pool))]
            else:
                pattern = behavior.pattern
                good_after = targets[good_before - 1][pattern[index % len(pattern)]]
        else:
            good_moves = generator_next(behavior, index, rng, n_a, space, good_before)
            good_after = good_before
            for move in good_moves:
                good_after = targets[good_after - 1][move]
        behavior = state.evil_behavior
        if behavior.moves_per_interaction == 1 and not config.record_trace:
            if behavior.mode == "random":
                pool = state._dest_pools[evil_before - 1]
                evil_after = pool[int(rand() * len(pool))]
            else:
                pattern = behavior.pattern
                evil_after = targets[evil_before - 1][pattern[index % len(pattern)]]
        else:
            evil_moves = generator_next(behavior, index, rng, n_a, space, evil_before)
            evil_after = evil_before
            for move in evil_moves:
                evil_after = targets[evil_after - 1][move]

    # Apply all moves simultaneously.
    for slot in range(eval_count):
        pos = positions[slot]
        positions[slot] = targets[pos - 1][actions[slot]]
    if good_slot is not None:
        if good_after == evil_after:
            good_after, evil_after = resolve_collision(
                good_before,
                good_after,
                evil_before,
                evil_after,
                rng,
                config.collision_tie_break,
            )
        positions[good_slot] = good_after
        positions[evil_slot] = evil_after

    # Earned rewards: the cell's reward split over its occupants.
    cell_rewards = state.cell_rewards
    occupancy = state._occupancy
    for pos in positions:
        occupancy[pos] += 1
    pending = state.pending
    cumulative = state.cumulative
    traces = state.reward_traces
    for slot in range(eval_count):
        pos = positions[slot]
        share = cell_rewards[pos] / occupancy[pos]
        pending[slot] = share
        cumulative[slot] += share
        traces[slot].append(share)

    # Decay, then zero out every occupied cell.
    for cell in range(1, space.cell_count + 1):
        cell_rewards[cell] *= 0.5
    for pos in positions:
        cell_rewards[pos] = 0.0
        occupancy[pos] = 0

    if state.any_history:
        observation = state.current_observation
        for slot in range(eval_count):
            if state.histories[slot].capacity > 0:
                push_interaction(
                    state.histories[slot],
                    InteractionRecord(
                        observation=observation,
                        action=actions[slot],
                        reward=pending[slot],
                        elapsed_time=elapsed_now[slot] if elapsed_now else 0.0,
                    ),
                )
    if config.record_trace:
        all_actions = list(actions)
        if good_slot is not None:
            all_actions += [good_moves, evil_moves]
        state.trace_rows.append(
            TraceRow(
                index=index,
                actions=tuple(all_actions),
                rewards=tuple(pending),
                good_cell=positions[good_slot] if good_slot is not None else 0,
                evil_cell=positions[evil_slot] if evil_slot is not None else 0,
                evaluated_cell=positions[0],
            )
        )

    state.interaction_index = index + 1
    state.phase = PHASE_READY
    state.current_observation = None


def advance_interaction(
    state: SessionState,
    config: SessionConfig,
    external_actions: Mapping[str, int] | None = None,
) -> SessionState:
    """Run one full interaction (steps 1-10)."""
    begin_interaction(state, config)
    complete_interaction(state, config, external_actions)
    return state


def _advance_many(state: SessionState, config: SessionConfig, count: int) -> None:
    """Run ``count`` interactions of the plain synthetic case.

    Semantically identical to ``advance_interaction`` in a loop, with the
    loop invariants hoisted; only usable when nothing records snapshots,
    histories, traces or virtual time and no agent is externally driven.
    Long sessions spend their whole life in here.
    """
    if state.phase != PHASE_READY:
        raise SessionError("interaction already in progress")
    rng = state.rng
    rand = rng.random
    space = state.space
    targets = space.targets
    n_a = space.action_count
    n_c = space.cell_count
    positions = state.positions
    cell_rewards = state.cell_rewards
    occupancy = state._occupancy
    pending = state.pending
    cumulative = state.cumulative
    traces = state.reward_traces
    kinds = state._kinds
    scripts = state._scripts
    actions = state._actions
    eval_count = state.eval_count
    eval_range = range(eval_count)
    good_slot = state.good_slot
    evil_slot = state.evil_slot
    interval = state.relocation_interval
    max_reward = config.max_reward
    min_reward = config.min_reward
    tie_break = config.collision_tie_break
    observer_action = _observer_action
    if good_slot is not None:
        good_behavior = state.good_behavior
        evil_behavior = state.evil_behavior
        good_random = good_behavior.mode == "random" and good_behavior.moves_per_interaction == 1
        evil_random = evil_behavior.mode == "random" and evil_behavior.moves_per_interaction == 1
        dest_pools = state._dest_pools

    index = state.interaction_index
    for _ in range(count):
        if interval and index and index % interval == 0:
            relocate_generators(state, rng)
        if good_slot is not None:
            good_before = positions[good_slot]
            evil_before = positions[evil_slot]
            cell_rewards[good_before] = max_reward
            cell_rewards[evil_before] = min_reward

        for slot in eval_range:
            kind = kinds[slot]
            if kind == "random":
                actions[slot] = int(rand() * n_a)
            elif kind == "observer":
                actions[slot] = observer_action(
                    space, positions[slot], positions[good_slot], positions[evil_slot], rng
                )
            else:  # scripted
                script = scripts[slot]
                if index >= len(script):
                    raise SessionError(f"script for {state.names[slot]!r} exhausted")
                action = script[index]
                if not 0 <= action < n_a:
                    raise SessionError(
                        f"agent {state.names[slot]!r} chose invalid action {action!r}"
                    )
                actions[slot] = action

        if good_slot is not None:
            if good_random:
                pool = dest_pools[good_before - 1]
                good_after = pool[int(rand() * len(pool))]
            elif good_behavior.mode == "pattern" and good_behavior.moves_per_interaction == 1:
                pattern = good_behavior.pattern
                good_after = targets[good_before - 1][pattern[index % len(pattern)]]
            else:
                good_after = good_before
                for move in generator_next(good_behavior, index, rng, n_a, space, good_before):
                    good_after = targets[good_after - 1][move]
            if evil_random:
                pool = dest_pools[evil_before - 1]
                evil_after = pool[int(rand() * len(pool))]
            elif evil_behavior.mode == "pattern" and evil_behavior.moves_per_interaction == 1:
                pattern = evil_behavior.pattern
                evil_after = targets[evil_before - 1][pattern[index % len(pattern)]]
            else:
                evil_after = evil_before
                for move in generator_next(evil_behavior, index, rng, n_a, space, evil_before):
                    evil_after = targets[evil_after - 1][move]

        for slot in eval_range:
            positions[slot] = targets[positions[slot] - 1][actions[slot]]
        if good_slot is not None:
            if good_after == evil_after:
                good_after, evil_after = resolve_collision(
                    good_before, good_after, evil_before, evil_after, rng, tie_break
                )
            positions[good_slot] = good_after
            positions[evil_slot] = evil_after

        for pos in positions:
            occupancy[pos] += 1
        for slot in eval_range:
            pos = positions[slot]
            share = cell_rewards[pos] / occupancy[pos]
            pending[slot] = share
            cumulative[slot] += share
            traces[slot].append(share)

        for cell in range(1, n_c + 1):
            cell_rewards[cell] *= 0.5
        for pos in positions:
            cell_rewards[pos] = 0.0
            occupancy[pos] = 0
        index += 1
    state.interaction_index = index


# ---------------------------------------------------------------------------
# Results


@dataclass(frozen=True)
class AgentResult:
    """Score of one evaluable agent over a finished session."""

    name: str
    cumulative_reward: float
    interactions: int
    average_reward: float
    reward_trace: tuple[float, ...]
    virtual_time: float


@dataclass(frozen=True)
class SessionResult:
    agents: tuple[AgentResult, ...]
    space_description: str
    seed: int
    wall_time: float
    trace_rows: tuple[TraceRow, ...] = field(default=(), repr=False)

    def agent(self, name: str) -> AgentResult:
        for result in self.agents:
            if result.name == name:
                return result
        raise KeyError(name)

    @property
    def evaluated(self) -> AgentResult:
        return self.agents[0]


def session_result(state: SessionState) -> SessionResult:
    n = state.interaction_index
    agents = tuple(
        AgentResult(
            name=state.names[slot],
            cumulative_reward=state.cumulative[slot],
            interactions=n,
            average_reward=state.cumulative[slot] / n if n else 0.0,
            reward_trace=tuple(state.reward_traces[slot]),
            virtual_time=state.elapsed[slot],
        )
        for slot in range(state.eval_count)
    )
    return SessionResult(
        agents=agents,
        space_description=state.description,
        seed=state.config.seed,
        wall_time=_time.monotonic() - state.started_wall,
        trace_rows=tuple(state.trace_rows),
    )


def run_session(config: SessionConfig) -> SessionResult:
    """Run a whole session and score it.

    Interaction-count mode runs exactly ``interactions`` loops; every
    earned reward is credited, the last one included, so the average is
    the full sum over the count.  Time-budget mode advances until the
    evaluated agent's summed elapsed time reaches the budget.
    """
    for spec in config.agents:
        if spec.policy.kind == "external":
            raise SessionError("externally driven agents cannot use run_session")
    state = init_session(config)
    if config.interactions is not None:
        if state.needs_snapshot or state._any_timed:
            for _ in range(config.interactions):
                begin_interaction(state, config)
                complete_interaction(state, config)
        else:
            _advance_many(state, config, config.interactions)
    else:
        if config.agents[0].max_time <= 0:
            raise SessionError("time-budget mode needs a positive max_time")
        budget = config.time_budget
        while state.elapsed[0] < budget:
            begin_interaction(state, config)
            complete_interaction(state, config)
    return session_result(state)


# ---------------------------------------------------------------------------
# Trace export

TRACE_DELIMITER = ","


def trace_table(result: SessionResult, agent_names: Iterable[str]) -> str:
    """Delimited text table of a recorded session trace.

    One row per interaction: index, each agent's action (generator
    sequences joined by ``;``), each evaluable's earned reward, and the
    end-of-interaction cells of Good, Evil and the evaluated agent.
    """
    names = list(agent_names)
    header = (
        ["index"]
        + [f"action_{name}" for name in names]
        + [f"reward_{name}" for name in names[: len(result.agents)]]
        + ["good_cell", "evil_cell", "evaluated_cell"]
    )
    lines = [TRACE_DELIMITER.join(header)]
    for row in result.trace_rows:
        cells = [str(row.index)]
        for action in row.actions:
            if isinstance(action, tuple):
                cells.append(";".join(map(str, action)))
            else:
                cells.append(str(action))
        cells += [repr(value) for value in row.rewards]
        cells += [str(row.good_cell), str(row.evil_cell), str(row.evaluated_cell)]
        lines.append(TRACE_DELIMITER.join(cells))
    return "\n".join(lines) + "\n"
