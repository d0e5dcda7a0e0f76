"""Scoring, balance estimation, reward-sensitivity checking and suites.

A session scores an agent by its average reward (cumulative over
interaction count).  A set of sessions over sampled environments
aggregates into a single normalized figure.  Balance (a random agent
averaging zero) is estimated empirically with a normal-approximation
interval.  Reward sensitivity is checked by brute force on small fully
deterministic worlds: from every action prefix some pair of bounded
continuations must yield different reward sums.

The experiment suites mirror the reference setups: manually defined
spaces of 2..10 cells, randomly generated connected and strongly
connected classes, biased worlds where Good and Evil no longer share a
behavior, social sessions evaluating several agents together, and
multi-move generators.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, replace

import numpy as np

from .agents import GeneratorBehavior
from .generate import GenerationLimits
from .seeding import derive_seed
from .session import (
    AgentSpec,
    ObserverPolicy,
    RandomPolicy,
    ScriptedPolicy,
    SessionConfig,
    SessionResult,
    run_session,
)
from .space import ConnectivityClass, parse_space

# The manually defined spaces used throughout the reported experiments,
# keyed by cell count.  Every one of them is strongly connected.
MANUAL_SPACES: dict[int, str] = {
    2: "1+|1-",
    4: "1+2++3|1+23-|1+23|1+2--3-",
    6: "1--2+|1++2--|1++2-|12---|1-2+|12---",
    8: "1+2+++3|1+2-3---|1++2-3|1---2++3+|1+++2--3-|1--2+3|1-2+3+++|1-2---3",
    10: "123+++++|1-23+++++|1-2+3+++++|12+3+++++|123+++++|1+2++3|1+23|"
    "1++++2-----3----|12-3|1--2-3",
}

MANUAL_LADDER = (5, 10, 20, 50, 100, 200, 500, 1000, 2000, 100_000)
AUTO_LADDER = (5, 10, 20, 50, 100, 200, 500, 1000, 2000, 10_000)

# Size classes (cells, total actions) of the generated-space experiments.
AUTO_SIZE_CLASSES = (
    (4, 3),
    (4, 4),
    (6, 4),
    (6, 6),
    (8, 4),
    (8, 6),
    (8, 8),
    (10, 4),
    (10, 7),
    (10, 10),
)

POLICIES = {"random": RandomPolicy, "observer": ObserverPolicy}


def average_reward(result: SessionResult, agent: str | None = None) -> float:
    """Average reward of an evaluated agent: cumulative over interactions."""
    scored = result.evaluated if agent is None else result.agent(agent)
    if scored.interactions == 0:
        raise ValueError("no interactions: the average is undefined")
    return scored.cumulative_reward / scored.interactions


def universal_score(results: list[SessionResult], interactions: int) -> float:
    """Mean cumulative reward over a set of environments, normalized.

    Every session must have run exactly ``interactions`` interactions;
    the score is the summed cumulative rewards over
    ``len(results) * interactions``, which equals the plain mean of the
    per-session averages and is invariant under reordering.
    """
    if not results:
        raise ValueError("need at least one session result")
    for result in results:
        if result.evaluated.interactions != interactions:
            raise ValueError(
                f"session ran {result.evaluated.interactions} interactions, "
                f"expected {interactions}"
            )
    total = sum(result.evaluated.cumulative_reward for result in results)
    return total / (len(results) * interactions)


@dataclass(frozen=True)
class BalanceEstimate:
    """Empirical check that a random agent averages zero reward."""

    mean: float
    std: float
    half_width: float
    sessions: int
    iterations: int

    @property
    def balanced_consistent(self) -> bool:
        """True when the observed mean is within the 95% interval of 0."""
        return abs(self.mean) <= self.half_width


def estimate_balance(
    space,
    sessions: int,
    iterations: int,
    seed: int,
    relocation_interval: int | None = None,
) -> BalanceEstimate:
    """Run independent random-agent sessions and summarize their averages.

    ``space`` may be a description or :class:`GenerationLimits`; with
    limits every session generates a fresh space from its own stream.
    """
    if sessions < 2:
        raise ValueError("need at least 2 sessions for a spread estimate")
    values = np.empty(sessions)
    for index in range(sessions):
        config = SessionConfig(
            space=space,
            agents=(AgentSpec("random", RandomPolicy()),),
            interactions=iterations,
            seed=derive_seed(seed, "balance", index),
            relocation_interval=relocation_interval,
        )
        values[index] = run_session(config).evaluated.average_reward
    std = float(values.std(ddof=1))
    return BalanceEstimate(
        mean=float(values.mean()),
        std=std,
        half_width=1.96 * std / sessions**0.5,
        sessions=sessions,
        iterations=iterations,
    )


# ---------------------------------------------------------------------------
# Reward sensitivity


@dataclass(frozen=True)
class DeterministicWorld:
    """A fully deterministic session setup for brute-force checking.

    Generators follow fixed patterns (or are absent), placements are
    pinned, relocation is off, and collisions resolve by the fixed
    Good-reverts rule, so a trajectory is a pure function of the action
    sequence.
    """

    description: str
    agent_start: int
    good_start: int | None = None
    evil_start: int | None = None
    good_pattern: tuple[int, ...] = (0,)
    evil_pattern: tuple[int, ...] = (0,)
    include_generators: bool = True

    def __post_init__(self) -> None:
        if self.include_generators:
            if self.good_start is None or self.evil_start is None:
                raise ValueError("generator starting cells are required")
            if self.good_start == self.evil_start:
                raise ValueError("good and evil cannot share a starting cell")


@dataclass(frozen=True)
class Witness:
    """Two continuations of one prefix with provably different reward sums."""

    prefix: tuple[int, ...]
    length: int
    first: tuple[int, ...]
    second: tuple[int, ...]
    first_sum: float
    second_sum: float


@dataclass(frozen=True)
class SensitivityReport:
    sensitive: bool
    horizon: int
    prefix_depth: int
    witnesses: tuple[Witness, ...]
    dead_prefixes: tuple[tuple[int, ...], ...]


def replay_total(world: DeterministicWorld, actions: tuple[int, ...]) -> float:
    """Total reward the evaluated agent earns playing ``actions``."""
    if not actions:
        return 0.0
    positions = {"agent": world.agent_start}
    if world.include_generators:
        positions["good"] = world.good_start
        positions["evil"] = world.evil_start
    config = SessionConfig(
        space=world.description,
        agents=(AgentSpec("agent", ScriptedPolicy(actions)),),
        good_behavior=GeneratorBehavior(mode="pattern", pattern=world.good_pattern),
        evil_behavior=GeneratorBehavior(mode="pattern", pattern=world.evil_pattern),
        interactions=len(actions),
        relocation_interval=0,
        seed=0,
        include_generators=world.include_generators,
        collision_tie_break="good_reverts",
        initial_positions=positions,
    )
    return run_session(config).evaluated.cumulative_reward


def check_reward_sensitivity(
    world: DeterministicWorld, horizon: int, prefix_depth: int
) -> SensitivityReport:
    """Brute-force the sensitivity property on a deterministic world.

    For every action prefix up to ``prefix_depth``, search continuation
    pairs of length at most ``horizon`` whose total rewards differ.  The
    world is sensitive when every prefix admits such a pair.  The search
    is exponential in both bounds; it is meant for tiny spaces.
    """
    if horizon < 1 or prefix_depth < 0:
        raise ValueError("horizon must be >= 1 and prefix_depth >= 0")
    n_a = parse_space(world.description).action_count
    witnesses: list[Witness] = []
    dead: list[tuple[int, ...]] = []
    for k in range(prefix_depth + 1):
        for prefix in itertools.product(range(n_a), repeat=k):
            witness = _diverging_pair(world, prefix, horizon, n_a)
            if witness is None:
                dead.append(prefix)
            else:
                witnesses.append(witness)
    return SensitivityReport(
        sensitive=not dead,
        horizon=horizon,
        prefix_depth=prefix_depth,
        witnesses=tuple(witnesses),
        dead_prefixes=tuple(dead),
    )


def _diverging_pair(world, prefix, horizon, n_a) -> Witness | None:
    for length in range(1, horizon + 1):
        seen: dict[float, tuple[int, ...]] = {}
        for continuation in itertools.product(range(n_a), repeat=length):
            total = replay_total(world, prefix + continuation)
            for other_total, other in seen.items():
                if total != other_total:
                    return Witness(
                        prefix=prefix,
                        length=length,
                        first=other,
                        second=continuation,
                        first_sum=other_total,
                        second_sum=total,
                    )
            seen.setdefault(total, continuation)
    return None


# ---------------------------------------------------------------------------
# Experiment suites


@dataclass(frozen=True)
class SuiteSpec:
    """One experiment table: agents, environment source, ladder, modes.

    ``agents`` holds policy kinds; with ``social=True`` they share the
    same sessions and compete for the trails, otherwise each kind is
    evaluated in sessions of its own.  ``relocation_modes`` entries are
    0 (never), a fixed interval, or ``None`` for the size-proportional
    default.
    """

    name: str
    space: str | GenerationLimits
    agents: tuple[str, ...] = ("random", "observer")
    social: bool = False
    ladder: tuple[int, ...] = MANUAL_LADDER
    sessions: int = 10
    relocation_modes: tuple[int | None, ...] = (None, 0)
    generator_behavior: GeneratorBehavior = GeneratorBehavior()
    good_behavior: GeneratorBehavior | None = None
    evil_behavior: GeneratorBehavior | None = None
    seed: int = 20101001

    def __post_init__(self) -> None:
        if not self.agents:
            raise ValueError("a suite needs at least one agent kind")
        for kind in self.agents:
            if kind not in POLICIES:
                raise ValueError(f"unknown agent kind {kind!r}")
        if any(a <= 0 for a in self.ladder) or list(self.ladder) != sorted(set(self.ladder)):
            raise ValueError("ladder must be strictly increasing and positive")
        if self.sessions < 1:
            raise ValueError("sessions must be >= 1")


@dataclass(frozen=True)
class SuiteRow:
    agent: str
    relocation: str
    iterations: int
    mean: float
    sessions: int
    seed: int


@dataclass(frozen=True)
class SuiteReport:
    name: str
    rows: tuple[SuiteRow, ...]

    def mean(self, agent: str, relocation: str, iterations: int) -> float:
        for row in self.rows:
            if (row.agent, row.relocation, row.iterations) == (
                agent,
                relocation,
                iterations,
            ):
                return row.mean
        raise KeyError((agent, relocation, iterations))

    def to_csv(self) -> str:
        lines = ["agent,relocation,iterations,mean,sessions,seed"]
        for row in self.rows:
            lines.append(
                f"{row.agent},{row.relocation},{row.iterations},"
                f"{row.mean!r},{row.sessions},{row.seed}"
            )
        return "\n".join(lines) + "\n"


def _relocation_label(mode: int | None) -> str:
    if mode is None:
        return "auto"
    if mode == 0:
        return "none"
    return str(mode)


def run_suite(spec: SuiteSpec) -> SuiteReport:
    """Run a whole experiment table; bit-reproducible for a fixed seed.

    Every (relocation mode, ladder point, session index) triple gets its
    own derived seed, so cells are statistically independent and any
    cell can be recomputed in isolation.
    """
    rows: list[SuiteRow] = []
    rosters = [spec.agents] if spec.social else [(kind,) for kind in spec.agents]
    for mode in spec.relocation_modes:
        label = _relocation_label(mode)
        for iterations in spec.ladder:
            for roster in rosters:
                sums = {kind: 0.0 for kind in roster}
                for index in range(spec.sessions):
                    seed = derive_seed(spec.seed, label, iterations, "+".join(roster), index)
                    config = SessionConfig(
                        space=spec.space,
                        agents=tuple(
                            AgentSpec(kind, POLICIES[kind]()) for kind in roster
                        ),
                        generator_behavior=spec.generator_behavior,
                        good_behavior=spec.good_behavior,
                        evil_behavior=spec.evil_behavior,
                        interactions=iterations,
                        seed=seed,
                        relocation_interval=mode,
                    )
                    result = run_session(config)
                    for kind in roster:
                        sums[kind] += result.agent(kind).average_reward
                for kind in roster:
                    rows.append(
                        SuiteRow(
                            agent=kind,
                            relocation=label,
                            iterations=iterations,
                            mean=sums[kind] / spec.sessions,
                            sessions=spec.sessions,
                            seed=spec.seed,
                        )
                    )
    return SuiteReport(name=spec.name, rows=tuple(rows))


def _auto_limits(cells: int, actions: int, connectivity: ConnectivityClass) -> GenerationLimits:
    return GenerationLimits.fixed(cells, actions, connectivity)


def suite_preset(name: str) -> SuiteSpec:
    """Look up one of the named experiment suites."""
    presets = _presets()
    try:
        return presets[name]
    except KeyError:
        known = ", ".join(sorted(presets))
        raise KeyError(f"unknown suite {name!r}; known suites: {known}") from None


def suite_names() -> tuple[str, ...]:
    return tuple(sorted(_presets()))


def _presets() -> dict[str, SuiteSpec]:
    presets: dict[str, SuiteSpec] = {}
    for cells, description in MANUAL_SPACES.items():
        presets[f"manual_{cells}"] = SuiteSpec(
            name=f"manual_{cells}", space=description
        )
    for cells, actions in AUTO_SIZE_CLASSES:
        for connectivity, tag in (
            (ConnectivityClass.CONNECTED, "connected"),
            (ConnectivityClass.STRONGLY_CONNECTED, "strong"),
        ):
            name = f"auto_{tag}_{cells}x{actions}"
            presets[name] = SuiteSpec(
                name=name,
                space=_auto_limits(cells, actions, connectivity),
                ladder=AUTO_LADDER,
                sessions=100,
            )
    presets["biased_1"] = SuiteSpec(
        name="biased_1",
        space=MANUAL_SPACES[4],
        agents=("random",),
        good_behavior=GeneratorBehavior(mode="pattern", pattern=(0,)),
    )
    # "Always changes cell": on the 4-cell space only action 1 never
    # self-loops, so the restless dropper cycles it around the ring.
    presets["biased_2"] = SuiteSpec(
        name="biased_2",
        space=MANUAL_SPACES[4],
        agents=("random",),
        good_behavior=GeneratorBehavior(mode="pattern", pattern=(1,)),
    )
    presets["social_manual_8"] = SuiteSpec(
        name="social_manual_8", space=MANUAL_SPACES[8], social=True
    )
    for connectivity, tag in (
        (ConnectivityClass.CONNECTED, "connected"),
        (ConnectivityClass.STRONGLY_CONNECTED, "strong"),
    ):
        name = f"social_auto_8x6_{tag}"
        presets[name] = SuiteSpec(
            name=name,
            space=_auto_limits(8, 6, connectivity),
            social=True,
            ladder=AUTO_LADDER,
            sessions=100,
        )
    for moves in (2, 3, 4):
        name = f"multimove_manual_8_k{moves}"
        presets[name] = SuiteSpec(
            name=name,
            space=MANUAL_SPACES[8],
            generator_behavior=GeneratorBehavior(mode="random", moves_per_interaction=moves),
        )
        for connectivity, tag in (
            (ConnectivityClass.CONNECTED, "connected"),
            (ConnectivityClass.STRONGLY_CONNECTED, "strong"),
        ):
            name = f"multimove_auto_8x6_{tag}_k{moves}"
            presets[name] = SuiteSpec(
                name=name,
                space=_auto_limits(8, 6, connectivity),
                generator_behavior=GeneratorBehavior(
                    mode="random", moves_per_interaction=moves
                ),
                ladder=AUTO_LADDER,
                sessions=100,
            )
    return presets


# ---------------------------------------------------------------------------
# Plain-text suite configuration (key=value lines)


def parse_suite_config(text: str) -> dict[str, str]:
    """Parse ``key=value`` lines; ``#`` starts a comment, blanks ignored."""
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected key=value, got {raw!r}")
        key, _, value = line.partition("=")
        values[key.strip()] = value.strip()
    return values


def _parse_behavior(text: str) -> GeneratorBehavior:
    if text == "random":
        return GeneratorBehavior(mode="random")
    if text.startswith("pattern:"):
        pattern = tuple(int(part) for part in text.split(":", 1)[1].split(",") if part)
        return GeneratorBehavior(mode="pattern", pattern=pattern)
    raise ValueError(f"unknown generator spec {text!r} (random or pattern:1,2,...)")


def _parse_relocation(text: str) -> int | None:
    if text == "auto":
        return None
    return int(text)


def suite_from_config(values: dict[str, str], name: str | None = None) -> SuiteSpec:
    """Build a suite from a preset and/or key=value overrides.

    Recognized keys: name, space, cells, actions, connectivity, agents,
    social, ladder, sessions, relocation, generator, good, evil, moves,
    seed.  A ``name`` matching a preset supplies the defaults.
    """
    name = values.get("name", name)
    spec: SuiteSpec | None = None
    if name is not None:
        try:
            spec = suite_preset(name)
        except KeyError:
            if "space" not in values and "cells" not in values:
                raise
    if spec is None:
        spec = SuiteSpec(name=name or "custom", space=MANUAL_SPACES[2])
    updates: dict = {}
    if "space" in values:
        updates["space"] = values["space"]
    elif "cells" in values:
        connectivity = {
            "connected": ConnectivityClass.CONNECTED,
            "strong": ConnectivityClass.STRONGLY_CONNECTED,
        }[values.get("connectivity", "connected")]
        updates["space"] = GenerationLimits.fixed(
            int(values["cells"]), int(values.get("actions", values["cells"])), connectivity
        )
    if "agents" in values:
        updates["agents"] = tuple(values["agents"].split(","))
    if "social" in values:
        updates["social"] = values["social"] in ("1", "true", "yes")
    if "ladder" in values:
        updates["ladder"] = tuple(int(part) for part in values["ladder"].split(","))
    if "sessions" in values:
        updates["sessions"] = int(values["sessions"])
    if "relocation" in values:
        updates["relocation_modes"] = tuple(
            _parse_relocation(part) for part in values["relocation"].split(",")
        )
    if "generator" in values or "moves" in values:
        behavior = _parse_behavior(values.get("generator", "random"))
        behavior = replace(
            behavior, moves_per_interaction=int(values.get("moves", 1))
        )
        updates["generator_behavior"] = behavior
    if "good" in values:
        updates["good_behavior"] = _parse_behavior(values["good"])
    if "evil" in values:
        updates["evil_behavior"] = _parse_behavior(values["evil"])
    if "seed" in values:
        updates["seed"] = int(values["seed"])
    if name is not None:
        updates["name"] = name
    return replace(spec, **updates)
