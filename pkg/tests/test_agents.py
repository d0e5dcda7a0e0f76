"""Agent policies, generator behaviors and the interaction history."""

import itertools
import random
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rewardtrail.agents import (
    GeneratorBehavior,
    HistoryBuffer,
    InteractionRecord,
    Role,
    generator_next,
    observer_choice,
    push_interaction,
    random_choice,
    reachable_cells,
)
from rewardtrail.session import Observation
from rewardtrail.space import parse_space


def make_observation(description, placements):
    """Observation with the given {name: (role, cell)} mapping."""
    space = parse_space(description)
    names = tuple(placements)
    roles = tuple(role for role, _ in placements.values())
    positions = tuple(cell for _, cell in placements.values())
    return Observation(space, names, roles, positions, ())


class TestRandomChoice:
    def test_uniform_over_all_actions(self):
        obs = make_observation("1+|1-", {"a": (Role.EVALUABLE, 1)})
        rng = random.Random(0)
        counts = Counter(random_choice(obs, "a", rng) for _ in range(10_000))
        assert set(counts) == {0, 1}
        assert abs(counts[0] / 10_000 - 0.5) <= 0.03

    def test_seeded_reproducibility(self):
        obs = make_observation("1+2++3|1+23-|1+23|1+2--3-", {"a": (Role.EVALUABLE, 1)})
        first = [random_choice(obs, "a", random.Random(5)) for _ in range(20)]
        second = [random_choice(obs, "a", random.Random(5)) for _ in range(20)]
        assert first == second


class TestObserverChoice:
    def test_stays_when_no_safe_move(self):
        # Sharing a cell with Good on the 2-cell ring: the only move
        # lands on Evil, so the observer stays.
        obs = make_observation(
            "1+|1-",
            {"o": (Role.EVALUABLE, 1), "good": (Role.GOOD, 1), "evil": (Role.EVIL, 2)},
        )
        assert observer_choice(obs, "o", "good", "evil", random.Random(0)) == 0

    def test_moves_onto_good(self):
        obs = make_observation(
            "1+|1-",
            {"o": (Role.EVALUABLE, 2), "good": (Role.GOOD, 1), "evil": (Role.EVIL, 2)},
        )
        assert observer_choice(obs, "o", "good", "evil", random.Random(0)) == 1

    def test_uniform_over_safe_moves(self):
        # From cell 1 the three explicit actions reach 2, 3, 4; Good and
        # Evil sit out of reach, so the wander is a uniform third each.
        description = "1+2++3+++|123|123|123|123"
        obs = make_observation(
            description,
            {"o": (Role.EVALUABLE, 1), "good": (Role.GOOD, 5), "evil": (Role.EVIL, 2)},
        )
        rng = random.Random(1)
        counts = Counter(
            observer_choice(obs, "o", "good", "evil", rng) for _ in range(9000)
        )
        assert set(counts) == {2, 3}  # action 1 reaches Evil's cell
        for action in (2, 3):
            assert abs(counts[action] / 9000 - 0.5) <= 0.03

    def test_uniform_thirds_when_three_candidates(self):
        # Evil parked on the observer's own cell frees all three moves.
        description = "1+2++3+++|123|123|123|123"
        obs = make_observation(
            description,
            {"o": (Role.EVALUABLE, 1), "good": (Role.GOOD, 5), "evil": (Role.EVIL, 1)},
        )
        rng = random.Random(2)
        counts = Counter(
            observer_choice(obs, "o", "good", "evil", rng) for _ in range(9000)
        )
        assert set(counts) == {1, 2, 3}
        for action in (1, 2, 3):
            assert abs(counts[action] / 9000 - 1 / 3) <= 0.03

    @given(data=st.data())
    @settings(max_examples=300, deadline=None)
    def test_never_moves_onto_evil_when_avoidable(self, data):
        cells = data.draw(st.integers(2, 6))
        explicit = data.draw(st.integers(1, 3))
        targets = tuple(
            (cell, *(data.draw(st.integers(1, cells)) for _ in range(explicit)))
            for cell in range(1, cells + 1)
        )
        from rewardtrail.space import Space

        space = Space(cells, explicit + 1, targets)
        me = data.draw(st.integers(1, cells))
        good = data.draw(st.integers(1, cells))
        evil = data.draw(st.integers(1, cells).filter(lambda c: c != good))
        obs = Observation(
            space,
            ("o", "good", "evil"),
            (Role.EVALUABLE, Role.GOOD, Role.EVIL),
            (me, good, evil),
            (),
        )
        action = observer_choice(obs, "o", "good", "evil", random.Random(0))
        target = space.targets[me - 1][action]
        row = space.targets[me - 1]
        moves = [row[a] for a in range(1, explicit + 1) if row[a] != me]
        if good == me:
            assert action == 0
        elif good in moves:
            assert target == good
        elif any(cell != evil for cell in moves):
            assert target != evil


class TestGeneratorBehavior:
    def test_validation(self):
        with pytest.raises(ValueError):
            GeneratorBehavior(mode="jump")
        with pytest.raises(ValueError):
            GeneratorBehavior(mode="pattern")
        with pytest.raises(ValueError):
            GeneratorBehavior(moves_per_interaction=0)

    def test_constant_pattern(self):
        behavior = GeneratorBehavior(mode="pattern", pattern=(1,))
        rng = random.Random(0)
        for step in range(10):
            assert generator_next(behavior, step, rng, 4) == (1,)

    def test_cycled_pattern_cursor(self):
        behavior = GeneratorBehavior(mode="pattern", pattern=(1, 2), moves_per_interaction=3)
        rng = random.Random(0)
        # Independent oracle: an endless cycle consumed 3 at a time.
        cycle = itertools.cycle((1, 2))
        expected0 = tuple(itertools.islice(cycle, 3))
        expected1 = tuple(itertools.islice(cycle, 3))
        assert generator_next(behavior, 0, rng, 4) == expected0 == (1, 2, 1)
        assert generator_next(behavior, 1, rng, 4) == expected1 == (2, 1, 2)

    def test_pattern_consumes_no_randomness(self):
        behavior = GeneratorBehavior(mode="pattern", pattern=(0, 1))
        rng = random.Random(9)
        state_before = rng.getstate()
        generator_next(behavior, 5, rng, 2)
        assert rng.getstate() == state_before

    def test_pattern_range_check(self):
        behavior = GeneratorBehavior(mode="pattern", pattern=(5,))
        with pytest.raises(ValueError):
            generator_next(behavior, 0, random.Random(0), 3)

    def test_multi_move_random_reproducible_pairs(self):
        behavior = GeneratorBehavior(mode="random", moves_per_interaction=2)
        first = [generator_next(behavior, s, random.Random(3), 4) for s in range(5)]
        second = [generator_next(behavior, s, random.Random(3), 4) for s in range(5)]
        assert first == second
        assert all(len(pair) == 2 for pair in first)
        assert all(0 <= a < 4 for pair in first for a in pair)

    def test_single_move_random_picks_destinations_uniformly(self):
        # Cell 1 of this space reaches {1, 2}: one action self-loops and
        # two actions lead to cell 2, which must not double its weight.
        space = parse_space("12+3+|123|123")
        assert reachable_cells(space, 1) == (1, 2)
        behavior = GeneratorBehavior(mode="random")
        rng = random.Random(4)
        seen = Counter()
        for _ in range(10_000):
            (action,) = generator_next(behavior, 0, rng, 4, space, 1)
            seen[space.targets[0][action]] += 1
        assert abs(seen[1] / 10_000 - 0.5) <= 0.03
        assert abs(seen[2] / 10_000 - 0.5) <= 0.03

    def test_single_move_random_needs_position(self):
        with pytest.raises(ValueError):
            generator_next(GeneratorBehavior(mode="random"), 0, random.Random(0), 4)


class TestHistoryBuffer:
    def record(self, reward):
        return InteractionRecord(observation=None, action=0, reward=reward)

    def test_eviction_keeps_last_two(self):
        buffer = HistoryBuffer(capacity=2)
        for reward in (0.1, 0.2, 0.3):
            push_interaction(buffer, self.record(reward))
        assert [r.reward for r in buffer.records] == [0.2, 0.3]

    def test_cumulative_survives_eviction(self):
        buffer = HistoryBuffer(capacity=1)
        for reward in (0.5, 0.5, -0.25):
            push_interaction(buffer, self.record(reward))
        assert buffer.cumulative_reward == pytest.approx(0.75, abs=1e-12)

    def test_zero_capacity_still_accumulates(self):
        buffer = HistoryBuffer(capacity=0)
        rewards = [0.125, -0.5, 1.0, 0.25]
        for reward in rewards:
            push_interaction(buffer, self.record(reward))
        assert len(buffer.records) == 0
        assert buffer.cumulative_reward == sum(rewards)

    def test_negative_capacity_rejected(self):
        with pytest.raises(ValueError):
            HistoryBuffer(capacity=-1)

    @given(st.lists(st.floats(-1, 1, allow_nan=False), max_size=60), st.integers(0, 5))
    @settings(max_examples=200, deadline=None)
    def test_cumulative_matches_running_sum(self, rewards, capacity):
        buffer = HistoryBuffer(capacity=capacity)
        total = 0.0
        for reward in rewards:
            push_interaction(buffer, self.record(reward))
            total += reward
        assert abs(buffer.cumulative_reward - total) <= 1e-12
        assert len(buffer.records) <= capacity
