"""Random space generation.

Sizes come from a bounded geometric distribution (the smallest value has
probability 1/2, the next 1/4, and so on; everything past the cap folds
into the cap), a computable stand-in for preferring simpler spaces.
Topology is uniform: every explicit action of every cell gets an offset
magnitude drawn from 0..cells-1 and a random direction.  Spaces that
miss the required connectivity are rejected and regenerated.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .space import MAX_ACTIONS, ConnectivityClass, Space, connectivity_class, parse_space


class GenerationError(RuntimeError):
    """Raised when rejection sampling exhausts its budget."""


@dataclass(frozen=True)
class GenerationLimits:
    """Bounds and requirements for random space generation."""

    min_cells: int = 2
    max_cells: int | None = None
    min_actions: int = 2
    max_actions: int = MAX_ACTIONS
    connectivity: ConnectivityClass = ConnectivityClass.CONNECTED
    max_rejections: int = 10_000

    def __post_init__(self) -> None:
        if self.min_cells < 2:
            raise ValueError("min_cells must be at least 2")
        if self.max_cells is not None and self.max_cells < self.min_cells:
            raise ValueError("max_cells < min_cells")
        if self.min_actions < 2:
            raise ValueError("min_actions must be at least 2")
        if not self.min_actions <= self.max_actions <= MAX_ACTIONS:
            raise ValueError(f"max_actions must be in [min_actions, {MAX_ACTIONS}]")
        if self.connectivity is ConnectivityClass.DISCONNECTED:
            raise ValueError("connectivity requirement must be connected or stronger")
        if self.max_rejections < 1:
            raise ValueError("max_rejections must be positive")

    @classmethod
    def fixed(
        cls,
        cells: int,
        actions: int,
        connectivity: ConnectivityClass = ConnectivityClass.CONNECTED,
        max_rejections: int = 10_000,
    ) -> "GenerationLimits":
        """Limits that pin both sizes, as the reported experiments do."""
        return cls(
            min_cells=cells,
            max_cells=cells,
            min_actions=actions,
            max_actions=actions,
            connectivity=connectivity,
            max_rejections=max_rejections,
        )


@dataclass(frozen=True)
class GeneratedSpace:
    space: Space
    description: str
    rejections: int = field(default=0, compare=False)


def sample_bounded_geometric(
    minimum: int, maximum: int | None, rng: random.Random
) -> int:
    """Draw ``minimum`` with probability 1/2, ``minimum + 1`` with 1/4, ...

    With a ``maximum``, all mass beyond it is assigned to it, so the cap
    collects the geometric tail.
    """
    if minimum < 0:
        raise ValueError("minimum must be non-negative")
    if maximum is not None and maximum < minimum:
        raise ValueError("maximum < minimum")
    value = minimum
    while maximum is None or value < maximum:
        if rng.random() < 0.5:
            break
        value += 1
    return value


def generate_space_description(
    n_cells: int, n_actions_total: int, rng: random.Random
) -> str:
    """Uniform random description for fixed sizes.

    ``n_actions_total`` counts the implicit stay action, so each cell
    gets explicit actions 1..n_actions_total-1.  More actions than cells
    are pointless (two actions of a cell would always coincide), hence
    the cap at ``n_cells``.
    """
    if n_cells < 2:
        raise ValueError("n_cells must be at least 2")
    if not 2 <= n_actions_total <= min(n_cells, MAX_ACTIONS):
        raise ValueError(
            f"n_actions_total must be in [2, min(n_cells, {MAX_ACTIONS})], "
            f"got {n_actions_total} for {n_cells} cells"
        )
    segments = []
    for _ in range(n_cells):
        parts = []
        for action in range(1, n_actions_total):
            magnitude = rng.randrange(n_cells)
            sign = "+" if rng.randrange(2) == 0 else "-"
            parts.append(f"{action}{sign * magnitude}")
        segments.append("".join(parts))
    return "|".join(segments)


def generate_space(limits: GenerationLimits, rng: random.Random) -> GeneratedSpace:
    """Sample sizes, then regenerate until the connectivity requirement holds.

    The sizes are drawn once; only the topology is resampled on
    rejection.  Raises :class:`GenerationError` after
    ``limits.max_rejections`` failed attempts.
    """
    n_cells = sample_bounded_geometric(limits.min_cells, limits.max_cells, rng)
    n_actions = sample_bounded_geometric(
        limits.min_actions, min(n_cells, limits.max_actions), rng
    )
    rejections = 0
    while True:
        description = generate_space_description(n_cells, n_actions, rng)
        space = parse_space(description)
        if connectivity_class(space) >= limits.connectivity:
            return GeneratedSpace(space=space, description=description, rejections=rejections)
        rejections += 1
        if rejections > limits.max_rejections:
            raise GenerationError(
                f"no {limits.connectivity.name.lower()} space found in "
                f"{limits.max_rejections} attempts ({n_cells} cells, {n_actions} actions)"
            )
