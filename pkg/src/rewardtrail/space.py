"""Directed-graph spaces and their textual description codec.

A space is a directed labeled multigraph: ``cell_count`` cells (numbered
from 1) and ``action_count`` actions (numbered from 0).  Every cell has
exactly one outgoing edge per action, and action 0 is always a self-loop,
so an agent may stay put at any time.

The textual codec writes one segment per cell, segments separated by
``|``.  Within a segment each explicit action (1..9, ascending) is a
digit followed by a run of ``+`` or ``-`` signs; the run length is a
toroidal offset from the current cell, forward or backward, and an empty
run means the action keeps the agent in place.  Action 0 never appears
in a description.  Example: in ``1+2++3|1+23-|1+23|1+2--3-`` the space
has 4 cells, and from cell 1 action 1 leads to cell 2, action 2 to
cell 3 and action 3 stays.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum

MAX_ACTIONS = 10  # total, counting the implicit stay action 0


class SpaceFormatError(ValueError):
    """Raised when a space description violates the codec grammar."""


@dataclass(frozen=True)
class Space:
    """Immutable transition structure of a space.

    ``targets[cell - 1][action]`` is the 1-based cell reached from
    ``cell`` by ``action``.  Row 0 of each cell is the stay action.
    """

    cell_count: int
    action_count: int
    targets: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if self.cell_count < 2:
            raise SpaceFormatError(f"need at least 2 cells, got {self.cell_count}")
        if not 2 <= self.action_count <= MAX_ACTIONS:
            raise SpaceFormatError(
                f"total action count must be in [2, {MAX_ACTIONS}], got {self.action_count}"
            )
        if len(self.targets) != self.cell_count:
            raise SpaceFormatError("one target row required per cell")
        for cell0, row in enumerate(self.targets):
            if len(row) != self.action_count:
                raise SpaceFormatError(f"cell {cell0 + 1} does not define every action")
            if row[0] != cell0 + 1:
                raise SpaceFormatError(f"action 0 must keep cell {cell0 + 1} in place")
            for action, target in enumerate(row):
                if not 1 <= target <= self.cell_count:
                    raise SpaceFormatError(
                        f"cell {cell0 + 1} action {action} targets {target}, "
                        f"outside 1..{self.cell_count}"
                    )

    def transition(self, cell: int, action: int) -> int:
        return transition(self, cell, action)


@dataclass(frozen=True)
class SpaceObject:
    """Inanimate marker pinned to one cell for the whole session."""

    name: str
    location: int


class ConnectivityClass(IntEnum):
    """How thoroughly the cells of a space are linked.

    Ordered so that a stronger class compares greater; strong
    connectivity implies (undirected) connectivity.
    """

    DISCONNECTED = 0
    CONNECTED = 1
    STRONGLY_CONNECTED = 2


def parse_space(description: str) -> Space:
    """Build a :class:`Space` from its textual description.

    Raises :class:`SpaceFormatError` on any grammar or consistency
    violation: empty cells, a non-digit where an action id belongs,
    mixed signs inside one offset run, action ids out of ascending
    1..k order, or cells declaring different action sets.
    """
    if not description:
        raise SpaceFormatError("empty description")
    segments = description.split("|")
    cell_count = len(segments)
    if cell_count < 2:
        raise SpaceFormatError("a space needs at least 2 cells (use '|')")

    per_cell_entries: list[list[int]] = []
    for cell0, segment in enumerate(segments):
        entries = _parse_cell(segment, cell0 + 1, cell_count)
        per_cell_entries.append(entries)

    explicit = len(per_cell_entries[0])
    for cell0, entries in enumerate(per_cell_entries):
        if len(entries) != explicit:
            raise SpaceFormatError(
                f"cell {cell0 + 1} declares {len(entries)} actions, "
                f"cell 1 declares {explicit}"
            )

    action_count = explicit + 1
    if action_count > MAX_ACTIONS:
        raise SpaceFormatError(f"too many actions: {action_count} > {MAX_ACTIONS}")
    targets = tuple(
        (cell0 + 1, *entries) for cell0, entries in enumerate(per_cell_entries)
    )
    return Space(cell_count=cell_count, action_count=action_count, targets=targets)


def _parse_cell(segment: str, cell: int, cell_count: int) -> list[int]:
    """Parse one cell segment into the target list of actions 1..k."""
    if not segment:
        raise SpaceFormatError(f"cell {cell} declares no actions")
    targets: list[int] = []
    expected = 1
    i = 0
    while i < len(segment):
        char = segment[i]
        if not char.isdigit() or char == "0":
            raise SpaceFormatError(
                f"cell {cell}: expected action digit 1-9 at position {i}, found {char!r}"
            )
        action = int(char)
        if action != expected:
            raise SpaceFormatError(
                f"cell {cell}: action ids must be contiguous and ascending, "
                f"expected {expected}, found {action}"
            )
        i += 1
        run_start = i
        while i < len(segment) and segment[i] in "+-":
            i += 1
        run = segment[run_start:i]
        if "+" in run and "-" in run:
            raise SpaceFormatError(f"cell {cell}, action {action}: mixed signs in offset")
        offset = len(run) if run.startswith("+") else -len(run)
        # Offsets larger than the ring are fine: the index is toroidal.
        targets.append((cell - 1 + offset) % cell_count + 1)
        expected += 1
    return targets


def serialize_space(space: Space) -> str:
    """Write the canonical description of ``space``.

    Canonical form uses only forward (``+``) offsets: a backward hop of
    1 on a 2-cell ring serializes as ``+``.  The round-trip guarantee is
    graph equality, not string equality.
    """
    segments = []
    for cell in range(1, space.cell_count + 1):
        parts = []
        for action in range(1, space.action_count):
            target = space.targets[cell - 1][action]
            hops = (target - cell) % space.cell_count
            parts.append(f"{action}{'+' * hops}")
        segments.append("".join(parts))
    return "|".join(segments)


def transition(space: Space, cell: int, action: int) -> int:
    """Cell reached from ``cell`` by ``action``."""
    if not 1 <= cell <= space.cell_count:
        raise ValueError(f"cell {cell} outside 1..{space.cell_count}")
    if not 0 <= action < space.action_count:
        raise ValueError(f"action {action} outside 0..{space.action_count - 1}")
    return space.targets[cell - 1][action]


def connectivity_class(space: Space) -> ConnectivityClass:
    """Classify ``space`` as disconnected, connected or strongly connected.

    Strongly connected means every ordered pair of cells is joined by a
    directed path.  Connected means the underlying undirected graph
    (self-loops ignored) has a single component.
    """
    if _single_scc(space):
        return ConnectivityClass.STRONGLY_CONNECTED
    if _undirected_connected(space):
        return ConnectivityClass.CONNECTED
    return ConnectivityClass.DISCONNECTED


def _single_scc(space: Space) -> bool:
    """True when the whole graph is one strongly connected component.

    Iterative Tarjan; the recursion-free form keeps large generated
    spaces away from Python's stack limit.
    """
    n = space.cell_count
    index: dict[int, int] = {}
    lowlink: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    counter = 0
    scc_count = 0

    for root in range(1, n + 1):
        if root in index:
            continue
        work = [(root, iter(space.targets[root - 1]))]
        index[root] = lowlink[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, edges = work[-1]
            advanced = False
            for w in edges:
                if w not in index:
                    index[w] = lowlink[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(space.targets[w - 1])))
                    advanced = True
                    break
                if w in on_stack:
                    lowlink[v] = min(lowlink[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                lowlink[parent] = min(lowlink[parent], lowlink[v])
            if lowlink[v] == index[v]:
                scc_count += 1
                if scc_count > 1:
                    return False
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    if w == v:
                        break
    return scc_count == 1 and len(index) == n


def _undirected_connected(space: Space) -> bool:
    n = space.cell_count
    neighbours: list[set[int]] = [set() for _ in range(n + 1)]
    for cell in range(1, n + 1):
        for action in range(1, space.action_count):
            target = space.targets[cell - 1][action]
            if target != cell:
                neighbours[cell].add(target)
                neighbours[target].add(cell)
    seen = {1}
    frontier = [1]
    while frontier:
        cell = frontier.pop()
        for nxt in neighbours[cell]:
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    return len(seen) == n


def graph_equal(a: Space, b: Space) -> bool:
    """Equality on the transition structure (descriptions may differ)."""
    return a.targets == b.targets
