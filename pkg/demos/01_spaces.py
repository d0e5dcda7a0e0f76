"""Spaces: the text codec, transitions and connectivity.

A space is a directed graph of cells; the description lists, per cell,
each explicit action with a toroidal offset ('+' forward, '-' backward,
nothing = stay).  Action 0 always keeps the agent in place and is never
written out.
"""

from rewardtrail import (
    ConnectivityClass,
    connectivity_class,
    parse_space,
    serialize_space,
    transition,
)

FOUR = "1+2++3|1+23-|1+23|1+2--3-"

space = parse_space(FOUR)
print(f"description: {FOUR}")
print(f"cells: {space.cell_count}, actions: {space.action_count} (incl. stay)")
print()

print("walking from every cell:")
for cell in range(1, space.cell_count + 1):
    reached = {action: transition(space, cell, action) for action in range(space.action_count)}
    print(f"  cell {cell}: " + "  ".join(f"a{a}->{t}" for a, t in reached.items()))
print()

print("canonical serialization uses only forward offsets:")
print(f"  parse('1-|1-') serializes as {serialize_space(parse_space('1-|1-'))!r}")
print()

for description in (FOUR, "1+|1-", "1+|1", "1|1|1"):
    kind = connectivity_class(parse_space(description))
    note = {
        ConnectivityClass.STRONGLY_CONNECTED: "every cell reaches every other",
        ConnectivityClass.CONNECTED: "linked ignoring direction, some pair unreachable",
        ConnectivityClass.DISCONNECTED: "isolated parts",
    }[kind]
    print(f"{description!r:>30}: {kind.name.lower()} ({note})")
