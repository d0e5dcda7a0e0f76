"""Random spaces: geometric size sampling and connectivity rejection.

Sizes follow a bounded geometric law (half the mass on the minimum),
the topology is uniform, and candidates are rejected until the required
connectivity holds.
"""

import random
from collections import Counter

import numpy as np

from rewardtrail import (
    ConnectivityClass,
    GenerationLimits,
    connectivity_class,
    generate_space,
    sample_bounded_geometric,
)

rng = random.Random(2)

print("bounded geometric, minimum 2, cap 10 (10,000 draws):")
counts = Counter(sample_bounded_geometric(2, 10, rng) for _ in range(10_000))
for value in sorted(counts):
    bar = "#" * round(counts[value] / 100)
    print(f"  {value:>3}: {counts[value] / 10_000:6.3f} {bar}")
print()

limits = GenerationLimits(min_cells=4, max_cells=8, connectivity=ConnectivityClass.STRONGLY_CONNECTED)
print("five strongly connected spaces (cells are geometric, topology uniform):")
for index in range(5):
    generated = generate_space(limits, random.Random(index))
    space = generated.space
    print(
        f"  {space.cell_count} cells x {space.action_count} actions, "
        f"{generated.rejections} rejected: {generated.description}"
    )
print()

print("how often is a connected 10x10 space also strongly connected?")
strong = 0
for index in range(200):
    generated = generate_space(
        GenerationLimits.fixed(10, 10, ConnectivityClass.CONNECTED), random.Random(index)
    )
    strong += connectivity_class(generated.space) is ConnectivityClass.STRONGLY_CONNECTED
print(f"  {strong}/200 = {strong / 2:.1f}% (rich action sets leave almost no traps)")

rejections = [
    generate_space(GenerationLimits.fixed(4, 3), random.Random(seed)).rejections
    for seed in range(100)
]
print(f"rejections to get a connected 4x3 space: mean {np.mean(rejections):.2f}, max {max(rejections)}")
