"""Reward sensitivity, checked by brute force.

A world is reward-sensitive when, after any action prefix, there are
still two continuations with different reward totals: the agent's
choices always matter.  The checker enumerates every prefix and every
continuation pair on a fully deterministic world and produces
replayable witnesses.
"""

from rewardtrail import DeterministicWorld, check_reward_sensitivity
from rewardtrail.evaluate import replay_total

world = DeterministicWorld(
    description="1+|1-",
    agent_start=1,
    good_start=1,
    evil_start=2,
    good_pattern=(0,),
    evil_pattern=(0,),
)
report = check_reward_sensitivity(world, horizon=2, prefix_depth=4)
print(f"2-cell world with stationary droppers: sensitive = {report.sensitive}")
print(f"witnesses found: {len(report.witnesses)} (one per prefix)")
print()
print("a few witnesses, replayed:")
for witness in report.witnesses[:5]:
    first = replay_total(world, witness.prefix + witness.first)
    second = replay_total(world, witness.prefix + witness.second)
    print(
        f"  after {list(witness.prefix)!s:<16} playing {list(witness.first)} earns "
        f"{first:+.3f}, playing {list(witness.second)} earns {second:+.3f}"
    )
print()

dead = DeterministicWorld(description="1+|1-", agent_start=1, include_generators=False)
boring = check_reward_sensitivity(dead, horizon=2, prefix_depth=2)
print(f"without droppers every reward is zero: sensitive = {boring.sensitive} "
      f"({len(boring.dead_prefixes)} dead prefixes)")
