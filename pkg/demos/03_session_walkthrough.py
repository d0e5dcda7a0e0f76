"""One session, step by step.

Good drops +1 and Evil drops -1 at their cells each interaction, every
trail halves per interaction and vanishes under visitors, and agents
collect (and share) whatever their cell holds.  Here a scripted agent
chases the positive dropper around a 4-cell ring; every cell of the
world is printed after each move.
"""

from rewardtrail import (
    AgentSpec,
    GeneratorBehavior,
    ScriptedPolicy,
    SessionConfig,
    advance_interaction,
    init_session,
    run_session,
    serialize_observation,
    snapshot_observation,
    trace_table,
)

RING = "1+2++3+++|1+2++3+++|1+2++3+++|1+2++3+++"
SCRIPT = (1, 1, 0, 1, 2)

config = SessionConfig(
    space=RING,
    agents=(AgentSpec("walker", ScriptedPolicy(SCRIPT)),),
    good_behavior=GeneratorBehavior(mode="pattern", pattern=(1,)),
    evil_behavior=GeneratorBehavior(mode="pattern", pattern=(1,)),
    interactions=len(SCRIPT),
    seed=0,
    relocation_interval=0,
    initial_positions={"walker": 1, "good": 2, "evil": 4},
    record_trace=True,
)

state = init_session(config)
print("ring:", RING)
print("start:", serialize_observation(snapshot_observation(state)))
for step, action in enumerate(SCRIPT):
    advance_interaction(state, config)
    rewards = "  ".join(f"{cell}:{value:+.3f}" for cell, value in enumerate(state.cell_rewards[1:], 1))
    print(
        f"interaction {step}: action {action} -> "
        f"{serialize_observation(snapshot_observation(state))}"
        f"   earned {state.pending[0]:+.2f}   trails {rewards}"
    )
print()

result = run_session(config)
print("same session as an exported trace table:")
print(trace_table(result, ["walker", "good", "evil"]))
print(f"score: {result.evaluated.cumulative_reward:+.3f} over {result.evaluated.interactions} "
      f"interactions = {result.evaluated.average_reward:+.3f} average")
